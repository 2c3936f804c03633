#include "posedb/io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "posedb/errors.hpp"

namespace posedb {

namespace {

const char* role_colour(Role role) {
  switch (role) {
    case Role::base: return "black";
    case Role::connector: return "steelblue";
    case Role::gadget: return "darkorange";
  }
  return "gray";
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint32_t u32() {
    if (pos_ + 4 > data_.size()) throw StructureError("binary dump is truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  std::vector<NodeId> list() {
    const std::uint32_t n = u32();
    if (n > (data_.size() - pos_) / 4) throw StructureError("binary dump list overruns the data");
    std::vector<NodeId> out(n);
    for (auto& v : out) v = u32();
    return out;
  }

  bool done() const { return pos_ == data_.size(); }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_dot(const Dag& g, const ComponentMap* map) {
  std::ostringstream os;
  std::vector<bool> is_output(g.node_count(), false);
  for (NodeId o : g.outputs()) is_output[o] = true;
  os << "digraph G {\n";
  os << "  rankdir=LR;\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    os << "  n" << v << " [label=\"" << v << "\"";
    if (map) {
      const NodeTag& t = map->tags.at(v);
      os << " color=" << role_colour(t.role);
      const std::string path = path_string(t);
      if (!path.empty()) os << " tooltip=\"" << path << "\"";
    }
    if (is_output[v]) os << " shape=doublecircle";
    os << "];\n";
  }
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (NodeId p : g.preds(v)) os << "  n" << p << " -> n" << v << ";\n";
  }
  os << "}\n";
  return os.str();
}

Bytes dump_binary(const Dag& g) {
  Bytes out{'P', 'D', 'A', 'G'};
  put_u32(out, kDumpVersion);
  put_u32(out, static_cast<std::uint32_t>(g.node_count()));
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto preds = g.preds(v);
    put_u32(out, static_cast<std::uint32_t>(preds.size()));
    for (NodeId p : preds) put_u32(out, p);
  }
  put_u32(out, static_cast<std::uint32_t>(g.outputs().size()));
  for (NodeId o : g.outputs()) put_u32(out, o);
  put_u32(out, static_cast<std::uint32_t>(g.base().size()));
  for (NodeId b : g.base()) put_u32(out, b);
  return out;
}

Dag load_binary(std::span<const std::uint8_t> data) {
  if (data.size() < 4 || data[0] != 'P' || data[1] != 'D' || data[2] != 'A' || data[3] != 'G') {
    throw StructureError("not a PDAG dump");
  }
  Reader in(data.subspan(4));
  if (const auto version = in.u32(); version != kDumpVersion) {
    throw StructureError("unsupported PDAG version " + std::to_string(version));
  }
  const std::uint32_t n = in.u32();
  DagBuilder b;
  for (std::uint32_t v = 0; v < n; ++v) b.add_node(in.list());
  auto outputs = in.list();
  auto base = in.list();
  if (!in.done()) throw StructureError("trailing bytes after PDAG dump");
  return std::move(b).build(std::move(outputs), std::move(base));
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!f) throw Error("failed writing " + path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span<const std::uint8_t>(
                       reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace posedb
