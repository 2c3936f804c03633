#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "posedb/graph.hpp"
#include "posedb/oracle.hpp"

namespace posedb {

/// Graphviz rendering, one statement per line. With a component map, nodes
/// are coloured by role and outputs are drawn as double circles.
std::string to_dot(const Dag& g, const ComponentMap* map = nullptr);

/// Binary adjacency dump, all fields little-endian u32:
/// "PDAG" version node_count {in_degree preds...}* |O| O... |Base| Base...
Bytes dump_binary(const Dag& g);

/// Inverse of dump_binary. The result has family `custom` and no in-place
/// schedule. Throws StructureError on malformed input.
Dag load_binary(std::span<const std::uint8_t> data);

inline constexpr std::uint32_t kDumpVersion = 1;

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);
void write_file(const std::filesystem::path& path, const std::string& text);
Bytes read_file(const std::filesystem::path& path);

}  // namespace posedb
