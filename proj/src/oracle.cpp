#include "posedb/oracle.hpp"

#include <openssl/evp.h>

#include <array>
#include <string_view>

#include "posedb/errors.hpp"

namespace posedb {

namespace {

constexpr std::string_view kOracleTag = "posedb/h/v1";

struct CtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

CtxPtr new_shake_ctx() {
  CtxPtr ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_shake256(), nullptr) != 1) {
    throw Error("failed to initialise SHAKE256");
  }
  return ctx;
}

void absorb(EVP_MD_CTX* ctx, std::span<const std::uint8_t> data) {
  if (!data.empty() && EVP_DigestUpdate(ctx, data.data(), data.size()) != 1) {
    throw Error("SHAKE256 update failed");
  }
}

std::array<std::uint8_t, 8> be64(std::uint64_t v) {
  std::array<std::uint8_t, 8> out{};
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return out;
}

}  // namespace

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

void OracleKey::validate() const {
  if (word_bits < 8 || word_bits % 8 != 0) {
    throw ParameterError("word_bits must be a positive multiple of 8, got " +
                         std::to_string(word_bits));
  }
}

// The seed-dependent prefix is absorbed once; each query copies that state.
struct HashOracle::Impl {
  CtxPtr prefix;
  CtxPtr scratch;
};

HashOracle::HashOracle(Bytes seed, unsigned word_bits, std::optional<std::uint64_t> budget)
    : HashOracle(OracleKey{std::move(seed), word_bits}, budget) {}

HashOracle::HashOracle(OracleKey key, std::optional<std::uint64_t> budget)
    : key_(std::move(key)), budget_(budget), impl_(std::make_unique<Impl>()) {
  key_.validate();
  impl_->prefix = new_shake_ctx();
  impl_->scratch.reset(EVP_MD_CTX_new());
  if (!impl_->scratch) throw Error("EVP_MD_CTX_new failed");

  auto* ctx = impl_->prefix.get();
  absorb(ctx, {reinterpret_cast<const std::uint8_t*>(kOracleTag.data()), kOracleTag.size()});
  absorb(ctx, be64(key_.seed.size()));
  absorb(ctx, key_.seed);
  const std::array<std::uint8_t, 2> w{static_cast<std::uint8_t>(key_.word_bits >> 8),
                                      static_cast<std::uint8_t>(key_.word_bits & 0xff)};
  absorb(ctx, w);
}

HashOracle::~HashOracle() = default;
HashOracle::HashOracle(HashOracle&&) noexcept = default;
HashOracle& HashOracle::operator=(HashOracle&&) noexcept = default;

Label HashOracle::query(std::span<const std::uint8_t> input) {
  if (budget_ && calls_ >= *budget_) {
    throw BudgetExhausted("oracle budget of " + std::to_string(*budget_) + " queries exhausted");
  }
  if (observer_) observer_(input);
  ++calls_;

  auto* ctx = impl_->scratch.get();
  if (EVP_MD_CTX_copy_ex(ctx, impl_->prefix.get()) != 1) throw Error("SHAKE256 copy failed");
  absorb(ctx, input);
  Bytes out(key_.word_bits / 8);
  if (EVP_DigestFinalXOF(ctx, out.data(), out.size()) != 1) throw Error("SHAKE256 final failed");
  return Label(std::move(out));
}

std::string digest_hex(std::span<const std::uint8_t> bytes, std::size_t out_bytes) {
  auto ctx = new_shake_ctx();
  absorb(ctx.get(), bytes);
  Bytes out(out_bytes);
  if (EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1) {
    throw Error("SHAKE256 final failed");
  }
  return to_hex(out);
}

}  // namespace posedb
