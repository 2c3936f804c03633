#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace posedb {

using Bytes = std::vector<std::uint8_t>;

std::string to_hex(std::span<const std::uint8_t> bytes);

/// A w-bit word produced by the oracle.
class Label {
 public:
  Label() = default;
  explicit Label(Bytes bytes) : bytes_(std::move(bytes)) {}

  /// The all-zero word of the given width.
  static Label zero(unsigned word_bits) { return Label(Bytes(word_bits / 8, 0)); }

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::size_t size_bits() const { return bytes_.size() * 8; }
  bool empty() const { return bytes_.empty(); }
  std::string hex() const { return to_hex(bytes_); }

  friend bool operator==(const Label&, const Label&) = default;

 private:
  Bytes bytes_;
};

/// Identifies one function h drawn from H: a session seed and an output width.
struct OracleKey {
  Bytes seed;
  unsigned word_bits = 256;

  /// Throws ParameterError unless word_bits is a positive multiple of 8.
  void validate() const;
};

/// Random oracle h : {0,1}* -> {0,1}^w with call counting and an optional hard
/// budget.
///
/// h(x) is the first w bits of SHAKE256(tag || len(seed) || seed || w || x), so
/// the function is a pure function of (seed, word_bits, x). Every query counts
/// against the budget, repeated inputs included.
///
/// Instances are movable but not copyable and must not be shared between
/// threads.
class HashOracle {
 public:
  using Observer = std::function<void(std::span<const std::uint8_t>)>;

  HashOracle(Bytes seed, unsigned word_bits, std::optional<std::uint64_t> budget = std::nullopt);
  explicit HashOracle(OracleKey key, std::optional<std::uint64_t> budget = std::nullopt);
  ~HashOracle();
  HashOracle(HashOracle&&) noexcept;
  HashOracle& operator=(HashOracle&&) noexcept;

  /// Throws BudgetExhausted, without evaluating h, once calls_made() == budget.
  Label query(std::span<const std::uint8_t> input);

  const OracleKey& key() const { return key_; }
  unsigned word_bits() const { return key_.word_bits; }
  std::uint64_t calls_made() const { return calls_; }
  std::optional<std::uint64_t> budget() const { return budget_; }

  /// Called with every input that is about to be answered (after the budget
  /// check). Used by the experiment to audit graph-restricted adversaries.
  void set_observer(Observer observer) { observer_ = std::move(observer); }

 private:
  struct Impl;

  OracleKey key_;
  std::optional<std::uint64_t> budget_;
  std::uint64_t calls_ = 0;
  Observer observer_;
  std::unique_ptr<Impl> impl_;
};

/// Short SHAKE256 digest used to fingerprint session data in transcripts.
std::string digest_hex(std::span<const std::uint8_t> bytes, std::size_t out_bytes = 16);

}  // namespace posedb
