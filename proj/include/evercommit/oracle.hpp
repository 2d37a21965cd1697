// Lazily sampled random oracle and the classical non-interactive commitment
// f = RO(R ‖ R') built on it.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evercommit/bits.hpp"
#include "evercommit/rng.hpp"

namespace evercommit {

class RandomOracle {
 public:
  RandomOracle(std::size_t out_len, std::uint64_t seed);

  std::size_t out_len() const { return out_len_; }

  /// Patched value if present, else the (lazily sampled) base value.
  /// Every call appends `input` to the query log.
  BitString query(const BitString& input);
  /// Subsequent queries at `point` answer `value`. Last write wins.
  void reprogram(const BitString& point, const BitString& value);

  /// A new oracle sharing this one's base function, with no patches and an
  /// empty log. Used to hand differently reprogrammed views of one H to
  /// different parties.
  RandomOracle fork() const;

  const std::vector<BitString>& query_log() const { return log_; }
  std::size_t table_size() const { return base_->values.size(); }

 private:
  struct Table {
    std::unordered_map<std::string, BitString> values;
    Rng rng;
  };

  std::size_t out_len_;
  std::shared_ptr<Table> base_;
  std::unordered_map<std::string, BitString> patches_;
  std::vector<BitString> log_;
};

struct ClassicalParams {
  std::size_t s = 16;  ///< message (R) bits
  std::size_t t = 16;  ///< randomness (R') bits
  std::size_t q() const { return s + t + 64; }
};

/// Brute-force search bound: s + t must not exceed this.
inline constexpr std::size_t kMaxExtractBits = 24;

class CollisionError : public Error {
 public:
  using Error::Error;
};

class SearchSpaceError : public Error {
 public:
  using Error::Error;
};

BitString commit_classical(const BitString& msg, const BitString& randomness, RandomOracle& oracle,
                           const ClassicalParams& params);
bool verify_opening(const BitString& f, const BitString& msg, const BitString& randomness, RandomOracle& oracle,
                    const ClassicalParams& params);

/// Every (R, R') with RO(R ‖ R') = f, by exhaustive enumeration.
std::vector<std::pair<BitString, BitString>> all_openings(const BitString& f, RandomOracle& oracle,
                                                          const ClassicalParams& params);

/// The unique R that opens f, or nullopt when nothing opens it. Throws
/// CollisionError when two distinct R open f and SearchSpaceError when
/// s + t > kMaxExtractBits.
std::optional<BitString> extract_classical(const BitString& f, RandomOracle& oracle, const ClassicalParams& params);

}  // namespace evercommit
