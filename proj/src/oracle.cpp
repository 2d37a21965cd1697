#include "evercommit/oracle.hpp"

#include <string>

namespace evercommit {

RandomOracle::RandomOracle(std::size_t out_len, std::uint64_t seed)
    : out_len_(out_len), base_(std::make_shared<Table>(Table{{}, Rng(seed)})) {
  if (out_len == 0) throw Error("random oracle: output length must be positive");
}

BitString RandomOracle::query(const BitString& input) {
  log_.push_back(input);
  std::string k = input.key();
  if (auto it = patches_.find(k); it != patches_.end()) return it->second;
  auto [it, inserted] = base_->values.try_emplace(std::move(k));
  if (inserted) it->second = BitString::random(out_len_, base_->rng);
  return it->second;
}

void RandomOracle::reprogram(const BitString& point, const BitString& value) {
  if (value.size() != out_len_) throw Error("random oracle: reprogrammed value has wrong length");
  patches_[point.key()] = value;
}

RandomOracle RandomOracle::fork() const {
  RandomOracle out = *this;
  out.patches_.clear();
  out.log_.clear();
  return out;
}

BitString commit_classical(const BitString& msg, const BitString& randomness, RandomOracle& oracle,
                           const ClassicalParams& params) {
  if (msg.size() != params.s) throw Error("classical commit: message length is not s");
  if (randomness.size() != params.t) throw Error("classical commit: randomness length is not t");
  if (oracle.out_len() != params.q()) throw Error("classical commit: oracle output length is not q");
  return oracle.query(msg.concat(randomness));
}

bool verify_opening(const BitString& f, const BitString& msg, const BitString& randomness, RandomOracle& oracle,
                    const ClassicalParams& params) {
  if (msg.size() != params.s || randomness.size() != params.t || f.size() != params.q()) return false;
  return commit_classical(msg, randomness, oracle, params) == f;
}

std::vector<std::pair<BitString, BitString>> all_openings(const BitString& f, RandomOracle& oracle,
                                                          const ClassicalParams& params) {
  if (params.s + params.t > kMaxExtractBits)
    throw SearchSpaceError("extract: search space too large (s + t = " + std::to_string(params.s + params.t) +
                           " > " + std::to_string(kMaxExtractBits) + ")");
  std::vector<std::pair<BitString, BitString>> found;
  if (f.size() != params.q()) return found;
  const std::uint64_t total = std::uint64_t{1} << (params.s + params.t);
  for (std::uint64_t v = 0; v < total; ++v) {
    BitString input = BitString::from_uint(v, params.s + params.t);
    if (oracle.query(input) == f) found.emplace_back(input.slice(0, params.s), input.slice(params.s, params.t));
  }
  return found;
}

std::optional<BitString> extract_classical(const BitString& f, RandomOracle& oracle, const ClassicalParams& params) {
  auto openings = all_openings(f, oracle, params);
  if (openings.empty()) return std::nullopt;
  const BitString& first = openings.front().first;
  for (const auto& [msg, rand] : openings) {
    if (!(msg == first)) throw CollisionError("extract: commitment opens to two distinct messages");
  }
  return first;
}

}  // namespace evercommit
