#include "evercommit/commitment.hpp"

#include <cmath>

namespace evercommit {

CcdParams CcdParams::with_msg_len(std::size_t n) const {
  CcdParams out = *this;
  out.ske.msg_len = n;
  return out;
}

void CcdParams::validate() const {
  ske.validate();
  if (classical.s == 0 || classical.t == 0) throw Error("ccd params: s and t must be positive");
}

OracleSet OracleSet::create(const CcdParams& params, Rng& rng) {
  std::uint64_t hash_seed = rng.next_u64();
  std::uint64_t commit_seed = rng.next_u64();
  return {RandomOracle(params.h_len(), hash_seed), RandomOracle(params.classical.q(), commit_seed)};
}

CcdCommitOutput ccd_commit(const BitString& msg, const CcdParams& params, OracleSet& oracles, Rng& rng) {
  params.validate();
  if (msg.size() != params.ske.msg_len) throw Error("ccd commit: message length mismatch");
  SkeSecretKey sk = ske_keygen(params.ske, rng);
  BitString r = BitString::random(params.classical.s, rng);
  BitString r_prime = BitString::random(params.classical.t, rng);
  SkeCiphertext ct = ske_enc(sk, msg, rng);
  BitString f = commit_classical(r, r_prime, oracles.commit, params.classical);
  BitString h = oracles.hash.query(r) ^ sk.serialize();
  return {{std::move(ct), std::move(f), std::move(h)}, {std::move(r), std::move(r_prime)}, {std::move(sk)}};
}

bool ccd_verify1(const CcdCommitment& com, const BitString& d1, const BitString& d2, OracleSet& oracles,
                 const CcdParams& params) {
  return verify_opening(com.f, d1, d2, oracles.commit, params.classical);
}

BitString ccd_verify2(CcdCommitment& com, const BitString& d1, OracleSet& oracles, const CcdParams& params, Rng& rng) {
  if (d1.size() != params.classical.s || com.h.size() != params.h_len())
    return BitString::random(params.ske.msg_len, rng);
  auto sk = SkeSecretKey::deserialize(oracles.hash.query(d1) ^ com.h, params.ske);
  if (!sk) return BitString::random(params.ske.msg_len, rng);
  return ske_dec(*sk, com.ske_ct, rng);
}

std::optional<BitString> ccd_verify(CcdCommitment& com, const CcdDecommitment& d, OracleSet& oracles,
                                    const CcdParams& params, Rng& rng) {
  if (!ccd_verify1(com, d.d1, d.d2, oracles, params)) return std::nullopt;
  return ccd_verify2(com, d.d1, oracles, params, rng);
}

SkeDeletionCert ccd_del(CcdCommitment& com, Rng& rng) { return ske_del(com.ske_ct, rng); }

bool ccd_cert(const SkeDeletionCert& cert, const CcdKey& key, const CcdParams& params) {
  return ske_verify(key.ck, cert, params.ske);
}

std::optional<BitString> ccd_extract(const BitString& f, OracleSet& oracles, const CcdParams& params) {
  return extract_classical(f, oracles.commit, params.classical);
}

bool ccd_verify_sum(CcdCommitment& com, const CcdDecommitment& d, std::uint8_t bit, OracleSet& oracles,
                    const CcdParams& params, Rng& rng) {
  if (params.ske.msg_len != 1) throw Error("sum-binding verify: message space must be {0,1}");
  auto out = ccd_verify(com, d, oracles, params, rng);
  return out && (*out)[0] == (bit & 1u);
}

double ccd_verify_sum_probability(const CcdCommitment& com, const CcdDecommitment& d, std::uint8_t bit,
                                  OracleSet& oracles, const CcdParams& params) {
  if (params.ske.msg_len != 1) throw Error("sum-binding verify: message space must be {0,1}");
  if (!ccd_verify1(com, d.d1, d.d2, oracles, params)) return 0.0;
  auto sk = SkeSecretKey::deserialize(oracles.hash.query(d.d1) ^ com.h, params.ske);
  if (!sk) return 0.5;
  return ske_dec_probability(*sk, com.ske_ct, BitString{bit});
}

}  // namespace evercommit
