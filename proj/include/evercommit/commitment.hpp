// Commitment with certified everlasting hiding and classical-extractor-based
// binding, composed from the SKE, the classical commitment, and a random
// oracle H masking the SKE key:
//
//   com = (Enc(sk, m), f = RO_commit(R ‖ R'), h = H(R) ⊕ sk),  d = (R, R'),  ck = sk.
#pragma once

#include <optional>

#include "evercommit/oracle.hpp"
#include "evercommit/ske.hpp"

namespace evercommit {

struct CcdParams {
  SkeParams ske;
  ClassicalParams classical;

  static CcdParams defaults() { return {SkeParams::defaults(), {16, 16}}; }
  static CcdParams small() { return {SkeParams::small(), {8, 8}}; }
  /// Single-bit messages, used by the protocol's pad commitments.
  CcdParams with_msg_len(std::size_t n) const;

  std::size_t h_len() const { return ske.key_bits(); }
  void validate() const;
};

/// The public oracles of one experiment or protocol run.
struct OracleSet {
  RandomOracle hash;    ///< H: {0,1}^s -> {0,1}^|h|
  RandomOracle commit;  ///< classical commitment oracle, output q bits

  static OracleSet create(const CcdParams& params, Rng& rng);
};

struct CcdCommitment {
  SkeCiphertext ske_ct;
  BitString f;
  BitString h;
};

struct CcdDecommitment {
  BitString d1;  ///< R
  BitString d2;  ///< R'
};

struct CcdKey {
  SkeSecretKey ck;
};

struct CcdCommitOutput {
  CcdCommitment com;
  CcdDecommitment decommitment;
  CcdKey key;
};

CcdCommitOutput ccd_commit(const BitString& msg, const CcdParams& params, OracleSet& oracles, Rng& rng);

bool ccd_verify1(const CcdCommitment& com, const BitString& d1, const BitString& d2, OracleSet& oracles,
                 const CcdParams& params);
/// Decrypts with sk' = H(d1) ⊕ h. A malformed sk' decrypts to a uniform string.
BitString ccd_verify2(CcdCommitment& com, const BitString& d1, OracleSet& oracles, const CcdParams& params, Rng& rng);
/// nullopt when the opening check fails.
std::optional<BitString> ccd_verify(CcdCommitment& com, const CcdDecommitment& d, OracleSet& oracles,
                                    const CcdParams& params, Rng& rng);

SkeDeletionCert ccd_del(CcdCommitment& com, Rng& rng);
bool ccd_cert(const SkeDeletionCert& cert, const CcdKey& key, const CcdParams& params);

std::optional<BitString> ccd_extract(const BitString& f, OracleSet& oracles, const CcdParams& params);

/// Sum-binding verification for single-bit messages: accept iff the opening
/// checks and the decrypted bit equals `bit`.
bool ccd_verify_sum(CcdCommitment& com, const CcdDecommitment& d, std::uint8_t bit, OracleSet& oracles,
                    const CcdParams& params, Rng& rng);
/// Exact acceptance probability of ccd_verify_sum without consuming the state.
double ccd_verify_sum_probability(const CcdCommitment& com, const CcdDecommitment& d, std::uint8_t bit,
                                  OracleSet& oracles, const CcdParams& params);

}  // namespace evercommit
