// One-time secret-key encryption with certified deletion over BB84 states.
//
// Ciphertext: BB84 register of width mu with bases theta, plus the classical
// part m ⊕ u ⊕ T(r restricted to computational positions), where T is a
// Toeplitz hash keyed by hash_seed. Deleting means measuring everything in
// the Hadamard basis; the certificate verifies against r on Hadamard positions.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "evercommit/backend.hpp"
#include "evercommit/bits.hpp"
#include "evercommit/rng.hpp"

namespace evercommit {

struct SkeParams {
  std::size_t msg_len = 8;
  std::size_t mu = 32;
  std::size_t mu_comp = 16;
  std::size_t cert_threshold = 0;

  static SkeParams defaults() { return {}; }
  static SkeParams small() { return {4, 8, 4, 0}; }

  std::size_t hadamard_count() const { return mu - mu_comp; }
  std::size_t hash_seed_len() const { return mu_comp + msg_len - 1; }
  /// Length of the serialized decryption key: mu + n + mu_comp + n − 1.
  std::size_t key_bits() const { return mu + msg_len + hash_seed_len(); }
  /// Throws Error unless 1 <= mu_comp < mu and 1 <= msg_len <= mu_comp.
  void validate() const;
};

struct SkeSecretKey {
  BitString theta;       ///< 1 marks a Hadamard position
  BitString u;           ///< one-time pad
  BitString hash_seed;   ///< Toeplitz seed
  BitString r_hadamard;  ///< BB84 bits on Hadamard positions, ascending order; empty if unknown

  /// theta ‖ u ‖ hash_seed. This is the part masked by h in the commitment.
  BitString serialize() const;
  /// serialize() ‖ r_hadamard.
  BitString serialize_full() const;
  /// nullopt when the bit string is not a well-formed decryption key
  /// (wrong length or theta of the wrong weight).
  static std::optional<SkeSecretKey> deserialize(const BitString& bits, const SkeParams& params);
  static std::optional<SkeSecretKey> deserialize_full(const BitString& bits, const SkeParams& params);

  std::vector<std::size_t> computational_positions() const;
  std::vector<std::size_t> hadamard_positions() const;

  bool operator==(const SkeSecretKey&) const = default;
};

struct SkeCiphertext {
  BB84Register quantum;
  BitString classical;
};

struct SkeDeletionCert {
  BitString outcomes;
};

/// out_i = XOR_j seed[i - j + in_len - 1] & input_j.
BitString toeplitz_hash(const BitString& seed, const BitString& input, std::size_t out_len);

SkeSecretKey ske_keygen(const SkeParams& params, Rng& rng);
SkeCiphertext ske_enc(const SkeSecretKey& sk, const BitString& msg, Rng& rng);
BitString ske_dec(const SkeSecretKey& sk, SkeCiphertext& ct, Rng& rng);
SkeDeletionCert ske_del(SkeCiphertext& ct, Rng& rng);
bool ske_verify(const SkeSecretKey& sk, const SkeDeletionCert& cert, const SkeParams& params);

/// Exact probability that ske_dec(sk, ct) would output `msg`, computed from the
/// register's current product state without touching it. Used by audits.
double ske_dec_probability(const SkeSecretKey& sk, const SkeCiphertext& ct, const BitString& msg);

}  // namespace evercommit
