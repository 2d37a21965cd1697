#include "evercommit/ske.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evercommit {

void SkeParams::validate() const {
  if (mu_comp < 1 || mu_comp >= mu) throw Error("ske params: need 1 <= mu_comp < mu");
  if (msg_len < 1 || msg_len > mu_comp) throw Error("ske params: need 1 <= msg_len <= mu_comp");
  if (msg_len > 64) throw Error("ske params: msg_len above 64 is not supported");
}

BitString SkeSecretKey::serialize() const { return theta.concat(u).concat(hash_seed); }

BitString SkeSecretKey::serialize_full() const { return serialize().concat(r_hadamard); }

std::optional<SkeSecretKey> SkeSecretKey::deserialize(const BitString& bits, const SkeParams& params) {
  if (bits.size() != params.key_bits()) return std::nullopt;
  SkeSecretKey sk;
  sk.theta = bits.slice(0, params.mu);
  sk.u = bits.slice(params.mu, params.msg_len);
  sk.hash_seed = bits.slice(params.mu + params.msg_len, params.hash_seed_len());
  if (sk.theta.weight() != params.hadamard_count()) return std::nullopt;
  return sk;
}

std::optional<SkeSecretKey> SkeSecretKey::deserialize_full(const BitString& bits, const SkeParams& params) {
  if (bits.size() != params.key_bits() + params.hadamard_count()) return std::nullopt;
  auto sk = deserialize(bits.slice(0, params.key_bits()), params);
  if (sk) sk->r_hadamard = bits.slice(params.key_bits(), params.hadamard_count());
  return sk;
}

std::vector<std::size_t> SkeSecretKey::computational_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta[i] == 0) out.push_back(i);
  return out;
}

std::vector<std::size_t> SkeSecretKey::hadamard_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta[i] == 1) out.push_back(i);
  return out;
}

BitString toeplitz_hash(const BitString& seed, const BitString& input, std::size_t out_len) {
  const std::size_t in_len = input.size();
  if (seed.size() != in_len + out_len - 1) throw Error("toeplitz: seed length must be in + out - 1");
  BitString out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    std::uint8_t acc = 0;
    for (std::size_t j = 0; j < in_len; ++j) acc ^= seed[i + in_len - 1 - j] & input[j];
    out[i] = acc;
  }
  return out;
}

SkeSecretKey ske_keygen(const SkeParams& params, Rng& rng) {
  params.validate();
  std::vector<std::size_t> order(params.mu);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng.engine());
  SkeSecretKey sk;
  sk.theta = BitString(params.mu);
  for (std::size_t k = 0; k < params.hadamard_count(); ++k) sk.theta[order[k]] = 1;
  sk.u = BitString::random(params.msg_len, rng);
  sk.hash_seed = BitString::random(params.hash_seed_len(), rng);
  sk.r_hadamard = BitString::random(params.hadamard_count(), rng);
  return sk;
}

SkeCiphertext ske_enc(const SkeSecretKey& sk, const BitString& msg, Rng& rng) {
  if (msg.size() != sk.u.size()) throw Error("ske enc: message length mismatch");
  const auto hadamard = sk.hadamard_positions();
  if (sk.r_hadamard.size() != hadamard.size()) throw Error("ske enc: key has no verification record");
  BitString r = BitString::random(sk.theta.size(), rng);
  for (std::size_t k = 0; k < hadamard.size(); ++k) r[hadamard[k]] = sk.r_hadamard[k];
  BitString r_comp;
  for (std::size_t i : sk.computational_positions()) r_comp.push_back(r[i]);
  BitString classical = msg ^ sk.u ^ toeplitz_hash(sk.hash_seed, r_comp, msg.size());
  return {BB84Register(sk.theta, r), std::move(classical)};
}

BitString ske_dec(const SkeSecretKey& sk, SkeCiphertext& ct, Rng& rng) {
  BitString r_comp;
  for (std::size_t i : sk.computational_positions()) r_comp.push_back(ct.quantum.measure(i, Basis::kComputational, rng));
  return ct.classical ^ sk.u ^ toeplitz_hash(sk.hash_seed, r_comp, sk.u.size());
}

SkeDeletionCert ske_del(SkeCiphertext& ct, Rng& rng) {
  return {ct.quantum.measure_all(BitString(ct.quantum.width(), 1), rng)};
}

bool ske_verify(const SkeSecretKey& sk, const SkeDeletionCert& cert, const SkeParams& params) {
  if (cert.outcomes.size() != params.mu) throw Error("ske verify: certificate length is not mu");
  const auto hadamard = sk.hadamard_positions();
  if (sk.r_hadamard.size() != hadamard.size()) return false;
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < hadamard.size(); ++k) mismatches += cert.outcomes[hadamard[k]] != sk.r_hadamard[k];
  return mismatches <= params.cert_threshold;
}

double ske_dec_probability(const SkeSecretKey& sk, const SkeCiphertext& ct, const BitString& msg) {
  const std::size_t n = sk.u.size();
  if (msg.size() != n) return 0.0;
  const auto comp = sk.computational_positions();
  const auto& cells = ct.quantum.cells();
  // Output = offset ⊕ (XOR of hash columns for uniformly random cells).
  BitString fixed(comp.size());
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < comp.size(); ++j) {
    const BB84Cell& cell = cells.at(comp[j]);
    if (cell.basis == Basis::kComputational) {
      fixed[j] = cell.value;
    } else {
      free.push_back(j);
    }
  }
  BitString offset = ct.classical ^ sk.u ^ toeplitz_hash(sk.hash_seed, fixed, n);
  std::uint64_t target = (offset ^ msg).to_uint();

  // GF(2) span of the free columns, as a reduced basis keyed by leading bit.
  std::vector<std::uint64_t> basis(64, 0);
  std::size_t rank = 0;
  for (std::size_t j : free) {
    BitString unit(comp.size());
    unit[j] = 1;
    std::uint64_t col = toeplitz_hash(sk.hash_seed, unit, n).to_uint();
    for (int b = 63; b >= 0 && col; --b) {
      if (!((col >> b) & 1u)) continue;
      if (basis[static_cast<std::size_t>(b)] == 0) {
        basis[static_cast<std::size_t>(b)] = col;
        ++rank;
        col = 0;
      } else {
        col ^= basis[static_cast<std::size_t>(b)];
      }
    }
  }
  for (int b = 63; b >= 0 && target; --b) {
    if ((target >> b) & 1u) {
      if (basis[static_cast<std::size_t>(b)] == 0) return 0.0;
      target ^= basis[static_cast<std::size_t>(b)];
    }
  }
  return std::ldexp(1.0, -static_cast<int>(rank));
}

}  // namespace evercommit
