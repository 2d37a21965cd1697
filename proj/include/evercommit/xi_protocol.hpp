// Three-round certified-everlasting zero-knowledge protocol for toy
// local-Hamiltonian instances, its sequential repetition, and the simulators.
//
//   P -> V  msg1 = X^x Z^z rho Z^z X^x, com(x_i), com(z_i) for every qubit i
//   V -> P  msg2 = challenge c, deletion certificates for i outside S_c
//   P -> V  msg3 = openings of x_i, z_i for i in S_c
//
// The verifier unmasks S_c and measures {Pi_c, I - Pi_c}. The prover accepts
// iff every certificate verifies. Qubit indices are 0-based here and 1-based
// on the wire (see serialize.hpp).
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "evercommit/backend.hpp"
#include "evercommit/commitment.hpp"

namespace evercommit {

enum class InstanceKind : std::uint8_t { kYes, kNo };

struct Instance {
  int n = 0;
  std::vector<Povm> checks;  ///< support sorted ascending, at most kMaxCheckSupport qubits
  InstanceKind kind = InstanceKind::kYes;
  std::optional<DenseState> witness;
  std::string name;

  std::size_t m() const { return checks.size(); }
  /// Throws Error on a violated invariant.
  void validate() const;
};

inline constexpr std::size_t kMaxCheckSupport = 5;

/// GHZ_3 yes-instance: Z1Z2 on {1,2}, Z2Z3 on {2,3}, X1X2X3 on {1,2,3}, each
/// check the +1 eigenprojector, witness the GHZ state.
Instance ghz_instance();
/// No-instance on 3 qubits: (I+Z)/2 and (I+X)/2, both on qubit 1.
Instance frustrated_instance();

/// (1/m) sum_c Pi_c embedded on n qubits.
Matrix check_operator(const Instance& instance);
/// Largest eigenvalue of check_operator().
double soundness_bound(const Instance& instance);
/// Top eigenvector of check_operator() as a density matrix.
DenseState optimal_cheating_state(const Instance& instance);
/// Reduced witness on `support`; requires a witness.
DenseState local_sim(const Instance& instance, std::span<const int> support);

/// Parameters of one protocol session. Pad commitments are over {0,1}.
struct XiParams {
  CcdParams ccd = CcdParams::defaults().with_msg_len(1);

  static XiParams defaults() { return {}; }
  static XiParams small() { return {CcdParams::small().with_msg_len(1)}; }
};

/// Oracles and parameters shared by every round of one execution.
struct Session {
  XiParams params;
  OracleSet oracles;

  static Session create(const XiParams& params, Rng& rng);
};

struct Msg1 {
  DenseState masked_state;
  std::vector<CcdCommitment> com_x;
  std::vector<CcdCommitment> com_z;
};

struct Msg2 {
  std::size_t c = 0;
  std::vector<int> cert_indices;  ///< complement of S_c, ascending
  std::vector<SkeDeletionCert> cert_x;
  std::vector<SkeDeletionCert> cert_z;
};

struct Msg3 {
  std::vector<int> indices;  ///< S_c
  std::vector<CcdDecommitment> d_x;
  std::vector<CcdDecommitment> d_z;
};

struct ProverState {
  BitString x;  ///< committed pad bits
  BitString z;
  std::vector<CcdDecommitment> d_x;
  std::vector<CcdDecommitment> d_z;
  std::vector<CcdKey> key_x;
  std::vector<CcdKey> key_z;
};

struct VerifierState {
  std::size_t c = 0;
  DenseState masked_state;
  std::vector<CcdCommitment> com_x;  ///< in-S_c commitments are still intact
  std::vector<CcdCommitment> com_z;
};

/// Classical record of a commitment as it went over the wire.
struct CommitmentRecord {
  BitString ske_classical;
  BitString f;
  BitString h;
};

struct Transcript {
  DenseState masked_state;
  std::vector<CommitmentRecord> com_x;
  std::vector<CommitmentRecord> com_z;
  Msg2 msg2;
  std::optional<Msg3> msg3;
  BitString opened_x;  ///< pad bits the verifier recovered on S_c; empty if it aborted
  BitString opened_z;
  bool prover_out = false;
  bool verifier_out = false;
};

enum class ProverKind : std::uint8_t { kHonest, kOptimal, kWrongWitness, kDecommitLiar };
enum class VerifierKind : std::uint8_t { kHonest, kFixedChallenge, kCertWithholding };

struct VerifierStrategy {
  VerifierKind kind = VerifierKind::kHonest;
  std::size_t fixed_c = 0;  ///< used by kFixedChallenge
};

std::optional<ProverKind> parse_prover_kind(std::string_view name);
std::string_view prover_kind_name(ProverKind kind);
std::optional<VerifierKind> parse_verifier_kind(std::string_view name);
std::string_view verifier_kind_name(VerifierKind kind);

/// Honest commitment phase with fresh x, z. Throws if there is no witness.
std::pair<Msg1, ProverState> prover_commit(const Instance& instance, Session& session, Rng& rng);
/// Masks `state` with (x, z) and commits to (committed_x, committed_z). The
/// honest prover has committed == mask; simulators and cheaters do not.
std::pair<Msg1, ProverState> prover_commit_with(const Instance& instance, const DenseState& state,
                                                const PauliMask& mask, const BitString& committed_x,
                                                const BitString& committed_z, Session& session, Rng& rng);

std::pair<Msg2, VerifierState> verifier_challenge(Msg1 msg1, const Instance& instance, Session& session, Rng& rng,
                                                  const VerifierStrategy& strategy = {});
/// Openings for S_c and the prover's verdict on the certificates. No message
/// (and prover_out false) when msg2 is inconsistent with the challenge.
std::pair<std::optional<Msg3>, bool> prover_respond(const ProverState& state, const Msg2& msg2,
                                                    const Instance& instance, Session& session);
/// Recovered pad bits on S_c, or nullopt when any opening fails.
std::optional<std::pair<BitString, BitString>> verifier_open(VerifierState& state, const Msg3& msg3,
                                                             const Instance& instance, Session& session, Rng& rng);
bool verifier_verify(VerifierState& state, const Msg3& msg3, const Instance& instance, Session& session, Rng& rng);

Transcript run_protocol(const Instance& instance, ProverKind prover, const VerifierStrategy& verifier,
                        Session& session, Rng& rng);

struct SequentialResult {
  std::vector<Transcript> rounds;
  bool prover_out = false;
  bool verifier_out = false;
};

SequentialResult run_sequential(const Instance& instance, std::size_t rounds, ProverKind prover,
                                const VerifierStrategy& verifier, Session& session, Rng& rng);

/// Simulated OUT' on success. `transcript` is absent when the simulator failed.
struct SimulatorResult {
  bool success = false;
  std::optional<Transcript> transcript;
};

/// S1: guesses c, commits to the pad restricted to S_c, masks the local
/// simulation padded with |0>. Fails when the verifier picks another challenge.
SimulatorResult simulator_s1(const Instance& instance, const VerifierStrategy& verifier, Session& session, Rng& rng);
/// S2: S1 with the full witness in place of the local simulation.
SimulatorResult simulator_s2(const Instance& instance, const VerifierStrategy& verifier, Session& session, Rng& rng);
/// S3: repeats S2 with fresh randomness until it succeeds. max_retries = 0
/// means 64 m. Throws Error when every attempt fails.
Transcript simulator_s3(const Instance& instance, const VerifierStrategy& verifier, Session& session, Rng& rng,
                        std::size_t max_retries = 0);
/// S1 repeated until success; same retry contract as S3.
Transcript simulator_s1_postselected(const Instance& instance, const VerifierStrategy& verifier, Session& session,
                                     Rng& rng, std::size_t max_retries = 0);

/// The abort record eta: every field zero / false.
Transcript abort_record(const Instance& instance);

}  // namespace evercommit
