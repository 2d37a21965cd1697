#include "evercommit/xi_protocol.hpp"

#include <algorithm>
#include <cmath>

namespace evercommit {

namespace {

Matrix projector_from_pauli(const Matrix& pauli) {
  return (Matrix::Identity(pauli.rows(), pauli.cols()) + pauli) / 2.0;
}

std::vector<int> complement_of(const std::vector<int>& support, int n) {
  std::vector<int> out;
  for (int q = 0; q < n; ++q)
    if (!std::binary_search(support.begin(), support.end(), q)) out.push_back(q);
  return out;
}

BitString restrict_to(const BitString& bits, const std::vector<int>& support) {
  BitString out(bits.size());
  for (int q : support) out[static_cast<std::size_t>(q)] = bits[static_cast<std::size_t>(q)];
  return out;
}

CommitmentRecord record_of(const CcdCommitment& com) { return {com.ske_ct.classical, com.f, com.h}; }

// Undoes the mask on S_c with the opened pad bits and measures Pi_c.
bool measure_check(const VerifierState& state, const std::pair<BitString, BitString>& opened,
                   const Instance& instance, Rng& rng) {
  const auto& check = instance.checks[state.c];
  BitString mx(static_cast<std::size_t>(instance.n)), mz(static_cast<std::size_t>(instance.n));
  for (std::size_t j = 0; j < check.support().size(); ++j) {
    auto q = static_cast<std::size_t>(check.support()[j]);
    mx[q] = opened.first[j];
    mz[q] = opened.second[j];
  }
  DenseState unmasked = apply_pauli_mask(state.masked_state, {mx, mz});
  return povm_measure(unmasked, check, rng).first == Outcome::kAccept;
}

// Steps 2 to 5 of a round, shared by the real protocol and the simulators.
// Returns nullopt when `expected_c` is set and the verifier chose another challenge.
std::optional<Transcript> finish_round(const Instance& instance, Msg1 msg1, const ProverState& prover,
                                       ProverKind prover_kind, const VerifierStrategy& verifier,
                                       std::optional<std::size_t> expected_c, Session& session, Rng& rng) {
  Transcript t;
  t.masked_state = msg1.masked_state;
  for (const auto& com : msg1.com_x) t.com_x.push_back(record_of(com));
  for (const auto& com : msg1.com_z) t.com_z.push_back(record_of(com));

  auto [msg2, vstate] = verifier_challenge(std::move(msg1), instance, session, rng, verifier);
  if (expected_c && msg2.c != *expected_c) return std::nullopt;
  t.msg2 = msg2;

  auto [msg3, prover_out] = prover_respond(prover, msg2, instance, session);
  if (msg3 && prover_kind == ProverKind::kDecommitLiar) {
    // Tries to open every checked pad to a different R.
    const std::size_t s = session.params.ccd.classical.s;
    for (auto* ds : {&msg3->d_x, &msg3->d_z}) {
      for (auto& d : *ds) {
        BitString fake = BitString::random(s, rng);
        if (fake == d.d1) fake.flip(0);
        d.d1 = fake;
      }
    }
  }
  t.prover_out = prover_out;
  if (msg3) {
    t.msg3 = *msg3;
    auto opened = verifier_open(vstate, *msg3, instance, session, rng);
    if (opened) {
      t.opened_x = opened->first;
      t.opened_z = opened->second;
      t.verifier_out = measure_check(vstate, *opened, instance, rng);
    }
  }
  return t;
}

std::optional<Transcript> simulate_once(const Instance& instance, const VerifierStrategy& verifier, bool use_witness,
                                        Session& session, Rng& rng) {
  if (!instance.witness) throw Error("simulator: instance has no witness");
  const int n = instance.n;
  const std::size_t c = rng.below(instance.m());
  BitString x = BitString::random(static_cast<std::size_t>(n), rng);
  BitString z = BitString::random(static_cast<std::size_t>(n), rng);
  const auto& support = instance.checks[c].support();
  DenseState sigma = use_witness ? *instance.witness : embed_state(local_sim(instance, support), support, n);
  auto [msg1, pstate] =
      prover_commit_with(instance, sigma, {x, z}, restrict_to(x, support), restrict_to(z, support), session, rng);
  return finish_round(instance, std::move(msg1), pstate, ProverKind::kHonest, verifier, c, session, rng);
}

Transcript retry(const Instance& instance, const VerifierStrategy& verifier, bool use_witness, Session& session,
                 Rng& rng, std::size_t max_retries) {
  if (max_retries == 0) max_retries = 64 * instance.m();
  for (std::size_t attempt = 0; attempt < max_retries; ++attempt) {
    if (auto t = simulate_once(instance, verifier, use_witness, session, rng)) return *t;
  }
  throw Error("simulator: all " + std::to_string(max_retries) + " attempts aborted");
}

}  // namespace

// ---------------------------------------------------------------------------
// Instances

void Instance::validate() const {
  if (n < 1 || n > kMaxDenseQubits)
    throw Error("instance: n = " + std::to_string(n) + " outside [1, " + std::to_string(kMaxDenseQubits) + "]");
  if (checks.empty()) throw Error("instance: no checks");
  for (const auto& check : checks) {
    const auto& s = check.support();
    if (s.empty() || s.size() > kMaxCheckSupport) throw Error("instance: check support size must be in [1, 5]");
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error("instance: check support must be strictly ascending");
    if (s.front() < 0 || s.back() >= n) throw Error("instance: check support out of range");
  }
  if (witness && witness->num_qubits() != n) throw Error("instance: witness size does not match n");
}

Instance ghz_instance() {
  using namespace gates;
  Instance inst;
  inst.n = 3;
  inst.kind = InstanceKind::kYes;
  inst.name = "ghz3";
  inst.checks.emplace_back(std::vector<int>{0, 1}, projector_from_pauli(kron(pauli_z(), pauli_z())));
  inst.checks.emplace_back(std::vector<int>{1, 2}, projector_from_pauli(kron(pauli_z(), pauli_z())));
  inst.checks.emplace_back(std::vector<int>{0, 1, 2}, projector_from_pauli(kron(kron(pauli_x(), pauli_x()), pauli_x())));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(0) = psi(7) = 1.0 / std::sqrt(2.0);
  inst.witness = DenseState::pure(psi);
  return inst;
}

Instance frustrated_instance() {
  using namespace gates;
  Instance inst;
  inst.n = 3;
  inst.kind = InstanceKind::kNo;
  inst.name = "frustrated3";
  inst.checks.emplace_back(std::vector<int>{0}, projector_from_pauli(pauli_z()));
  inst.checks.emplace_back(std::vector<int>{0}, projector_from_pauli(pauli_x()));
  return inst;
}

Matrix check_operator(const Instance& instance) {
  instance.validate();
  const auto d = Eigen::Index{1} << instance.n;
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& check : instance.checks) sum += embed_operator(check.projector(), check.support(), instance.n);
  return sum / static_cast<double>(instance.m());
}

double soundness_bound(const Instance& instance) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(check_operator(instance), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

DenseState optimal_cheating_state(const Instance& instance) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(check_operator(instance));
  // Eigenvalues come sorted ascending.
  Eigen::VectorXcd psi = solver.eigenvectors().col(solver.eigenvalues().size() - 1);
  return DenseState::pure(psi);
}

DenseState local_sim(const Instance& instance, std::span<const int> support) {
  if (!instance.witness) throw Error("local_sim: instance has no witness");
  return partial_trace(*instance.witness, support);
}

std::optional<ProverKind> parse_prover_kind(std::string_view name) {
  if (name == "honest") return ProverKind::kHonest;
  if (name == "optimal" || name == "optimal-eigenvector") return ProverKind::kOptimal;
  if (name == "wrong-witness" || name == "honest-but-wrong-witness") return ProverKind::kWrongWitness;
  if (name == "decommit-liar") return ProverKind::kDecommitLiar;
  return std::nullopt;
}

std::string_view prover_kind_name(ProverKind kind) {
  switch (kind) {
    case ProverKind::kHonest: return "honest";
    case ProverKind::kOptimal: return "optimal";
    case ProverKind::kWrongWitness: return "wrong-witness";
    case ProverKind::kDecommitLiar: return "decommit-liar";
  }
  return "?";
}

std::optional<VerifierKind> parse_verifier_kind(std::string_view name) {
  if (name == "honest") return VerifierKind::kHonest;
  if (name == "fixed-challenge") return VerifierKind::kFixedChallenge;
  if (name == "cert-withholding") return VerifierKind::kCertWithholding;
  return std::nullopt;
}

std::string_view verifier_kind_name(VerifierKind kind) {
  switch (kind) {
    case VerifierKind::kHonest: return "honest";
    case VerifierKind::kFixedChallenge: return "fixed-challenge";
    case VerifierKind::kCertWithholding: return "cert-withholding";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Protocol messages

Session Session::create(const XiParams& params, Rng& rng) {
  if (params.ccd.ske.msg_len != 1) throw Error("session: pad commitments must be single-bit");
  return {params, OracleSet::create(params.ccd, rng)};
}

std::pair<Msg1, ProverState> prover_commit(const Instance& instance, Session& session, Rng& rng) {
  if (!instance.witness) throw Error("prover: instance has no witness");
  const auto n = static_cast<std::size_t>(instance.n);
  BitString x = BitString::random(n, rng);
  BitString z = BitString::random(n, rng);
  return prover_commit_with(instance, *instance.witness, {x, z}, x, z, session, rng);
}

std::pair<Msg1, ProverState> prover_commit_with(const Instance& instance, const DenseState& state,
                                                const PauliMask& mask, const BitString& committed_x,
                                                const BitString& committed_z, Session& session, Rng& rng) {
  const auto n = static_cast<std::size_t>(instance.n);
  if (state.num_qubits() != instance.n) throw Error("prover: state size does not match instance");
  if (committed_x.size() != n || committed_z.size() != n) throw Error("prover: pad length does not match instance");
  Msg1 msg;
  ProverState ps;
  msg.masked_state = apply_pauli_mask(state, mask);
  ps.x = committed_x;
  ps.z = committed_z;
  const auto& params = session.params.ccd;
  for (std::size_t i = 0; i < n; ++i) {
    auto cx = ccd_commit(BitString{committed_x[i]}, params, session.oracles, rng);
    auto cz = ccd_commit(BitString{committed_z[i]}, params, session.oracles, rng);
    msg.com_x.push_back(std::move(cx.com));
    msg.com_z.push_back(std::move(cz.com));
    ps.d_x.push_back(std::move(cx.decommitment));
    ps.d_z.push_back(std::move(cz.decommitment));
    ps.key_x.push_back(std::move(cx.key));
    ps.key_z.push_back(std::move(cz.key));
  }
  return {std::move(msg), std::move(ps)};
}

std::pair<Msg2, VerifierState> verifier_challenge(Msg1 msg1, const Instance& instance, Session& session, Rng& rng,
                                                  const VerifierStrategy& strategy) {
  const auto n = static_cast<std::size_t>(instance.n);
  if (msg1.masked_state.num_qubits() != instance.n || msg1.com_x.size() != n || msg1.com_z.size() != n)
    throw Error("verifier: malformed first message");
  Msg2 msg;
  if (strategy.kind == VerifierKind::kFixedChallenge) {
    if (strategy.fixed_c >= instance.m()) throw Error("verifier: fixed challenge out of range");
    msg.c = strategy.fixed_c;
  } else {
    msg.c = rng.below(instance.m());
  }
  msg.cert_indices = complement_of(instance.checks[msg.c].support(), instance.n);
  for (int q : msg.cert_indices) {
    msg.cert_x.push_back(ccd_del(msg1.com_x[static_cast<std::size_t>(q)], rng));
    msg.cert_z.push_back(ccd_del(msg1.com_z[static_cast<std::size_t>(q)], rng));
  }
  if (strategy.kind == VerifierKind::kCertWithholding && !msg.cert_x.empty())
    msg.cert_x.front().outcomes = BitString::random(session.params.ccd.ske.mu, rng);
  VerifierState vs{msg.c, std::move(msg1.masked_state), std::move(msg1.com_x), std::move(msg1.com_z)};
  return {std::move(msg), std::move(vs)};
}

std::pair<std::optional<Msg3>, bool> prover_respond(const ProverState& state, const Msg2& msg2,
                                                    const Instance& instance, Session& session) {
  if (msg2.c >= instance.m()) return {std::nullopt, false};
  const auto& support = instance.checks[msg2.c].support();
  if (msg2.cert_indices != complement_of(support, instance.n) || msg2.cert_x.size() != msg2.cert_indices.size() ||
      msg2.cert_z.size() != msg2.cert_indices.size())
    return {std::nullopt, false};

  Msg3 msg;
  msg.indices = support;
  for (int q : support) {
    msg.d_x.push_back(state.d_x[static_cast<std::size_t>(q)]);
    msg.d_z.push_back(state.d_z[static_cast<std::size_t>(q)]);
  }
  const auto& params = session.params.ccd;
  bool ok = true;
  for (std::size_t j = 0; j < msg2.cert_indices.size() && ok; ++j) {
    auto q = static_cast<std::size_t>(msg2.cert_indices[j]);
    try {
      ok = ccd_cert(msg2.cert_x[j], state.key_x[q], params) && ccd_cert(msg2.cert_z[j], state.key_z[q], params);
    } catch (const Error&) {
      ok = false;
    }
  }
  return {std::move(msg), ok};
}

std::optional<std::pair<BitString, BitString>> verifier_open(VerifierState& state, const Msg3& msg3,
                                                             const Instance& instance, Session& session, Rng& rng) {
  const auto& support = instance.checks[state.c].support();
  if (msg3.indices != support || msg3.d_x.size() != support.size() || msg3.d_z.size() != support.size())
    return std::nullopt;
  const auto& params = session.params.ccd;
  BitString xs, zs;
  for (std::size_t j = 0; j < support.size(); ++j) {
    auto q = static_cast<std::size_t>(support[j]);
    auto bx = ccd_verify(state.com_x[q], msg3.d_x[j], session.oracles, params, rng);
    if (!bx) return std::nullopt;
    auto bz = ccd_verify(state.com_z[q], msg3.d_z[j], session.oracles, params, rng);
    if (!bz) return std::nullopt;
    xs.push_back((*bx)[0]);
    zs.push_back((*bz)[0]);
  }
  return std::make_pair(std::move(xs), std::move(zs));
}

bool verifier_verify(VerifierState& state, const Msg3& msg3, const Instance& instance, Session& session, Rng& rng) {
  auto opened = verifier_open(state, msg3, instance, session, rng);
  if (!opened) return false;
  return measure_check(state, *opened, instance, rng);
}

// ---------------------------------------------------------------------------
// Executions

Transcript run_protocol(const Instance& instance, ProverKind prover, const VerifierStrategy& verifier,
                        Session& session, Rng& rng) {
  instance.validate();
  std::pair<Msg1, ProverState> committed;
  const auto n = static_cast<std::size_t>(instance.n);
  if (prover == ProverKind::kHonest) {
    committed = prover_commit(instance, session, rng);
  } else {
    DenseState state = prover == ProverKind::kWrongWitness ? DenseState::basis_state(instance.n, 0)
                                                           : optimal_cheating_state(instance);
    BitString x = BitString::random(n, rng);
    BitString z = BitString::random(n, rng);
    committed = prover_commit_with(instance, state, {x, z}, x, z, session, rng);
  }
  return *finish_round(instance, std::move(committed.first), committed.second, prover, verifier, std::nullopt,
                       session, rng);
}

SequentialResult run_sequential(const Instance& instance, std::size_t rounds, ProverKind prover,
                                const VerifierStrategy& verifier, Session& session, Rng& rng) {
  if (rounds == 0) throw Error("sequential repetition needs at least one round");
  SequentialResult out;
  out.prover_out = out.verifier_out = true;
  for (std::size_t j = 0; j < rounds; ++j) {
    out.rounds.push_back(run_protocol(instance, prover, verifier, session, rng));
    out.prover_out = out.prover_out && out.rounds.back().prover_out;
    out.verifier_out = out.verifier_out && out.rounds.back().verifier_out;
  }
  return out;
}

SimulatorResult simulator_s1(const Instance& instance, const VerifierStrategy& verifier, Session& session, Rng& rng) {
  auto t = simulate_once(instance, verifier, false, session, rng);
  return {t.has_value(), std::move(t)};
}

SimulatorResult simulator_s2(const Instance& instance, const VerifierStrategy& verifier, Session& session, Rng& rng) {
  auto t = simulate_once(instance, verifier, true, session, rng);
  return {t.has_value(), std::move(t)};
}

Transcript simulator_s3(const Instance& instance, const VerifierStrategy& verifier, Session& session, Rng& rng,
                        std::size_t max_retries) {
  return retry(instance, verifier, true, session, rng, max_retries);
}

Transcript simulator_s1_postselected(const Instance& instance, const VerifierStrategy& verifier, Session& session,
                                     Rng& rng, std::size_t max_retries) {
  return retry(instance, verifier, false, session, rng, max_retries);
}

Transcript abort_record(const Instance&) { return Transcript{}; }

}  // namespace evercommit
