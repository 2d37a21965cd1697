#include "evercommit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace evercommit {

namespace {

// ---------------------------------------------------------------------------
// Trial runner

template <class Result, class MakeWorker>
std::vector<Result> parallel_trials(std::size_t trials, unsigned jobs, MakeWorker make_worker) {
  std::vector<Result> out(trials);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  std::vector<std::exception_ptr> errors(jobs);
  auto work = [&](unsigned w) {
    try {
      auto fn = make_worker();
      for (std::size_t i = w; i < trials; i += jobs) out[i] = fn(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

void check_trials(std::size_t trials) {
  if (trials < kMinTrials) throw Error("trials must be at least " + std::to_string(kMinTrials));
}

// ---------------------------------------------------------------------------
// Adversary helpers

// Decryption key as the second stage can reconstruct it: the SKE key itself,
// or H(d1) ⊕ h through the second-stage oracle.
std::optional<SkeSecretKey> second_stage_key(const ChallengeView& view, const Revealed& rev, std::size_t i) {
  if (rev.d1.empty() || rev.hash == nullptr) return rev.keys.at(i);
  return SkeSecretKey::deserialize(rev.hash->query(rev.d1[i]) ^ view.h[i], view.params->ske);
}

std::uint64_t pack(const BitString& b) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < b.size(); ++k) v |= static_cast<std::uint64_t>(b[k]) << k;
  return v;
}

// Is v in the GF(2) span of `vectors`?
bool in_span(const std::vector<std::uint64_t>& vectors, std::uint64_t v) {
  std::vector<std::uint64_t> basis;  // kept with distinct leading bits
  for (std::uint64_t x : vectors) {
    for (std::uint64_t b : basis) x = std::min(x, x ^ b);
    if (x) basis.push_back(x);
  }
  for (std::uint64_t b : basis) v = std::min(v, v ^ b);
  return v == 0;
}

// Whether message m could have produced `classical` given r on the `known`
// computational positions (values in `r`); the remaining computational bits
// are uniform to the adversary.
bool consistent(const SkeSecretKey& sk, const BitString& classical, const BitString& known, const BitString& r,
                const BitString& m) {
  const auto comp = sk.computational_positions();
  BitString r_known(comp.size());
  std::vector<std::uint64_t> free_cols;
  for (std::size_t j = 0; j < comp.size(); ++j) {
    if (known[comp[j]]) {
      r_known[j] = r[comp[j]];
    } else {
      BitString e(comp.size());
      e[j] = 1;
      free_cols.push_back(pack(toeplitz_hash(sk.hash_seed, e, sk.u.size())));
    }
  }
  BitString y = classical ^ sk.u ^ toeplitz_hash(sk.hash_seed, r_known, sk.u.size());
  return in_span(free_cols, pack(y ^ m));
}

// Maximum-likelihood guess between m0 and m1 from everything the second stage
// holds: the key, recorded computational-basis outcomes, intact registers.
std::uint8_t optimal_guess(ChallengeView& view, const Notes& notes, const std::vector<SkeSecretKey>& keys, Rng& rng) {
  bool fits[2] = {true, true};
  std::size_t offset = 0;
  for (std::size_t i = 0; i < view.quantum.size(); ++i) {
    const auto& sk = keys[i];
    const std::size_t w = view.quantum[i].width();
    BitString known(w), r(w);
    if (notes.intact[i]) {
      for (std::size_t q : sk.computational_positions()) {
        r[q] = view.quantum[i].measure(q, Basis::kComputational, rng);
        known[q] = 1;
      }
    } else {
      known = notes.measured[i];
      r = notes.outcomes[i];
    }
    const std::size_t len = sk.u.size();
    fits[0] = fits[0] && consistent(sk, view.classical[i], known, r, notes.m0.slice(offset, len));
    fits[1] = fits[1] && consistent(sk, view.classical[i], known, r, notes.m1.slice(offset, len));
    offset += len;
  }
  if (fits[0] == fits[1]) return rng.bit();
  return fits[1] ? 1 : 0;
}

std::uint8_t guess_with_revealed(ChallengeView& view, const Notes& notes, const Revealed* rev, Rng& rng) {
  if (rev == nullptr) return rng.bit();
  std::vector<SkeSecretKey> keys;
  for (std::size_t i = 0; i < view.quantum.size(); ++i) {
    auto sk = second_stage_key(view, *rev, i);
    if (!sk) return rng.bit();
    keys.push_back(std::move(*sk));
  }
  return optimal_guess(view, notes, keys, rng);
}

std::vector<std::size_t> all_positions(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

SkeDeletionCert delete_item(ChallengeView& view, std::size_t i, Notes& notes, Rng& rng) {
  auto out = view.quantum[i].measure_all(BitString(view.quantum[i].width(), 1), rng);
  notes.outcomes[i] = out;
  notes.measured[i] = BitString(out.size());
  notes.intact[i] = 0;
  return {out};
}

void init_notes(Notes& notes, std::size_t items) {
  notes.outcomes.assign(items, BitString());
  notes.measured.assign(items, BitString());
  notes.intact.assign(items, 1);
}

// Exhaustive search for an R opening f; stops at the first hit.
std::optional<BitString> search_opening(const BitString& f, RandomOracle& oracle, const ClassicalParams& params) {
  const std::size_t bits = params.s + params.t;
  if (bits > kMaxExtractBits) throw SearchSpaceError("brute force: search space too large");
  const std::uint64_t total = std::uint64_t{1} << bits;
  for (std::uint64_t v = 0; v < total; ++v) {
    BitString input = BitString::from_uint(v, bits);
    if (oracle.query(input) == f) return input.slice(0, params.s);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Built-in strategies

class RandomGuess final : public AdversaryStrategy {
 public:
  std::string_view name() const override { return "random"; }
  std::vector<SkeDeletionCert> act_on_challenge(ChallengeView& view, Notes& notes, Rng& rng) override {
    std::vector<SkeDeletionCert> certs;
    for (std::size_t i = 0; i < view.quantum.size(); ++i) certs.push_back(delete_item(view, i, notes, rng));
    return certs;
  }
  std::uint8_t final_guess(ChallengeView&, const Notes&, const Revealed*, Rng& rng) override { return rng.bit(); }
};

class HonestDelete final : public AdversaryStrategy {
 public:
  std::string_view name() const override { return "honest-delete"; }
  std::vector<SkeDeletionCert> act_on_challenge(ChallengeView& view, Notes& notes, Rng& rng) override {
    std::vector<SkeDeletionCert> certs;
    for (std::size_t i = 0; i < view.quantum.size(); ++i) certs.push_back(delete_item(view, i, notes, rng));
    return certs;
  }
  std::uint8_t final_guess(ChallengeView& view, const Notes& notes, const Revealed* rev, Rng& rng) override {
    return guess_with_revealed(view, notes, rev, rng);
  }
};

// Measures everything in the computational basis and submits the outcomes.
class CompMeasure final : public AdversaryStrategy {
 public:
  std::string_view name() const override { return "comp-measure"; }
  std::vector<SkeDeletionCert> act_on_challenge(ChallengeView& view, Notes& notes, Rng& rng) override {
    std::vector<SkeDeletionCert> certs;
    for (std::size_t i = 0; i < view.quantum.size(); ++i) {
      const std::size_t w = view.quantum[i].width();
      notes.outcomes[i] = view.quantum[i].measure_all(BitString(w, 0), rng);
      notes.measured[i] = BitString(w, 1);
      notes.intact[i] = 0;
      certs.push_back({notes.outcomes[i]});
    }
    return certs;
  }
  std::uint8_t final_guess(ChallengeView& view, const Notes& notes, const Revealed* rev, Rng& rng) override {
    if (rev == nullptr) {
      // No key: the classical part is padded, so this is as good as a coin.
      return view.classical[0][0] ^ notes.outcomes[0][0];
    }
    return guess_with_revealed(view, notes, rev, rng);
  }
};

// Measures a random subset of positions in the computational basis and the
// rest in the Hadamard basis.
class PartialMeasure final : public AdversaryStrategy {
 public:
  explicit PartialMeasure(double fraction) : fraction_(std::clamp(fraction, 0.0, 1.0)) {}
  std::string_view name() const override { return "partial-measure"; }
  std::vector<SkeDeletionCert> act_on_challenge(ChallengeView& view, Notes& notes, Rng& rng) override {
    std::vector<SkeDeletionCert> certs;
    for (std::size_t i = 0; i < view.quantum.size(); ++i) {
      const std::size_t w = view.quantum[i].width();
      auto order = all_positions(w);
      std::shuffle(order.begin(), order.end(), rng.engine());
      const auto k = static_cast<std::size_t>(std::lround(fraction_ * static_cast<double>(w)));
      BitString bases(w, 1);
      for (std::size_t j = 0; j < k; ++j) bases[order[j]] = 0;
      notes.outcomes[i] = view.quantum[i].measure_all(bases, rng);
      notes.measured[i] = BitString(w);
      for (std::size_t j = 0; j < w; ++j) notes.measured[i][j] = bases[j] ^ 1u;
      notes.intact[i] = 0;
      certs.push_back({notes.outcomes[i]});
    }
    return certs;
  }
  std::uint8_t final_guess(ChallengeView& view, const Notes& notes, const Revealed* rev, Rng& rng) override {
    return guess_with_revealed(view, notes, rev, rng);
  }

 private:
  double fraction_;
};

// Keeps the first register intact and submits a uniformly random certificate
// for it; deletes every other register honestly.
class CertForger final : public AdversaryStrategy {
 public:
  std::string_view name() const override { return "cert-forger"; }
  std::vector<SkeDeletionCert> act_on_challenge(ChallengeView& view, Notes& notes, Rng& rng) override {
    std::vector<SkeDeletionCert> certs;
    for (std::size_t i = 0; i < view.quantum.size(); ++i) {
      if (i == 0) {
        certs.push_back({BitString::random(view.quantum[i].width(), rng)});
      } else {
        certs.push_back(delete_item(view, i, notes, rng));
      }
    }
    return certs;
  }
  std::uint8_t final_guess(ChallengeView& view, const Notes& notes, const Revealed* rev, Rng& rng) override {
    return guess_with_revealed(view, notes, rev, rng);
  }
};

// Unbounded search over the classical commitment: recovers R, unmasks the
// key through H, decrypts the intact register.
class BruteForce final : public AdversaryStrategy {
 public:
  std::string_view name() const override { return "brute-force"; }
  std::vector<SkeDeletionCert> act_on_challenge(ChallengeView& view, Notes&, Rng&) override {
    return std::vector<SkeDeletionCert>(view.quantum.size());
  }
  std::uint8_t final_guess(ChallengeView& view, const Notes& notes, const Revealed*, Rng& rng) override {
    if (view.commit == nullptr || view.hash == nullptr) return rng.bit();
    std::vector<SkeSecretKey> keys;
    for (std::size_t i = 0; i < view.quantum.size(); ++i) {
      auto r = search_opening(view.f[i], *view.commit, view.params->classical);
      if (!r) return rng.bit();
      auto sk = SkeSecretKey::deserialize(view.hash->query(*r) ^ view.h[i], view.params->ske);
      if (!sk) return rng.bit();
      keys.push_back(std::move(*sk));
    }
    return optimal_guess(view, notes, keys, rng);
  }
};

class RandomPredictor final : public PredictorStrategy {
 public:
  std::string_view name() const override { return "random"; }
  std::optional<BitString> predict(const BitString&, RandomOracle&, const ClassicalParams& params, Rng& rng) override {
    return BitString::random(params.s, rng);
  }
};

class BruteForcePredictor final : public PredictorStrategy {
 public:
  std::string_view name() const override { return "brute-force"; }
  std::optional<BitString> predict(const BitString& f, RandomOracle& oracle, const ClassicalParams& params,
                                   Rng&) override {
    return search_opening(f, oracle, params);
  }
};

class NeverPredictor final : public PredictorStrategy {
 public:
  std::string_view name() const override { return "never"; }
  std::optional<BitString> predict(const BitString&, RandomOracle&, const ClassicalParams&, Rng&) override {
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Game plumbing

struct Challenge {
  std::vector<SkeCiphertext> ct;
  std::vector<SkeSecretKey> keys;
  std::vector<BitString> r;
  std::vector<BitString> r_prime;
  std::vector<BitString> f;
  std::vector<BitString> h;
};

ChallengeView view_of(Challenge& ch, const CcdParams* params, RandomOracle* hash, RandomOracle* commit) {
  ChallengeView view;
  for (auto& ct : ch.ct) {
    view.quantum.emplace_back(ct.quantum);
    view.classical.push_back(ct.classical);
  }
  view.f = ch.f;
  view.h = ch.h;
  view.hash = hash;
  view.commit = commit;
  view.params = params;
  return view;
}

std::pair<BitString, BitString> checked_messages(AdversaryStrategy& strategy, std::size_t len, Notes& notes, Rng& rng) {
  auto [m0, m1] = strategy.choose_messages(len, rng);
  if (m0.size() != len || m1.size() != len) throw Error("strategy chose messages of the wrong length");
  notes.m0 = m0;
  notes.m1 = m1;
  return {m0, m1};
}

// Verifies every certificate; a malformed one counts as rejected.
bool certs_accepted(const std::vector<SkeDeletionCert>& certs, const std::vector<SkeSecretKey>& keys,
                    const SkeParams& params, bool& violation) {
  if (certs.size() != keys.size()) {
    violation = true;
    return false;
  }
  bool ok = true;
  for (std::size_t i = 0; i < certs.size(); ++i) {
    if (certs[i].outcomes.size() != params.mu) {
      violation = true;
      return false;
    }
    ok = ok && ske_verify(keys[i], certs[i], params);
  }
  return ok;
}

// Commits to each part of `msg` (split into `items` equal pieces) under the given oracles.
Challenge commit_parts(const BitString& msg, std::size_t items, const CcdParams& params, RandomOracle& commit, Rng& rng) {
  Challenge ch;
  const std::size_t len = msg.size() / items;
  for (std::size_t i = 0; i < items; ++i) {
    SkeSecretKey sk = ske_keygen(params.ske, rng);
    BitString r = BitString::random(params.classical.s, rng);
    BitString rp = BitString::random(params.classical.t, rng);
    ch.ct.push_back(ske_enc(sk, msg.slice(i * len, len), rng));
    ch.f.push_back(commit_classical(r, rp, commit, params.classical));
    ch.keys.push_back(std::move(sk));
    ch.r.push_back(std::move(r));
    ch.r_prime.push_back(std::move(rp));
  }
  return ch;
}

TrialOutcome commitment_game(AdversaryStrategy& strategy, const CcdParams& params, std::size_t items,
                             HybridMode mode, bool cert_phase, Rng& rng) {
  params.validate();
  TrialOutcome out;
  Notes notes;
  init_notes(notes, items);
  const std::size_t len = params.ske.msg_len * items;
  auto [m0, m1] = checked_messages(strategy, len, notes, rng);
  out.b = rng.bit();

  RandomOracle hash(params.h_len(), rng.next_u64());
  RandomOracle commit(params.classical.q(), rng.next_u64());
  Challenge ch = commit_parts(out.b ? m1 : m0, items, params, commit, rng);

  // Oracle views per stage.
  std::optional<RandomOracle> stage1, stage2;
  RandomOracle* a1 = &hash;
  RandomOracle* a2 = &hash;
  switch (mode) {
    case HybridMode::kReal:
      for (std::size_t i = 0; i < items; ++i) ch.h.push_back(hash.query(ch.r[i]) ^ ch.keys[i].serialize());
      break;
    case HybridMode::kHyb1:
      for (std::size_t i = 0; i < items; ++i) ch.h.push_back(hash.query(ch.r[i]) ^ ch.keys[i].serialize());
      stage1.emplace(hash.fork());
      for (std::size_t i = 0; i < items; ++i) stage1->reprogram(ch.r[i], BitString::random(params.h_len(), rng));
      a1 = &*stage1;
      break;
    case HybridMode::kHyb2: {
      stage1.emplace(params.h_len(), rng.next_u64());
      for (std::size_t i = 0; i < items; ++i) ch.h.push_back(BitString::random(params.h_len(), rng));
      stage2.emplace(stage1->fork());
      for (std::size_t i = 0; i < items; ++i) stage2->reprogram(ch.r[i], ch.h[i] ^ ch.keys[i].serialize());
      a1 = &*stage1;
      a2 = &*stage2;
      break;
    }
  }

  ChallengeView view = view_of(ch, &params, a1, &commit);
  auto certs = strategy.act_on_challenge(view, notes, rng);
  if (!cert_phase) {
    out.accepted_cert = true;
    out.guess = strategy.final_guess(view, notes, nullptr, rng);
    return out;
  }
  out.accepted_cert = certs_accepted(certs, ch.keys, params.ske, out.violation);
  if (!out.accepted_cert) return out;
  view.hash = a2;
  Revealed rev{ch.keys, ch.r, ch.r_prime, a2};
  out.guess = strategy.final_guess(view, notes, &rev, rng);
  return out;
}

std::size_t hits_of(const std::vector<std::uint8_t>& v) {
  return static_cast<std::size_t>(std::count(v.begin(), v.end(), 1));
}

RateEstimate rate_of(std::size_t hits, std::size_t trials) {
  RateEstimate r;
  r.trials = trials;
  r.hits = hits;
  r.rate = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
  r.ci95 = trials ? 1.96 * std::sqrt(r.rate * (1 - r.rate) / static_cast<double>(trials)) : 0.0;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Names

std::optional<Game> parse_game(std::string_view name) {
  if (name == "otcd") return Game::kOtcd;
  if (name == "everhide") return Game::kEverHide;
  if (name == "chide") return Game::kCHide;
  if (name == "unpre") return Game::kUnpre;
  if (name == "bitever") return Game::kBitEverHide;
  return std::nullopt;
}

std::string_view game_name(Game game) {
  switch (game) {
    case Game::kOtcd: return "otcd";
    case Game::kEverHide: return "everhide";
    case Game::kCHide: return "chide";
    case Game::kUnpre: return "unpre";
    case Game::kBitEverHide: return "bitever";
  }
  return "?";
}

std::optional<HybridMode> parse_mode(std::string_view name) {
  if (name == "real") return HybridMode::kReal;
  if (name == "hyb1") return HybridMode::kHyb1;
  if (name == "hyb2") return HybridMode::kHyb2;
  return std::nullopt;
}

std::string_view mode_name(HybridMode mode) {
  switch (mode) {
    case HybridMode::kReal: return "real";
    case HybridMode::kHyb1: return "hyb1";
    case HybridMode::kHyb2: return "hyb2";
  }
  return "?";
}

std::string_view conditioning_name(Conditioning c) {
  return c == Conditioning::kNone ? "none" : "cert-accepted";
}

bool is_cert_gated(Game game) {
  return game == Game::kOtcd || game == Game::kEverHide || game == Game::kBitEverHide;
}

std::pair<BitString, BitString> AdversaryStrategy::choose_messages(std::size_t len, Rng&) {
  return {BitString(len, 0), BitString(len, 1)};
}

std::vector<std::string> strategy_names(Game game) {
  switch (game) {
    case Game::kOtcd:
    case Game::kEverHide:
      return {"random", "honest-delete", "comp-measure", "partial-measure", "cert-forger"};
    case Game::kBitEverHide:
      return {"random", "honest-delete", "comp-measure", "partial-measure", "cert-forger"};
    case Game::kCHide:
      return {"random", "comp-measure", "brute-force"};
    case Game::kUnpre:
      return {"random", "brute-force", "never"};
  }
  return {};
}

std::unique_ptr<AdversaryStrategy> make_strategy(Game game, std::string_view name, const StrategyOptions& options) {
  auto names = strategy_names(game);
  if (game == Game::kUnpre || std::find(names.begin(), names.end(), name) == names.end()) return nullptr;
  if (name == "random") return std::make_unique<RandomGuess>();
  if (name == "honest-delete") return std::make_unique<HonestDelete>();
  if (name == "comp-measure") return std::make_unique<CompMeasure>();
  if (name == "partial-measure") return std::make_unique<PartialMeasure>(options.partial_fraction);
  if (name == "cert-forger") return std::make_unique<CertForger>();
  if (name == "brute-force") return std::make_unique<BruteForce>();
  return nullptr;
}

std::unique_ptr<PredictorStrategy> make_predictor(std::string_view name) {
  if (name == "random") return std::make_unique<RandomPredictor>();
  if (name == "brute-force") return std::make_unique<BruteForcePredictor>();
  if (name == "never") return std::make_unique<NeverPredictor>();
  return nullptr;
}

// ---------------------------------------------------------------------------
// Statistics

AdvantageEstimate estimate_advantage(const std::vector<TrialOutcome>& outcomes, Conditioning conditioning) {
  AdvantageEstimate est;
  est.trials = outcomes.size();
  est.conditioning = conditioning;
  std::size_t k[2] = {0, 0}, n[2] = {0, 0};
  for (const auto& o : outcomes) {
    if (conditioning == Conditioning::kCertAccepted && !o.accepted_cert) continue;
    n[o.b]++;
    k[o.b] += o.guess.value_or(0) == 1;
  }
  est.n0 = n[0];
  est.n1 = n[1];
  if (n[0] == 0 || n[1] == 0) {
    est.sigma = 0.5;
    est.ci95 = 1.96 * est.sigma;
    return est;
  }
  est.rate0 = static_cast<double>(k[0]) / static_cast<double>(n[0]);
  est.rate1 = static_cast<double>(k[1]) / static_cast<double>(n[1]);
  est.advantage = std::abs(est.rate0 - est.rate1);
  double p = static_cast<double>(k[0] + k[1] + 1) / static_cast<double>(n[0] + n[1] + 2);
  est.sigma = std::sqrt(p * (1 - p) * (1.0 / static_cast<double>(n[0]) + 1.0 / static_cast<double>(n[1])));
  est.ci95 = 1.96 * est.sigma;
  return est;
}

// ---------------------------------------------------------------------------
// Games

TrialOutcome otcd_trial(AdversaryStrategy& strategy, const SkeParams& params, Rng& rng) {
  params.validate();
  TrialOutcome out;
  Notes notes;
  init_notes(notes, 1);
  auto [m0, m1] = checked_messages(strategy, params.msg_len, notes, rng);
  out.b = rng.bit();
  Challenge ch;
  ch.keys.push_back(ske_keygen(params, rng));
  ch.ct.push_back(ske_enc(ch.keys[0], out.b ? m1 : m0, rng));
  CcdParams wrapper{params, {}};
  ChallengeView view = view_of(ch, &wrapper, nullptr, nullptr);
  auto certs = strategy.act_on_challenge(view, notes, rng);
  out.accepted_cert = certs_accepted(certs, ch.keys, params, out.violation);
  if (!out.accepted_cert) return out;
  Revealed rev{ch.keys, {}, {}, nullptr};
  out.guess = strategy.final_guess(view, notes, &rev, rng);
  return out;
}

TrialOutcome ever_hide_trial(AdversaryStrategy& strategy, const CcdParams& params, HybridMode mode, Rng& rng) {
  return commitment_game(strategy, params, 1, mode, true, rng);
}

TrialOutcome c_hide_trial(AdversaryStrategy& strategy, const CcdParams& params, Rng& rng) {
  return commitment_game(strategy, params, 1, HybridMode::kReal, false, rng);
}

TrialOutcome bit_ever_hide_trial(AdversaryStrategy& strategy, const CcdParams& params, std::size_t n, Rng& rng) {
  if (n == 0) throw Error("bit game: n must be at least 1");
  return commitment_game(strategy, params.with_msg_len(1), n, HybridMode::kReal, true, rng);
}

bool unpre_trial(PredictorStrategy& strategy, const ClassicalParams& params, Rng& rng) {
  RandomOracle oracle(params.q(), rng.next_u64());
  BitString r = BitString::random(params.s, rng);
  BitString rp = BitString::random(params.t, rng);
  BitString f = commit_classical(r, rp, oracle, params);
  auto guess = strategy.predict(f, oracle, params, rng);
  return guess && *guess == r;
}

namespace {

template <class Trial>
std::vector<TrialOutcome> sequential_outcomes(std::size_t trials, std::uint64_t seed, Trial trial) {
  check_trials(trials);
  std::vector<TrialOutcome> out;
  out.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, i));
    out.push_back(trial(rng));
  }
  return out;
}

}  // namespace

AdvantageEstimate exp_otcd(AdversaryStrategy& strategy, const SkeParams& params, std::size_t trials,
                           std::uint64_t seed, Conditioning conditioning) {
  auto outcomes = sequential_outcomes(trials, seed, [&](Rng& rng) { return otcd_trial(strategy, params, rng); });
  return estimate_advantage(outcomes, conditioning);
}

AdvantageEstimate exp_ever_hide(AdversaryStrategy& strategy, const CcdParams& params, std::size_t trials,
                                std::uint64_t seed, HybridMode mode, Conditioning conditioning) {
  auto outcomes =
      sequential_outcomes(trials, seed, [&](Rng& rng) { return ever_hide_trial(strategy, params, mode, rng); });
  return estimate_advantage(outcomes, conditioning);
}

AdvantageEstimate exp_c_hide(AdversaryStrategy& strategy, const CcdParams& params, std::size_t trials,
                             std::uint64_t seed) {
  auto outcomes = sequential_outcomes(trials, seed, [&](Rng& rng) { return c_hide_trial(strategy, params, rng); });
  return estimate_advantage(outcomes, Conditioning::kNone);
}

double exp_unpre(PredictorStrategy& strategy, const ClassicalParams& params, std::size_t trials, std::uint64_t seed) {
  check_trials(trials);
  std::size_t wins = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(derive_seed(seed, i));
    wins += unpre_trial(strategy, params, rng);
  }
  return static_cast<double>(wins) / static_cast<double>(trials);
}

AdvantageEstimate exp_bit_ever_hide(AdversaryStrategy& strategy, const CcdParams& params, std::size_t n,
                                    std::size_t trials, std::uint64_t seed, Conditioning conditioning) {
  auto outcomes =
      sequential_outcomes(trials, seed, [&](Rng& rng) { return bit_ever_hide_trial(strategy, params, n, rng); });
  return estimate_advantage(outcomes, conditioning);
}

GameResult run_game(const GameConfig& config) {
  check_trials(config.trials);
  config.params.validate();
  GameResult result;
  result.config = config;
  const Game game = config.game;

  if (game == Game::kUnpre) {
    if (!make_predictor(config.strategy)) throw Error("unknown strategy '" + config.strategy + "'");
    auto wins = parallel_trials<std::uint8_t>(config.trials, config.jobs, [&] {
      return [&, strategy = std::shared_ptr<PredictorStrategy>(make_predictor(config.strategy))](std::size_t i) {
        Rng rng(derive_seed(config.seed, i));
        return static_cast<std::uint8_t>(unpre_trial(*strategy, config.params.classical, rng));
      };
    });
    auto rate = rate_of(hits_of(wins), config.trials);
    result.win_rate = rate.rate;
    result.win_ci95 = rate.ci95;
    result.estimate.trials = result.unconditioned.trials = config.trials;
    return result;
  }

  if (!make_strategy(game, config.strategy, config.options)) throw Error("unknown strategy '" + config.strategy + "'");
  auto outcomes = parallel_trials<TrialOutcome>(config.trials, config.jobs, [&] {
    return [&, strategy = std::shared_ptr<AdversaryStrategy>(make_strategy(game, config.strategy, config.options))](
               std::size_t i) {
      Rng rng(derive_seed(config.seed, i));
      switch (game) {
        case Game::kOtcd: return otcd_trial(*strategy, config.params.ske, rng);
        case Game::kEverHide: return ever_hide_trial(*strategy, config.params, config.mode, rng);
        case Game::kCHide: return c_hide_trial(*strategy, config.params, rng);
        case Game::kBitEverHide: return bit_ever_hide_trial(*strategy, config.params, config.bit_count, rng);
        case Game::kUnpre: break;
      }
      throw Error("unreachable game");
    };
  });
  for (const auto& o : outcomes) {
    result.accepted_trials += o.accepted_cert;
    result.violations += o.violation;
  }
  result.cert_accept_rate = static_cast<double>(result.accepted_trials) / static_cast<double>(config.trials);
  result.unconditioned = estimate_advantage(outcomes, Conditioning::kNone);
  result.estimate =
      is_cert_gated(game) ? estimate_advantage(outcomes, Conditioning::kCertAccepted) : result.unconditioned;
  return result;
}

// ---------------------------------------------------------------------------
// Protocol estimators

namespace {

template <class Body>
RateEstimate protocol_rate(const ProtocolRunConfig& config, Body body) {
  if (config.trials == 0) throw Error("estimator: trials must be positive");
  auto hits = parallel_trials<std::uint8_t>(config.trials, config.jobs, [&] {
    return [&](std::size_t i) {
      Rng rng(derive_seed(config.seed, i));
      Session session = Session::create(config.params, rng);
      return static_cast<std::uint8_t>(body(session, rng));
    };
  });
  return rate_of(hits_of(hits), config.trials);
}

std::map<std::string, std::size_t> histogram(const std::vector<std::string>& keys) {
  std::map<std::string, std::size_t> out;
  for (const auto& k : keys) out[k]++;
  return out;
}

template <class Sampler>
std::vector<std::string> sample_keys(const ProtocolRunConfig& config, std::uint64_t stream, Sampler sampler) {
  const std::uint64_t base = derive_seed(config.seed, stream);
  return parallel_trials<std::string>(config.trials, config.jobs, [&] {
    return [&](std::size_t i) {
      Rng rng(derive_seed(base, i));
      Session session = Session::create(config.params, rng);
      return observable_key(sampler(session, rng));
    };
  });
}

ZkEstimate compare(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  ZkEstimate est;
  est.samples = a.size();
  est.left = histogram(a);
  est.right = histogram(b);
  est.tv = empirical_tv(est.left, a.size(), est.right, b.size());
  std::map<std::string, int> cells;
  for (const auto& [k, v] : est.left) cells[k] = 1;
  for (const auto& [k, v] : est.right) cells[k] = 1;
  double half = 0;
  for (const auto& [k, unused] : cells) {
    double pa = est.left.count(k) ? static_cast<double>(est.left.at(k)) / static_cast<double>(a.size()) : 0.0;
    double pb = est.right.count(k) ? static_cast<double>(est.right.at(k)) / static_cast<double>(b.size()) : 0.0;
    half += std::sqrt(pa * (1 - pa) / static_cast<double>(a.size()) + pb * (1 - pb) / static_cast<double>(b.size()));
  }
  est.ci95 = 1.96 * half / 2;
  return est;
}

}  // namespace

RateEstimate estimate_completeness(const Instance& instance, const ProtocolRunConfig& config) {
  if (instance.kind != InstanceKind::kYes) throw Error("completeness needs a yes-instance");
  return protocol_rate(config, [&](Session& session, Rng& rng) {
    auto r = run_sequential(instance, config.rounds, ProverKind::kHonest, {}, session, rng);
    return r.verifier_out && r.prover_out;
  });
}

RateEstimate estimate_soundness(const Instance& instance, ProverKind cheater, const ProtocolRunConfig& config) {
  if (cheater == ProverKind::kHonest && !instance.witness) throw Error("soundness: honest prover needs a witness");
  return protocol_rate(config, [&](Session& session, Rng& rng) {
    return run_sequential(instance, config.rounds, cheater, {}, session, rng).verifier_out;
  });
}

RateEstimate estimate_s1_success(const Instance& instance, const VerifierStrategy& verifier,
                                 const ProtocolRunConfig& config) {
  return protocol_rate(config,
                       [&](Session& session, Rng& rng) { return simulator_s1(instance, verifier, session, rng).success; });
}

std::string observable_key(const Transcript& t) {
  if (!t.prover_out) return "bot";
  return std::to_string(t.msg2.c) + "|" + (t.verifier_out ? "1" : "0") + "|" + std::to_string(t.opened_x.weight()) +
         "|" + std::to_string(t.opened_z.weight());
}

double empirical_tv(const std::map<std::string, std::size_t>& a, std::size_t na,
                    const std::map<std::string, std::size_t>& b, std::size_t nb) {
  if (na == 0 || nb == 0) throw Error("empirical TV: empty sample");
  double sum = 0;
  for (const auto& [k, ca] : a) {
    auto it = b.find(k);
    double pb = it == b.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(nb);
    sum += std::abs(static_cast<double>(ca) / static_cast<double>(na) - pb);
  }
  for (const auto& [k, cb] : b)
    if (!a.count(k)) sum += static_cast<double>(cb) / static_cast<double>(nb);
  return sum / 2;
}

ZkEstimate estimate_zk_distance(const Instance& instance, const VerifierStrategy& verifier,
                                const ProtocolRunConfig& config) {
  auto real = sample_keys(config, 1, [&](Session& session, Rng& rng) {
    return run_protocol(instance, ProverKind::kHonest, verifier, session, rng);
  });
  auto sim = sample_keys(config, 2,
                         [&](Session& session, Rng& rng) { return simulator_s3(instance, verifier, session, rng); });
  return compare(real, sim);
}

ZkEstimate estimate_simulator_gap(const Instance& instance, const VerifierStrategy& verifier,
                                  const ProtocolRunConfig& config) {
  auto s1 = sample_keys(config, 3, [&](Session& session, Rng& rng) {
    return simulator_s1_postselected(instance, verifier, session, rng);
  });
  auto s2 = sample_keys(config, 4,
                        [&](Session& session, Rng& rng) { return simulator_s3(instance, verifier, session, rng); });
  return compare(s1, s2);
}

}  // namespace evercommit
