// Security games with pluggable adversaries, and Monte-Carlo estimators for
// the protocol's completeness, soundness and zero-knowledge distance.
//
// Trial i of a run with master seed s draws from Rng(derive_seed(s, i)), so
// results do not depend on the number of worker threads.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evercommit/commitment.hpp"
#include "evercommit/xi_protocol.hpp"

namespace evercommit {

enum class Game : std::uint8_t { kOtcd, kEverHide, kCHide, kUnpre, kBitEverHide };
enum class HybridMode : std::uint8_t { kReal, kHyb1, kHyb2 };
enum class Conditioning : std::uint8_t { kNone, kCertAccepted };

std::optional<Game> parse_game(std::string_view name);
std::string_view game_name(Game game);
std::optional<HybridMode> parse_mode(std::string_view name);
std::string_view mode_name(HybridMode mode);
std::string_view conditioning_name(Conditioning c);
bool is_cert_gated(Game game);

inline constexpr std::size_t kMinTrials = 100;

// ---------------------------------------------------------------------------
// Adversaries

/// What the first-stage adversary receives: one entry per ciphertext or
/// commitment. Quantum parts are reachable only through measurement.
struct ChallengeView {
  std::vector<QuantumView> quantum;
  std::vector<BitString> classical;  ///< SKE classical parts
  std::vector<BitString> f;          ///< empty in the SKE game
  std::vector<BitString> h;
  RandomOracle* hash = nullptr;  ///< the stage's oracle access; null in the SKE game
  RandomOracle* commit = nullptr;
  const CcdParams* params = nullptr;
};

/// Classical notes carried from the first stage to the second.
struct Notes {
  BitString m0;  ///< the two challenge messages, as chosen
  BitString m1;
  std::vector<BitString> outcomes;  ///< per item: measured bits, empty if untouched
  std::vector<BitString> measured;  ///< per item: 1 where `outcomes` holds a computational-basis result
  std::vector<std::uint8_t> intact;  ///< per item: register left unmeasured
};

/// Released after accepted certificates. Keys are the SKE keys in the SKE
/// game and ck otherwise; d1/d2 are empty in the SKE game.
struct Revealed {
  std::vector<SkeSecretKey> keys;
  std::vector<BitString> d1;
  std::vector<BitString> d2;
  RandomOracle* hash = nullptr;  ///< second-stage oracle access
};

class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;
  virtual std::string_view name() const = 0;

  /// Defaults to (0^len, 1^len).
  virtual std::pair<BitString, BitString> choose_messages(std::size_t len, Rng& rng);
  /// One certificate per item; ignored by games without deletion.
  virtual std::vector<SkeDeletionCert> act_on_challenge(ChallengeView& view, Notes& notes, Rng& rng) = 0;
  /// `revealed` is null when the certificates were rejected or the game has
  /// no reveal phase. `view` is the post-deletion state the adversary kept.
  virtual std::uint8_t final_guess(ChallengeView& view, const Notes& notes, const Revealed* revealed, Rng& rng) = 0;
};

/// Prediction adversary for the unpredictability game.
class PredictorStrategy {
 public:
  virtual ~PredictorStrategy() = default;
  virtual std::string_view name() const = 0;
  virtual std::optional<BitString> predict(const BitString& f, RandomOracle& oracle, const ClassicalParams& params,
                                           Rng& rng) = 0;
};

struct StrategyOptions {
  double partial_fraction = 0.5;
};

/// Built-in strategies accepted by `game`.
std::vector<std::string> strategy_names(Game game);
/// nullptr for a name outside strategy_names(game).
std::unique_ptr<AdversaryStrategy> make_strategy(Game game, std::string_view name, const StrategyOptions& options = {});
std::unique_ptr<PredictorStrategy> make_predictor(std::string_view name);

// ---------------------------------------------------------------------------
// Games

struct TrialOutcome {
  std::uint8_t b = 0;
  bool accepted_cert = false;
  std::optional<std::uint8_t> guess;  ///< absent iff the certificate was rejected
  bool violation = false;             ///< malformed certificate, counted as rejected
};

struct AdvantageEstimate {
  std::size_t trials = 0;
  double advantage = 0;
  double ci95 = 0;
  double sigma = 0;
  Conditioning conditioning = Conditioning::kNone;
  double rate0 = 0;  ///< P[out = 1 | b = 0] under the conditioning
  double rate1 = 0;
  std::size_t n0 = 0;  ///< trials counted for b = 0
  std::size_t n1 = 0;
};

/// |p0 - p1| with the pooled two-proportion standard error
/// sigma = sqrt(p (1 - p) (1/n0 + 1/n1)), p = (k0 + k1 + 1) / (n0 + n1 + 2),
/// and ci95 = 1.96 sigma. With an empty arm the advantage is 0 and sigma 0.5.
AdvantageEstimate estimate_advantage(const std::vector<TrialOutcome>& outcomes, Conditioning conditioning);

struct GameConfig {
  Game game = Game::kOtcd;
  std::string strategy = "random";
  CcdParams params = CcdParams::small();
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  HybridMode mode = HybridMode::kReal;  ///< everhide only
  std::size_t bit_count = 8;            ///< bitever only
  StrategyOptions options;
  unsigned jobs = 1;
};

struct GameResult {
  GameConfig config;
  AdvantageEstimate estimate;             ///< conditioned on acceptance for cert-gated games
  AdvantageEstimate unconditioned;        ///< always Conditioning::kNone
  std::size_t accepted_trials = 0;
  double cert_accept_rate = 0;
  std::size_t violations = 0;
  double win_rate = 0;  ///< unpre only
  double win_ci95 = 0;
};

/// Throws Error for an unknown strategy, trials below kMinTrials, or invalid params.
GameResult run_game(const GameConfig& config);

AdvantageEstimate exp_otcd(AdversaryStrategy& strategy, const SkeParams& params, std::size_t trials,
                           std::uint64_t seed, Conditioning conditioning = Conditioning::kCertAccepted);
AdvantageEstimate exp_ever_hide(AdversaryStrategy& strategy, const CcdParams& params, std::size_t trials,
                                std::uint64_t seed, HybridMode mode,
                                Conditioning conditioning = Conditioning::kCertAccepted);
AdvantageEstimate exp_c_hide(AdversaryStrategy& strategy, const CcdParams& params, std::size_t trials,
                             std::uint64_t seed);
/// Fraction of trials with R* = R.
double exp_unpre(PredictorStrategy& strategy, const ClassicalParams& params, std::size_t trials, std::uint64_t seed);
AdvantageEstimate exp_bit_ever_hide(AdversaryStrategy& strategy, const CcdParams& params, std::size_t n,
                                    std::size_t trials, std::uint64_t seed,
                                    Conditioning conditioning = Conditioning::kCertAccepted);

/// Single trials, exposed for tests. `rng` drives everything in the trial.
TrialOutcome otcd_trial(AdversaryStrategy& strategy, const SkeParams& params, Rng& rng);
TrialOutcome ever_hide_trial(AdversaryStrategy& strategy, const CcdParams& params, HybridMode mode, Rng& rng);
TrialOutcome c_hide_trial(AdversaryStrategy& strategy, const CcdParams& params, Rng& rng);
bool unpre_trial(PredictorStrategy& strategy, const ClassicalParams& params, Rng& rng);
TrialOutcome bit_ever_hide_trial(AdversaryStrategy& strategy, const CcdParams& params, std::size_t n, Rng& rng);

// ---------------------------------------------------------------------------
// Protocol estimators

struct RateEstimate {
  std::size_t trials = 0;
  std::size_t hits = 0;
  double rate = 0;
  double ci95 = 0;  ///< 1.96 sqrt(rate (1 - rate) / trials)
};

struct ProtocolRunConfig {
  XiParams params = XiParams::defaults();
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t rounds = 1;  ///< sequential repetitions per trial
  unsigned jobs = 1;
};

RateEstimate estimate_completeness(const Instance& instance, const ProtocolRunConfig& config);
/// Verifier acceptance rate against `cheater`.
RateEstimate estimate_soundness(const Instance& instance, ProverKind cheater, const ProtocolRunConfig& config);
/// Non-abort rate of S1.
RateEstimate estimate_s1_success(const Instance& instance, const VerifierStrategy& verifier,
                                 const ProtocolRunConfig& config);

/// Classical projection of OUT': "bot" when the prover rejects, else
/// (challenge, verifier accept bit, weight of opened x, weight of opened z).
std::string observable_key(const Transcript& t);

struct ZkEstimate {
  std::size_t samples = 0;
  double tv = 0;
  double ci95 = 0;  ///< normal-approximation half-width, summed over cells
  std::map<std::string, std::size_t> left;
  std::map<std::string, std::size_t> right;
};

double empirical_tv(const std::map<std::string, std::size_t>& a, std::size_t na,
                    const std::map<std::string, std::size_t>& b, std::size_t nb);

/// Real OUT' versus S3 output.
ZkEstimate estimate_zk_distance(const Instance& instance, const VerifierStrategy& verifier,
                                const ProtocolRunConfig& config);
/// Post-selected S1 versus post-selected S2 (= S3).
ZkEstimate estimate_simulator_gap(const Instance& instance, const VerifierStrategy& verifier,
                                  const ProtocolRunConfig& config);

}  // namespace evercommit
