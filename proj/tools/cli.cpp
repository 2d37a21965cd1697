#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "evercommit/serialize.hpp"

namespace evercommit {

namespace {

constexpr int kExitReject = 1;
constexpr int kExitUsage = 2;

struct ParamFlags {
  std::string preset;
  std::optional<std::size_t> n, mu, mu_comp, s, t, threshold;

  void add(CLI::App& app, bool with_msg_len) {
    app.add_option("--preset", preset, "Parameter preset")->check(CLI::IsMember({"small", "default"}));
    if (with_msg_len) app.add_option("--n", n, "Message length");
    app.add_option("--mu", mu, "BB84 positions per ciphertext");
    app.add_option("--mu-comp", mu_comp, "Computational-basis positions");
    app.add_option("--s", s, "Committed string bits");
    app.add_option("--t", t, "Commitment randomness bits");
    app.add_option("--threshold", threshold, "Tolerated certificate errors");
  }

  CcdParams resolve(const std::string& fallback) const {
    CcdParams p = (preset.empty() ? fallback : preset) == "small" ? CcdParams::small() : CcdParams::defaults();
    if (n) p.ske.msg_len = *n;
    if (mu) p.ske.mu = *mu;
    if (mu_comp) p.ske.mu_comp = *mu_comp;
    if (s) p.classical.s = *s;
    if (t) p.classical.t = *t;
    if (threshold) p.ske.cert_threshold = *threshold;
    p.validate();
    return p;
  }
};

// EVERCOMMIT_SEED wins over --seed; 0 draws from entropy and reports it.
std::uint64_t resolve_seed(std::uint64_t flag, std::ostream& err) {
  std::uint64_t seed = flag;
  if (const char* env = std::getenv("EVERCOMMIT_SEED"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw Error(std::string("EVERCOMMIT_SEED is not an unsigned integer: ") + env);
    }
  }
  if (seed == 0) {
    std::random_device rd;
    seed = (std::uint64_t{rd()} << 32) ^ rd();
    if (seed == 0) seed = 1;
    err << "seed: " << seed << '\n';
  }
  return seed;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void emit(const Json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    write_json_file(path, j);
  }
}

std::string join(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified everlasting commitments and zero-knowledge: protocol runs and security games", "evercommit"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run the protocol on an instance and write the transcript");
  std::string run_instance, run_output, cheater = "honest", verifier = "honest";
  std::uint64_t run_seed = 0;
  std::size_t rounds = 1, fixed_c = 1;
  ParamFlags run_params;
  run->add_option("--instance", run_instance, "Instance JSON file")->required();
  run->add_option("--cheater", cheater, "Prover: honest, optimal, wrong-witness, decommit-liar");
  run->add_option("--verifier", verifier, "Verifier: honest, fixed-challenge, cert-withholding");
  run->add_option("--challenge", fixed_c, "Challenge used by the fixed-challenge verifier (1-based)");
  run->add_option("--rounds", rounds, "Sequential repetitions")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_seed, "Master seed (0: from entropy)");
  run->add_option("--output", run_output, "Transcript file (default: stdout)");
  run_params.add(*run, false);

  // game
  auto* game = app.add_subcommand("game", "Run a security game and write the advantage estimate");
  std::string game_arg, strategy = "random", mode = "real", game_output, out_dir;
  std::uint64_t game_seed = 0;
  std::size_t trials = 1000, bits = 8;
  unsigned jobs = 1;
  double fraction = 0.5;
  ParamFlags game_params;
  game->add_option("game", game_arg, "otcd, everhide, chide, unpre, bitever")->required();
  game->add_option("--strategy", strategy, "Adversary strategy");
  game->add_option("--trials", trials, "Number of trials");
  game->add_option("--mode", mode, "real, hyb1, hyb2 (everhide)");
  game->add_option("--bits", bits, "Committed bits (bitever)")->check(CLI::PositiveNumber);
  game->add_option("--fraction", fraction, "Measured fraction (partial-measure)")->check(CLI::Range(0.0, 1.0));
  game->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  game->add_option("--seed", game_seed, "Master seed (0: from entropy)");
  game->add_option("--output", game_output, "Results file (default: stdout)");
  game->add_option("--out-dir", out_dir, "Write <game>-<strategy>-<mode>.json here");
  game_params.add(*game, true);

  // bound
  auto* bound = app.add_subcommand("bound", "Print the soundness bound of an instance");
  std::string bound_instance;
  bound->add_option("--instance", bound_instance, "Instance JSON file")->required();

  // make-instance
  auto* make = app.add_subcommand("make-instance", "Write the bundled instances");
  std::vector<std::string> make_names{"ghz", "frustrated"};
  std::string make_dir = ".";
  make->add_option("names", make_names, "ghz and/or frustrated")->check(CLI::IsMember({"ghz", "frustrated"}));
  make->add_option("--out-dir", make_dir, "Destination directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const auto start = std::chrono::steady_clock::now();

    if (*run) {
      auto prover = parse_prover_kind(cheater);
      if (!prover) throw Error("unknown cheater '" + cheater + "'; choose from honest, optimal, wrong-witness, decommit-liar");
      auto vkind = parse_verifier_kind(verifier);
      if (!vkind) throw Error("unknown verifier '" + verifier + "'; choose from honest, fixed-challenge, cert-withholding");
      Instance inst = load_instance(run_instance);
      if (fixed_c < 1 || fixed_c > inst.m()) throw Error("--challenge must be in [1, " + std::to_string(inst.m()) + "]");
      XiParams xp{run_params.resolve("default").with_msg_len(1)};
      const std::uint64_t seed = resolve_seed(run_seed, err);
      Rng rng(seed);
      Session session = Session::create(xp, rng);
      VerifierStrategy vs{*vkind, fixed_c - 1};
      SequentialResult result = run_sequential(inst, rounds, *prover, vs, session, rng);
      Json j = {{"command", "run"},
                {"instance", inst.name},
                {"seed", seed},
                {"params", params_to_json(xp.ccd)},
                {"cheater", prover_kind_name(*prover)},
                {"verifier", verifier_kind_name(*vkind)}};
      if (*vkind == VerifierKind::kFixedChallenge) j["challenge"] = fixed_c;
      j["rounds"] = rounds;
      j["result"] = sequential_to_json(result);
      j["timing"] = {{"seconds", seconds_since(start)}};
      emit(j, run_output, out);
      return result.verifier_out ? 0 : kExitReject;
    }

    if (*game) {
      auto g = parse_game(game_arg);
      if (!g) throw Error("unknown game '" + game_arg + "'; choose from otcd, everhide, chide, unpre, bitever");
      auto names = strategy_names(*g);
      if (std::find(names.begin(), names.end(), strategy) == names.end()) {
        err << "unknown strategy '" << strategy << "' for " << game_arg << "; available: " << join(names) << '\n';
        return kExitUsage;
      }
      auto m = parse_mode(mode);
      if (!m) throw Error("unknown mode '" + mode + "'; choose from real, hyb1, hyb2");
      GameConfig cfg;
      cfg.game = *g;
      cfg.strategy = strategy;
      // The unpredictability game is classical: the default preset keeps the
      // blind-guess baseline at 2^-16 instead of 2^-8.
      cfg.params = game_params.resolve(*g == Game::kUnpre ? "default" : "small");
      cfg.trials = trials;
      cfg.mode = *m;
      cfg.bit_count = bits;
      cfg.options.partial_fraction = fraction;
      cfg.jobs = jobs;
      cfg.seed = resolve_seed(game_seed, err);
      Json j = game_result_to_json(run_game(cfg));
      j["timing"] = {{"seconds", seconds_since(start)}};
      std::string path = game_output;
      if (path.empty() && !out_dir.empty())
        path = (std::filesystem::path(out_dir) / (game_arg + "-" + strategy + "-" + mode + ".json")).string();
      emit(j, path, out);
      return 0;
    }

    if (*bound) {
      Instance inst = load_instance(bound_instance);
      out << std::fixed << std::setprecision(6) << soundness_bound(inst) << '\n';
      return 0;
    }

    if (*make) {
      for (const auto& name : make_names) {
        Instance inst = name == "ghz" ? ghz_instance() : frustrated_instance();
        auto path = std::filesystem::path(make_dir) / (name + ".json");
        write_json_file(path, instance_to_json(inst));
        out << path.string() << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace evercommit
