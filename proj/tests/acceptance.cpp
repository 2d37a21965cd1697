// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers.
//
//   acceptance [--allow-known]
//
// Exit status is 0 when every criterion passes. With --allow-known, failures
// listed in kKnownFailures do not affect the status (their lines still read
// FAIL); see README for why they are expected.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "evercommit/serialize.hpp"

using namespace evercommit;
namespace fs = std::filesystem;

namespace {

const std::set<int> kKnownFailures = {3};

struct Report {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Report correctness() {
  Report r;
  const std::size_t trials = 1000;
  auto params = CcdParams::defaults();
  Rng rng(101);
  auto oracles = OracleSet::create(params, rng);
  std::size_t ske_ok = 0, dec_ok = 0, del_ok = 0, ske_del_ok = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    auto sk = ske_keygen(params.ske, rng);
    auto m = BitString::random(params.ske.msg_len, rng);
    auto ct = ske_enc(sk, m, rng);
    ske_ok += ske_dec(sk, ct, rng) == m;
    auto ct2 = ske_enc(sk, m, rng);
    ske_del_ok += ske_verify(sk, ske_del(ct2, rng), params.ske);

    auto out = ccd_commit(m, params, oracles, rng);
    auto opened = ccd_verify(out.com, out.decommitment, oracles, params, rng);
    dec_ok += opened && *opened == m;
    auto out2 = ccd_commit(m, params, oracles, rng);
    del_ok += ccd_cert(ccd_del(out2.com, rng), out2.key, params);
  }
  r.check(ske_ok == trials, fmt("SKE correctness %zu/%zu", ske_ok, trials));
  r.check(ske_del_ok == trials, fmt("SKE deletion verification %zu/%zu", ske_del_ok, trials));
  r.check(dec_ok == trials, fmt("decommitment correctness %zu/%zu", dec_ok, trials));
  r.check(del_ok == trials, fmt("deletion correctness %zu/%zu", del_ok, trials));
  return r;
}

Report binding() {
  Report r;
  auto params = CcdParams::small().with_msg_len(1);  // s = t = 8
  Rng rng(202);
  auto oracles = OracleSet::create(params, rng);
  std::size_t unique = 0, extracted = 0, foreign = 0;
  double worst_sum = 0;
  for (int i = 0; i < 100; ++i) {
    auto out = ccd_commit(BitString{std::uint8_t(i & 1)}, params, oracles, rng);
    auto openings = all_openings(out.com.f, oracles.commit, params.classical);
    unique += openings.size() == 1;
    auto ext = ccd_extract(out.com.f, oracles, params);
    extracted += ext && *ext == out.decommitment.d1;
    for (const auto& [d1, d2] : openings) {
      if (ext && d1 != *ext && ccd_verify1(out.com, d1, d2, oracles, params)) ++foreign;
      CcdDecommitment d{d1, d2};
      double sum = ccd_verify_sum_probability(out.com, d, 0, oracles, params) +
                   ccd_verify_sum_probability(out.com, d, 1, oracles, params);
      worst_sum = std::max(worst_sum, sum);
    }
  }
  r.check(unique == 100, fmt("unique opening per f: %zu/100 (2^16 enumeration each)", unique));
  r.check(extracted == 100, fmt("Ext(f) = committed R: %zu/100", extracted));
  r.check(foreign == 0, fmt("accepted openings with d1 != Ext(f): %zu", foreign));
  r.check(worst_sum <= 1.0 + 1e-12, fmt("sum-binding max Pr[0] + Pr[1] = %.6f", worst_sum));
  return r;
}

Report deletion() {
  Report r;
  const std::size_t trials = 100000;
  GameConfig cfg;
  cfg.params = CcdParams::small();
  cfg.trials = trials;
  cfg.game = Game::kOtcd;
  cfg.strategy = "comp-measure";
  cfg.seed = 303;
  auto comp = run_game(cfg);
  r.check(std::abs(comp.cert_accept_rate - 0.0625) <= 0.01,
          fmt("comp-measure cert acceptance %.5f (target 0.0625 +- 0.01, %zu trials)", comp.cert_accept_rate, trials));
  for (Game g : {Game::kOtcd, Game::kEverHide}) {
    for (const auto& name : strategy_names(g)) {
      cfg.game = g;
      cfg.strategy = name;
      cfg.seed = 304;
      auto res = run_game(cfg);
      const auto& e = res.estimate;
      r.check(e.advantage <= 3 * e.sigma,
              fmt("%-8s %-15s conditioned advantage %.4f vs 3 sigma %.4f (accepted %zu)", std::string(game_name(g)).c_str(),
                  name.c_str(), e.advantage, 3 * e.sigma, res.accepted_trials));
    }
  }
  return r;
}

Report break_witness() {
  Report r;
  ClassicalParams toy{8, 8};
  auto brute = make_predictor("brute-force");
  const std::size_t trials = 300;
  double win = exp_unpre(*brute, toy, trials, 404);
  r.check(win >= 0.99, fmt("unpre brute-force win rate %.4f at s = 8 over %zu trials", win, trials));
  GameConfig cfg;
  cfg.game = Game::kCHide;
  cfg.strategy = "brute-force";
  cfg.trials = trials;
  cfg.seed = 405;
  auto res = run_game(cfg);
  r.check(res.estimate.advantage >= 0.9,
          fmt("c-hide brute-force advantage %.4f over %zu trials", res.estimate.advantage, trials));
  return r;
}

Report protocol() {
  Report r;
  const auto ghz = ghz_instance();
  const auto frus = frustrated_instance();
  ProtocolRunConfig cfg;
  cfg.trials = 1000;
  cfg.seed = 505;
  auto comp = estimate_completeness(ghz, cfg);
  r.check(comp.rate == 1.0, fmt("GHZ completeness %.4f over %zu runs", comp.rate, comp.trials));

  const double bound = soundness_bound(frus);
  r.check(std::abs(bound - 0.853553) <= 1e-6, fmt("soundness bound %.6f", bound));

  cfg.trials = 10000;
  auto sound = estimate_soundness(frus, ProverKind::kOptimal, cfg);
  r.check(std::abs(sound.rate - bound) <= 0.02, fmt("optimal cheater acceptance %.4f over %zu runs", sound.rate, sound.trials));

  cfg.trials = 4000;
  cfg.rounds = 8;
  auto seq = estimate_soundness(frus, ProverKind::kOptimal, cfg);
  const double target = std::pow(bound, 8);
  r.check(std::abs(seq.rate - target) <= 0.03,
          fmt("N = 8 sequential acceptance %.4f vs %.4f over %zu runs", seq.rate, target, seq.trials));
  return r;
}

Report zero_knowledge() {
  Report r;
  const auto ghz = ghz_instance();
  ProtocolRunConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 606;
  VerifierStrategy honest;
  auto s1 = estimate_s1_success(ghz, honest, cfg);
  const double target = 1.0 / static_cast<double>(ghz.m());
  r.check(std::abs(s1.rate - target) <= 0.02, fmt("S1 non-abort rate %.4f vs 1/m = %.4f", s1.rate, target));
  auto zk = estimate_zk_distance(ghz, honest, cfg);
  r.check(zk.tv <= 0.05, fmt("TV(real, S3) = %.4f over %zu samples", zk.tv, zk.samples));
  auto gap = estimate_simulator_gap(ghz, honest, cfg);
  r.check(gap.tv <= 0.05, fmt("TV(S1, S2) = %.4f over %zu samples", gap.tv, gap.samples));
  return r;
}

// Runs a CLI command twice, with its output redirected to a file each time,
// and compares the files with the timing field removed.
Report determinism() {
  Report r;
  auto dir = fs::temp_directory_path() / "evercommit_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  auto invoke = [](std::vector<std::string> args, std::string& out) {
    args.insert(args.begin(), "evercommit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    out = o.str();
    return code;
  };
  auto strip = [](const std::string& text) {
    auto j = Json::parse(text);
    j.erase("timing");
    return j.dump(2);
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  std::string ignored;
  invoke({"make-instance", "--out-dir", dir.string()}, ignored);
  const std::string ghz = (dir / "ghz.json").string();
  const std::string frus = (dir / "frustrated.json").string();

  const std::vector<std::vector<std::string>> commands = {
      {"run", "--instance", ghz, "--seed", "7"},
      {"run", "--instance", frus, "--cheater", "optimal", "--rounds", "3", "--seed", "7"},
      {"run", "--instance", ghz, "--verifier", "cert-withholding", "--seed", "8"},
      {"game", "otcd", "--strategy", "comp-measure", "--trials", "5000", "--seed", "9"},
      {"game", "everhide", "--strategy", "partial-measure", "--mode", "hyb1", "--trials", "2000", "--seed", "9"},
      {"game", "chide", "--strategy", "brute-force", "--trials", "100", "--seed", "9"},
      {"game", "unpre", "--strategy", "random", "--trials", "1000", "--seed", "9"},
      {"game", "bitever", "--strategy", "cert-forger", "--trials", "2000", "--seed", "9"},
  };
  for (std::size_t k = 0; k < commands.size(); ++k) {
    std::string texts[2];
    int codes[2];
    for (int rep = 0; rep < 2; ++rep) {
      auto args = commands[k];
      auto path = dir / fmt("out_%zu_%d.json", k, rep);
      args.insert(args.end(), {"--output", path.string(), "--jobs", "1"});
      if (args[0] == "run") args.erase(args.end() - 2, args.end());
      codes[rep] = invoke(args, ignored);
      texts[rep] = slurp(path);
    }
    std::string label;
    for (const auto& a : commands[k]) label += (label.empty() ? "" : " ") + fs::path(a).filename().string();
    bool same = codes[0] == codes[1] && !texts[0].empty() && strip(texts[0]) == strip(texts[1]);
    r.check(same, fmt("%s: identical output, exit %d", label.c_str(), codes[0]));
  }
  for (const auto& inst : {ghz, frus}) {
    std::string a, b;
    invoke({"bound", "--instance", inst}, a);
    invoke({"bound", "--instance", inst}, b);
    r.check(a == b && !a.empty(), "bound " + fs::path(inst).filename().string() + ": identical output " + a.substr(0, 8));
  }
  auto env_a = dir / "env_a.json";
  auto env_b = dir / "env_b.json";
  ::setenv("EVERCOMMIT_SEED", "77", 1);
  invoke({"game", "otcd", "--trials", "500", "--output", env_a.string()}, ignored);
  invoke({"game", "otcd", "--trials", "500", "--seed", "3", "--output", env_b.string()}, ignored);
  ::unsetenv("EVERCOMMIT_SEED");
  r.check(strip(slurp(env_a)) == strip(slurp(env_b)), "EVERCOMMIT_SEED overrides --seed reproducibly");
  fs::remove_all(dir);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  const bool allow_known = argc > 1 && std::strcmp(argv[1], "--allow-known") == 0;
  struct Criterion {
    int id;
    const char* title;
    double budget_s;  // 0: no runtime bound
    std::function<Report()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "correctness suites", 10, correctness},
      {2, "binding at s = t = 8", 120, binding},
      {3, "certified deletion statistics", 120, deletion},
      {4, "toy-scale break witness", 60, break_witness},
      {5, "protocol completeness and soundness", 180, protocol},
      {6, "zero-knowledge simulators", 180, zero_knowledge},
      {7, "CLI determinism", 0, determinism},
  };
  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Report rep = c.run();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0) rep.check(secs < c.budget_s, fmt("runtime %.1f s (limit %.0f s)", secs, c.budget_s));
    std::printf("criterion %d: %s  %s (%.1f s)\n", c.id, rep.pass ? "PASS" : "FAIL", c.title, secs);
    for (const auto& d : rep.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    if (!rep.pass && !(allow_known && kKnownFailures.count(c.id))) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
