#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "evercommit/serialize.hpp"

using namespace evercommit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "evercommit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  auto dir = fs::temp_directory_path() / "evercommit_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("instance files round trip") {
  for (const auto& inst : {ghz_instance(), frustrated_instance()}) {
    Instance back = instance_from_json(instance_to_json(inst));
    CHECK(back.n == inst.n);
    CHECK(back.kind == inst.kind);
    REQUIRE(back.m() == inst.m());
    for (std::size_t c = 0; c < inst.m(); ++c) {
      CHECK(back.checks[c].support() == inst.checks[c].support());
      CHECK(back.checks[c].projector().isApprox(inst.checks[c].projector()));
    }
    CHECK(back.witness.has_value() == inst.witness.has_value());
    CHECK(soundness_bound(back) == doctest::Approx(soundness_bound(inst)).epsilon(1e-12));
  }
  // Supports are 1-based on the wire.
  auto j = instance_to_json(ghz_instance());
  CHECK(j["checks"][0]["support"] == Json::array({1, 2}));
}

TEST_CASE("malformed instances are rejected") {
  auto j = instance_to_json(ghz_instance());
  auto bad = j;
  bad["checks"][0]["support"] = Json::array({0, 1});
  CHECK_THROWS_AS(instance_from_json(bad), Error);
  bad = j;
  bad["kind"] = "maybe";
  CHECK_THROWS_AS(instance_from_json(bad), Error);
  bad = j;
  bad.erase("checks");
  CHECK_THROWS_AS(instance_from_json(bad), Error);
  bad = j;
  bad["n"] = 13;
  CHECK_THROWS_AS(instance_from_json(bad), Error);
  bad = j;
  bad["checks"][0]["projector"][0][0] = Json::array({0.5, 0.0});
  CHECK_THROWS_AS(instance_from_json(bad), Error);
}

TEST_CASE("bound and make-instance") {
  auto dir = scratch();
  auto made = cli({"make-instance", "--out-dir", dir.string()});
  REQUIRE(made.code == 0);
  CHECK(cli({"bound", "--instance", (dir / "ghz.json").string()}).out == "1.000000\n");
  CHECK(cli({"bound", "--instance", (dir / "frustrated.json").string()}).out == "0.853553\n");

  auto big = instance_to_json(ghz_instance());
  big["n"] = 13;
  write_json_file(dir / "big.json", big);
  CHECK(cli({"bound", "--instance", (dir / "big.json").string()}).code == 2);
}

TEST_CASE("run command exit codes") {
  auto dir = scratch();
  cli({"make-instance", "--out-dir", dir.string()});
  auto out = dir / "t.json";
  auto ok = cli({"run", "--instance", (dir / "ghz.json").string(), "--seed", "7", "--output", out.string()});
  CHECK(ok.code == 0);
  auto t = read_json_file(out);
  CHECK(t["seed"] == 7);
  CHECK(t["result"]["verifier_out"] == true);
  CHECK(t["params"]["mu"] == 32);

  CHECK(cli({"run", "--instance", (dir / "missing.json").string(), "--seed", "7"}).code == 2);
  CHECK(cli({"run", "--instance", (dir / "ghz.json").string(), "--cheater", "nobody"}).code == 2);
  // No witness for the no-instance: the honest prover cannot run.
  CHECK(cli({"run", "--instance", (dir / "frustrated.json").string(), "--seed", "7"}).code == 2);

  // The optimal cheater is caught on some seeds and not others.
  int accepted = 0;
  for (int seed = 1; seed <= 40; ++seed) {
    auto r = cli({"run", "--instance", (dir / "frustrated.json").string(), "--cheater", "optimal", "--seed",
                  std::to_string(seed)});
    REQUIRE((r.code == 0 || r.code == 1));
    accepted += r.code == 0;
  }
  CHECK(accepted > 20);
  CHECK(accepted < 40);

  auto liar = cli({"run", "--instance", (dir / "ghz.json").string(), "--cheater", "decommit-liar", "--seed", "3"});
  CHECK(liar.code == 1);
}

TEST_CASE("game command") {
  auto unknown = cli({"game", "otcd", "--strategy", "nope", "--seed", "1"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("comp-measure") != std::string::npos);
  CHECK(cli({"game", "nogame", "--seed", "1"}).code == 2);
  CHECK(cli({"game", "otcd", "--trials", "10", "--seed", "1"}).code == 2);

  auto comp = cli({"game", "otcd", "--strategy", "comp-measure", "--trials", "100000", "--seed", "5"});
  REQUIRE(comp.code == 0);
  auto j = Json::parse(comp.out);
  CHECK(std::abs(j["cert_accept_rate"].get<double>() - 0.0625) < 0.01);
  CHECK(j["conditioning"] == "cert-accepted");
  CHECK(j["params"]["mu"] == 8);
  for (const char* key : {"game", "strategy", "params", "trials", "advantage", "ci95", "conditioning", "seed", "timing"})
    CHECK(j.contains(key));

  auto unpre = Json::parse(cli({"game", "unpre", "--strategy", "random", "--trials", "1000", "--seed", "5"}).out);
  CHECK(unpre["advantage"].get<double>() <= 0.002);
  CHECK(unpre["params"]["s"] == 16);
}

TEST_CASE("seed resolution") {
  auto a = cli({"game", "unpre", "--trials", "100", "--seed", "9"});
  ::setenv("EVERCOMMIT_SEED", "42", 1);
  auto b = cli({"game", "unpre", "--trials", "100", "--seed", "9"});
  ::setenv("EVERCOMMIT_SEED", "0", 1);
  auto c = cli({"game", "unpre", "--trials", "100"});
  ::setenv("EVERCOMMIT_SEED", "x", 1);
  auto d = cli({"game", "unpre", "--trials", "100"});
  ::unsetenv("EVERCOMMIT_SEED");
  CHECK(Json::parse(a.out)["seed"] == 9);
  CHECK(Json::parse(b.out)["seed"] == 42);
  CHECK(c.err.rfind("seed: ", 0) == 0);
  CHECK(Json::parse(c.out)["seed"] != 0);
  CHECK(d.code == 2);
}

TEST_CASE("outputs are reproducible apart from timing") {
  auto dir = scratch();
  cli({"make-instance", "--out-dir", dir.string()});
  auto strip = [](std::string s) {
    auto j = Json::parse(s);
    j.erase("timing");
    return j.dump();
  };
  auto g1 = cli({"game", "everhide", "--strategy", "partial-measure", "--trials", "500", "--seed", "11"});
  auto g2 = cli({"game", "everhide", "--strategy", "partial-measure", "--trials", "500", "--seed", "11"});
  CHECK(strip(g1.out) == strip(g2.out));
  auto r1 = cli({"run", "--instance", (dir / "ghz.json").string(), "--rounds", "2", "--seed", "4"});
  auto r2 = cli({"run", "--instance", (dir / "ghz.json").string(), "--rounds", "2", "--seed", "4"});
  CHECK(strip(r1.out) == strip(r2.out));
  CHECK(slurp(dir / "ghz.json") == Json(instance_to_json(ghz_instance())).dump(2) + "\n");
}
