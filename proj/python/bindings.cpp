// Python module evercommit._core. Structured values cross the boundary as
// JSON text in the CLI's wire format; the package wrapper decodes them.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evercommit/serialize.hpp"

namespace py = pybind11;
using namespace evercommit;

namespace {

CcdParams preset(const std::string& name) {
  if (name == "small") return CcdParams::small();
  if (name == "default") return CcdParams::defaults();
  throw Error("unknown preset '" + name + "'");
}

Json rate_json(const RateEstimate& r) { return {{"trials", r.trials}, {"hits", r.hits}, {"rate", r.rate}, {"ci95", r.ci95}}; }

ProtocolRunConfig run_config(const std::string& preset_name, std::size_t trials, std::uint64_t seed, std::size_t rounds,
                             unsigned jobs) {
  ProtocolRunConfig cfg;
  cfg.params = XiParams{preset(preset_name).with_msg_len(1)};
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.rounds = rounds;
  cfg.jobs = jobs;
  return cfg;
}

ProverKind prover(const std::string& name) {
  auto k = parse_prover_kind(name);
  if (!k) throw Error("unknown prover '" + name + "'");
  return *k;
}

VerifierStrategy verifier(const std::string& name, std::size_t challenge) {
  auto k = parse_verifier_kind(name);
  if (!k) throw Error("unknown verifier '" + name + "'");
  return {*k, challenge};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Certified everlasting commitments and zero-knowledge simulation";
  py::register_exception<Error>(m, "EvercommitError", PyExc_ValueError);

  m.def("bundled_instance", [](const std::string& name) {
    if (name == "ghz") return instance_to_json(ghz_instance()).dump();
    if (name == "frustrated") return instance_to_json(frustrated_instance()).dump();
    throw Error("unknown instance '" + name + "'");
  });

  m.def("soundness_bound", [](const std::string& instance) { return soundness_bound(instance_from_json(Json::parse(instance))); });

  m.def("strategy_names", [](const std::string& game) {
    auto g = parse_game(game);
    if (!g) throw Error("unknown game '" + game + "'");
    return strategy_names(*g);
  });

  m.def(
      "run_game",
      [](const std::string& game, const std::string& strategy, std::size_t trials, std::uint64_t seed,
         const std::string& preset_name, const std::string& mode, std::size_t bits, double fraction, unsigned jobs) {
        GameConfig cfg;
        auto g = parse_game(game);
        if (!g) throw Error("unknown game '" + game + "'");
        auto md = parse_mode(mode);
        if (!md) throw Error("unknown mode '" + mode + "'");
        cfg.game = *g;
        cfg.strategy = strategy;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.params = preset(preset_name);
        cfg.mode = *md;
        cfg.bit_count = bits;
        cfg.options.partial_fraction = fraction;
        cfg.jobs = jobs;
        py::gil_scoped_release release;
        return game_result_to_json(run_game(cfg)).dump();
      },
      py::arg("game"), py::arg("strategy"), py::arg("trials"), py::arg("seed"), py::arg("preset"), py::arg("mode"),
      py::arg("bits"), py::arg("fraction"), py::arg("jobs"));

  m.def(
      "run_protocol",
      [](const std::string& instance, const std::string& cheater, const std::string& verifier_name,
         std::size_t challenge, std::size_t rounds, std::uint64_t seed, const std::string& preset_name) {
        Instance inst = instance_from_json(Json::parse(instance));
        XiParams xp{preset(preset_name).with_msg_len(1)};
        Rng rng(seed);
        Session session = Session::create(xp, rng);
        auto result = run_sequential(inst, rounds, prover(cheater), verifier(verifier_name, challenge), session, rng);
        return sequential_to_json(result).dump();
      },
      py::arg("instance"), py::arg("cheater"), py::arg("verifier"), py::arg("challenge"), py::arg("rounds"),
      py::arg("seed"), py::arg("preset"));

  m.def(
      "estimate_completeness",
      [](const std::string& instance, std::size_t trials, std::uint64_t seed, const std::string& preset_name,
         unsigned jobs) {
        Instance inst = instance_from_json(Json::parse(instance));
        return rate_json(estimate_completeness(inst, run_config(preset_name, trials, seed, 1, jobs))).dump();
      },
      py::arg("instance"), py::arg("trials"), py::arg("seed"), py::arg("preset"), py::arg("jobs"));

  m.def(
      "estimate_soundness",
      [](const std::string& instance, const std::string& cheater, std::size_t trials, std::uint64_t seed,
         std::size_t rounds, const std::string& preset_name, unsigned jobs) {
        Instance inst = instance_from_json(Json::parse(instance));
        auto cfg = run_config(preset_name, trials, seed, rounds, jobs);
        return rate_json(estimate_soundness(inst, prover(cheater), cfg)).dump();
      },
      py::arg("instance"), py::arg("cheater"), py::arg("trials"), py::arg("seed"), py::arg("rounds"),
      py::arg("preset"), py::arg("jobs"));

  m.def(
      "estimate_zk_distance",
      [](const std::string& instance, const std::string& verifier_name, std::size_t challenge, std::size_t samples,
         std::uint64_t seed, const std::string& preset_name, unsigned jobs) {
        Instance inst = instance_from_json(Json::parse(instance));
        auto est = estimate_zk_distance(inst, verifier(verifier_name, challenge),
                                        run_config(preset_name, samples, seed, 1, jobs));
        return Json{{"samples", est.samples}, {"tv", est.tv}, {"ci95", est.ci95}}.dump();
      },
      py::arg("instance"), py::arg("verifier"), py::arg("challenge"), py::arg("samples"), py::arg("seed"),
      py::arg("preset"), py::arg("jobs"));
}
