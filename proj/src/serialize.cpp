#include "evercommit/serialize.hpp"

#include <fstream>
#include <sstream>

namespace evercommit {

namespace {

Json bits_json(const std::vector<SkeDeletionCert>& certs) {
  Json out = Json::array();
  for (const auto& c : certs) out.push_back(c.outcomes.to_hex());
  return out;
}

Json decommit_json(const std::vector<CcdDecommitment>& ds) {
  Json out = Json::array();
  for (const auto& d : ds) out.push_back({{"d1", d.d1.to_hex()}, {"d2", d.d2.to_hex()}});
  return out;
}

Json records_json(const std::vector<CommitmentRecord>& rs) {
  Json out = Json::array();
  for (const auto& r : rs) out.push_back({{"ske_classical", r.ske_classical.to_hex()}, {"f", r.f.to_hex()}, {"h", r.h.to_hex()}});
  return out;
}

Json one_based(const std::vector<int>& idx) {
  Json out = Json::array();
  for (int i : idx) out.push_back(i + 1);
  return out;
}

Json estimate_json(const AdvantageEstimate& e) {
  return {{"advantage", e.advantage}, {"ci95", e.ci95},         {"sigma", e.sigma}, {"conditioning", conditioning_name(e.conditioning)},
          {"rate0", e.rate0},         {"rate1", e.rate1},       {"n0", e.n0},       {"n1", e.n1}};
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (j.is_object()) {
    if (!j.contains("rho")) throw Error("matrix: object without \"rho\"");
    return matrix_from_json(j.at("rho"));
  }
  if (!j.is_array() || j.empty()) throw Error("matrix: expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) throw Error("matrix: rows must be square");
    for (Eigen::Index c = 0; c < rows; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = Complex{e.get<double>(), 0.0};
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex{e[0].get<double>(), e[1].get<double>()};
      } else {
        throw Error("matrix: entries must be [re, im]");
      }
    }
  }
  return m;
}

Json state_to_json(const DenseState& state) {
  return {{"n", state.num_qubits()}, {"rho", matrix_to_json(state.rho())}};
}

DenseState state_from_json(const Json& j) {
  DenseState s = DenseState::from_matrix(matrix_from_json(j));
  if (j.is_object() && j.contains("n") && j.at("n") != s.num_qubits()) throw Error("state: \"n\" does not match rho");
  return s;
}

Json instance_to_json(const Instance& instance) {
  Json checks = Json::array();
  for (const auto& c : instance.checks)
    checks.push_back({{"support", one_based(c.support())}, {"projector", matrix_to_json(c.projector())}});
  Json j = {{"n", instance.n},
            {"kind", instance.kind == InstanceKind::kYes ? "yes" : "no"},
            {"name", instance.name},
            {"checks", std::move(checks)}};
  if (instance.witness) j["witness"] = state_to_json(*instance.witness);
  return j;
}

Instance instance_from_json(const Json& j) {
  try {
    Instance inst;
    inst.n = j.at("n").get<int>();
    if (inst.n < 1 || inst.n > kMaxDenseQubits)
      throw Error("instance: n = " + std::to_string(inst.n) + " exceeds the " + std::to_string(kMaxDenseQubits) +
                  "-qubit cap");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "yes") {
      inst.kind = InstanceKind::kYes;
    } else if (kind == "no") {
      inst.kind = InstanceKind::kNo;
    } else {
      throw Error("instance: kind must be \"yes\" or \"no\"");
    }
    inst.name = j.value("name", std::string{});
    for (const auto& c : j.at("checks")) {
      std::vector<int> support;
      for (const auto& q : c.at("support")) support.push_back(q.get<int>() - 1);
      inst.checks.emplace_back(std::move(support), matrix_from_json(c.at("projector")));
    }
    if (j.contains("witness") && !j.at("witness").is_null()) inst.witness = state_from_json(j.at("witness"));
    inst.validate();
    return inst;
  } catch (const Json::exception& e) {
    throw Error(std::string("instance: ") + e.what());
  }
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

Json params_to_json(const CcdParams& p) {
  return {{"n", p.ske.msg_len},
          {"mu", p.ske.mu},
          {"mu_comp", p.ske.mu_comp},
          {"s", p.classical.s},
          {"t", p.classical.t},
          {"threshold", p.ske.cert_threshold}};
}

Json transcript_to_json(const Transcript& t) {
  Json msg2 = {{"c", t.msg2.c + 1},
               {"cert_indices", one_based(t.msg2.cert_indices)},
               {"cert_x", bits_json(t.msg2.cert_x)},
               {"cert_z", bits_json(t.msg2.cert_z)}};
  Json msg3 = nullptr;
  if (t.msg3)
    msg3 = {{"indices", one_based(t.msg3->indices)}, {"d_x", decommit_json(t.msg3->d_x)}, {"d_z", decommit_json(t.msg3->d_z)}};
  return {{"msg1", {{"masked_state", state_to_json(t.masked_state)}, {"com_x", records_json(t.com_x)}, {"com_z", records_json(t.com_z)}}},
          {"msg2", std::move(msg2)},
          {"msg3", std::move(msg3)},
          {"opened_x", t.opened_x.to_hex()},
          {"opened_z", t.opened_z.to_hex()},
          {"prover_out", t.prover_out},
          {"verifier_out", t.verifier_out}};
}

Json sequential_to_json(const SequentialResult& r) {
  Json rounds = Json::array();
  for (const auto& t : r.rounds) rounds.push_back(transcript_to_json(t));
  return {{"prover_out", r.prover_out}, {"verifier_out", r.verifier_out}, {"rounds", std::move(rounds)}};
}

Json game_result_to_json(const GameResult& r) {
  const auto& cfg = r.config;
  const bool unpre = cfg.game == Game::kUnpre;
  Json j = {{"game", game_name(cfg.game)},
            {"strategy", cfg.strategy},
            {"params", params_to_json(cfg.params)},
            {"trials", cfg.trials},
            {"advantage", unpre ? r.win_rate : r.estimate.advantage},
            {"ci95", unpre ? r.win_ci95 : r.estimate.ci95},
            {"conditioning", conditioning_name(r.estimate.conditioning)},
            {"seed", cfg.seed}};
  j["mode"] = mode_name(cfg.mode);
  if (cfg.game == Game::kBitEverHide) j["bits"] = cfg.bit_count;
  if (cfg.strategy == "partial-measure") j["partial_fraction"] = cfg.options.partial_fraction;
  j["jobs"] = cfg.jobs;
  if (unpre) {
    j["win_rate"] = r.win_rate;
  } else {
    j["sigma"] = r.estimate.sigma;
    j["cert_accept_rate"] = r.cert_accept_rate;
    j["accepted_trials"] = r.accepted_trials;
    j["violations"] = r.violations;
    j["estimate"] = estimate_json(r.estimate);
    j["unconditioned"] = estimate_json(r.unconditioned);
  }
  return j;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace evercommit
