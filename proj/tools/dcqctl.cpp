// Batch front-end for schedule synthesis, verification and spin-bath sweeps.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dcq/drift.hpp"
#include "dcq/error_analysis.hpp"
#include "dcq/spinbath.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

double parse_angle(const std::string& s) {
  if (s.rfind("pi", 0) == 0) {
    if (s == "pi") return M_PI;
    if (s[2] == '/') return M_PI / std::stod(s.substr(3));
    if (s[2] == '*') return M_PI * std::stod(s.substr(3));
    throw std::invalid_argument("bad angle: " + s);
  }
  return std::stod(s);
}

dcq::GateSpec parse_gate(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  dcq::GateSpec g;
  if (parts.empty()) throw std::invalid_argument("empty gate spec");
  if (parts[0] == "x" || parts[0] == "y") {
    if (parts.size() != 3) throw std::invalid_argument("gate spec: want kind:qubit:angle");
    g.kind = parts[0] == "x" ? dcq::GateKind::X : dcq::GateKind::Y;
    g.qubit = std::stoi(parts[1]);
    g.theta = parse_angle(parts[2]);
  } else if (parts[0] == "heis") {
    if (parts.size() != 4) throw std::invalid_argument("gate spec: want heis:q1:q2:angle");
    g.kind = dcq::GateKind::Heisenberg;
    g.qubit = std::stoi(parts[1]);
    g.qubit2 = std::stoi(parts[2]);
    g.theta = parse_angle(parts[3]);
  } else {
    throw std::invalid_argument("unknown gate kind: " + parts[0]);
  }
  return g;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
}

void write_snapshot(const fs::path& dir, const json& config) {
  write_file(dir / "config_snapshot.json", config.dump(2) + "\n");
}

dcq::ErrorSubspace::Kind subspace_kind(const std::string& s) {
  if (s == "linear") return dcq::ErrorSubspace::Kind::Linear;
  if (s == "dephasing") return dcq::ErrorSubspace::Kind::Dephasing;
  if (s == "nn") return dcq::ErrorSubspace::Kind::NearestNeighborBilinear;
  throw std::invalid_argument("unknown subspace: " + s);
}

dcq::ControlErrorModel parse_error_model(const json& j) {
  dcq::ControlErrorModel em;
  std::string kind = j.value("kind", "none");
  if (kind == "none") em.kind = dcq::ControlErrorModel::Kind::None;
  else if (kind == "fixed_systematic") em.kind = dcq::ControlErrorModel::Kind::FixedSystematic;
  else if (kind == "scaled_systematic") em.kind = dcq::ControlErrorModel::Kind::ScaledSystematic;
  else if (kind == "random_overrotation") em.kind = dcq::ControlErrorModel::Kind::RandomOverrotation;
  else throw std::invalid_argument("unknown error model kind: " + kind);
  em.epsilon = j.value("epsilon", 0.0);
  em.width = j.value("width", 0.0);
  em.seed = j.value("seed", std::uint64_t{0});
  return em;
}

int cmd_synth(const std::string& model, const std::string& gate_spec, bool noop,
              const std::string& drift, int pair, int n, int chain_n, double lambda, double tau,
              const std::string& out_dir) {
  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  json snapshot = {{"command", "synth"}, {"model", model},   {"gate", gate_spec},
                   {"noop", noop},       {"drift", drift},   {"pair", pair},
                   {"n", n},             {"chain_n", chain_n}, {"lambda", lambda},
                   {"tau", tau}};
  write_snapshot(dir, snapshot);

  if (!drift.empty()) {
    if (drift != "heisenberg") throw std::invalid_argument("unknown drift kind: " + drift);
    dcq::ChainModel chain{chain_n, lambda};
    dcq::DriftSchedule ds = dcq::two_qubit_drift_dcg(chain, pair, tau);
    write_file(dir / "layer1.json", ds.layer1.to_json(chain_n) + "\n");
    write_file(dir / "layer2.json", ds.layer2.to_json(chain_n) + "\n");
    dcq::Schedule flat = ds.flatten();
    write_file(dir / "schedule.json", flat.to_json(chain_n) + "\n");
    std::printf("segments=%zu duration=%.17g\n", flat.segments.size(), flat.total_duration());
    return 0;
  }

  dcq::DecouplingGroup group;
  dcq::GroupRepresentation rep;
  if (model == "linear") {
    group = dcq::DecouplingGroup::z2_power(2);
    rep = dcq::rep_z2z2_collective(n);
  } else if (model == "dephasing") {
    group = dcq::DecouplingGroup::z2_power(1);
    rep = dcq::rep_z2_collective(n);
  } else {
    throw std::invalid_argument("unknown model: " + model);
  }

  dcq::SequenceSpec seq;
  dcq::Schedule sched;
  if (noop) {
    seq = dcq::synthesize_edd(group, rep);
    const double pulse = M_PI / (2.0 * tau);
    dcq::Mat gx = dcq::Mat::Zero(1 << n, 1 << n), gy = gx;
    for (int i = 1; i <= n; ++i) {
      gx += dcq::PauliString::single(n, i, 'X').matrix();
      gy += dcq::PauliString::single(n, i, 'Y').matrix();
    }
    for (const auto& tok : seq.tokens)
      sched.segments.push_back(
          {tok.name == "X" ? gx : gy, pulse, tau, dcq::Role::Generator, tok.name, 0});
    sched.id = "edd_" + model;
  } else {
    if (gate_spec.empty()) throw std::invalid_argument("synth: need --gate or --noop");
    dcq::GateSpec g = parse_gate(gate_spec);
    seq = dcq::synthesize_dcg(group, rep, "Q");
    sched = dcq::dcg_schedule(n, g, tau);
    if (model == "dephasing") {
      // 6-tau realization over the two-element group: X, I_Q, X, Q_half.
      sched.segments.clear();
      dcq::Mat gx = dcq::Mat::Zero(1 << n, 1 << n);
      for (int i = 1; i <= n; ++i) gx += dcq::PauliString::single(n, i, 'X').matrix();
      dcq::Mat c = dcq::gate_generator(n, g);
      const double pulse = M_PI / (2.0 * tau);
      sched.segments.push_back({gx, pulse, tau, dcq::Role::Generator, "X", 0});
      sched.segments.push_back({c, g.theta / tau, tau, dcq::Role::IdentityArm, "I_Q", 0});
      sched.segments.push_back({c, -g.theta / tau, tau, dcq::Role::IdentityArm, "I_Q", 0});
      sched.segments.push_back({gx, pulse, tau, dcq::Role::Generator, "X", 0});
      sched.segments.push_back({c, g.theta / (2 * tau), tau, dcq::Role::QHalf, "Q_half", 0});
      sched.segments.push_back({c, g.theta / (2 * tau), tau, dcq::Role::QHalf, "Q_half", 0});
      sched.id = "dcg_dephasing";
    }
  }
  write_file(dir / "sequence.txt", seq.to_text());
  write_file(dir / "sequence.json", seq.to_json() + "\n");
  write_file(dir / "schedule.json", sched.to_json(n) + "\n");
  std::printf("tokens=%zu duration_multiplier=%d segments=%zu\n", seq.tokens.size(),
              seq.total_duration_mult(), sched.segments.size());
  return 0;
}

int cmd_verify(const std::string& schedule_file, const std::string& subspace, int samples,
               std::uint64_t seed, double tol, int bath_dim, const std::string& out_dir) {
  std::ifstream is(schedule_file);
  if (!is) {
    std::fprintf(stderr, "cannot open schedule file: %s\n", schedule_file.c_str());
    return kExitUsage;
  }
  std::stringstream buf;
  buf << is.rdbuf();
  dcq::Schedule sched;
  int n = 0;
  try {
    json j = json::parse(buf.str());
    n = j.at("n_qubits").get<int>();
    sched = dcq::Schedule::from_json(buf.str(), n);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "schedule parse failure: %s\n", e.what());
    return kExitUsage;
  }
  dcq::JointSpace space(n, bath_dim);
  dcq::ErrorSubspace sub(subspace_kind(subspace), space);
  dcq::CancellationReport rep =
      dcq::verify_first_order_cancellation(space, sched, sub, samples, tol, seed);

  // Cross-check the first-order term against exact propagation on one draw.
  std::mt19937_64 rng(seed + 1);
  dcq::Mat h_e = sub.sample(rng, 0.25 / sched.total_duration());
  dcq::ErrorAction exact = dcq::exact_error_action(space, sched, h_e);
  dcq::ErrorAction first = dcq::first_order_magnus(space, sched, h_e);
  double gap = dcq::operator_norm(exact.phi - first.phi);
  double bound = dcq::second_order_bound(dcq::operator_norm(h_e), 0.0, sched.total_duration());
  bool bound_ok = gap <= bound * (1 + 1e-9) + 1e-12;

  json report = {{"schedule_id", sched.id}, {"subspace", subspace},
                 {"samples", rep.samples},  {"worst_residual", rep.worst_residual},
                 {"bound_ok", bound_ok},    {"pass", rep.pass && bound_ok}};
  std::string text = report.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "verify_report.json", text);
    write_snapshot(fs::path(out_dir),
                   {{"command", "verify"}, {"schedule", schedule_file}, {"subspace", subspace},
                    {"samples", samples}, {"seed", seed}, {"tol", tol}, {"bath_dim", bath_dim}});
  }
  return (rep.pass && bound_ok) ? 0 : kExitVerifyFail;
}

dcq::SweepConfig load_sweep_config(const json& j) {
  dcq::SweepConfig cfg;
  cfg.n = j.value("n", 2);
  cfg.n_bath = j.value("n_B", 4);
  cfg.gamma = j.value("Gamma", 1.0);
  cfg.hyperfine = j.value("A", 1.0);
  if (j.contains("tau_grid")) {
    cfg.taus = j.at("tau_grid").get<std::vector<double>>();
  } else if (j.contains("tau_min")) {
    double lo = j.at("tau_min").get<double>(), hi = j.at("tau_max").get<double>();
    int pts = j.at("tau_points").get<int>();
    for (int i = 0; i < pts; ++i)
      cfg.taus.push_back(lo * std::pow(hi / lo, pts == 1 ? 0.0 : double(i) / (pts - 1)));
  }
  if (j.contains("gate")) {
    const json& g = j.at("gate");
    std::string kind = g.value("kind", "heis");
    if (kind == "x") cfg.gate.kind = dcq::GateKind::X;
    else if (kind == "y") cfg.gate.kind = dcq::GateKind::Y;
    else if (kind == "heis") cfg.gate.kind = dcq::GateKind::Heisenberg;
    else throw std::invalid_argument("unknown gate kind: " + kind);
    if (g.contains("qubits")) {
      auto qs = g.at("qubits").get<std::vector<int>>();
      if (!qs.empty()) cfg.gate.qubit = qs[0];
      if (qs.size() > 1) cfg.gate.qubit2 = qs[1];
    }
    if (g.contains("theta")) {
      if (g.at("theta").is_string()) cfg.gate.theta = parse_angle(g.at("theta").get<std::string>());
      else cfg.gate.theta = g.at("theta").get<double>();
    }
  }
  if (j.contains("error_model")) cfg.error_model = parse_error_model(j.at("error_model"));
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.dimension_cap = j.value("dimension_cap", 1024);
  cfg.jobs = j.value("jobs", 1);
  return cfg;
}

int cmd_simulate(const std::string& config_file, const std::string& out_dir) {
  std::ifstream is(config_file);
  if (!is) {
    std::fprintf(stderr, "cannot open config: %s\n", config_file.c_str());
    return kExitUsage;
  }
  json j = json::parse(is);
  dcq::SweepConfig cfg = load_sweep_config(j);
  if (cfg.taus.size() != 1 || cfg.seeds.size() != 1) {
    std::fprintf(stderr, "simulate: config must declare exactly one tau and one seed\n");
    return kExitUsage;
  }
  dcq::SweepSummary s = dcq::sweep(cfg);
  const dcq::SweepPoint& p = s.points[0];
  json out = {{"tau", p.tau},     {"A", p.hyperfine}, {"Gamma", p.gamma},
              {"epsilon", p.epsilon}, {"seed", p.seed},   {"f_prim", p.f_prim},
              {"f_dcg", p.f_dcg}, {"r", p.r},         {"saturated", p.saturated}};
  std::string text = out.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "result.json", text);
    write_snapshot(fs::path(out_dir), j);
  }
  return 0;
}

int cmd_sweep(const std::string& config_file, const std::string& out_dir, int jobs_override) {
  std::ifstream is(config_file);
  if (!is) {
    std::fprintf(stderr, "cannot open config: %s\n", config_file.c_str());
    return kExitUsage;
  }
  json j = json::parse(is);
  dcq::SweepConfig cfg = load_sweep_config(j);
  if (jobs_override > 0) cfg.jobs = jobs_override;
  if (cfg.taus.empty() || cfg.seeds.empty()) {
    std::fprintf(stderr, "sweep: empty grid\n");
    return kExitUsage;
  }
  dcq::SweepSummary summary = dcq::sweep(cfg);
  std::string csv = dcq::sweep_csv(summary.points);
  std::string sj = dcq::sweep_summary_json(summary) + "\n";
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "sweep.csv", csv);
  write_file(fs::path(out_dir) / "summary.json", sj);
  write_snapshot(fs::path(out_dir), j);
  std::fputs(sj.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decoupling-group control schedule toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "synthesize sequences and schedules");
  std::string model = "linear", gate_spec, drift, synth_out = "out_synth";
  bool noop = false;
  int pair = 1, n = 2, chain_n = 4;
  double lambda = 1.0, tau = 1.0;
  synth->add_option("--model", model, "error model: linear | dephasing");
  synth->add_option("--gate", gate_spec, "gate spec kind:qubit[:qubit2]:angle");
  synth->add_flag("--noop", noop, "synthesize the identity-protecting sequence");
  synth->add_option("--drift", drift, "drift construction: heisenberg");
  synth->add_option("--pair", pair, "target bond index for drift synthesis");
  synth->add_option("--n", n, "system qubit count");
  synth->add_option("--chain-n", chain_n, "chain length for drift synthesis");
  synth->add_option("--lambda", lambda, "drift coupling strength");
  synth->add_option("--tau", tau, "segment duration");
  synth->add_option("--out", synth_out, "output directory");

  // verify
  auto* verify = app.add_subcommand("verify", "first-order cancellation suite");
  std::string schedule_file, subspace = "linear", verify_out;
  int samples = 20, bath_dim = 4;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  verify->add_option("--schedule", schedule_file, "schedule JSON file")->required();
  verify->add_option("--subspace", subspace, "error subspace: linear | dephasing | nn");
  verify->add_option("--samples", samples, "random draws");
  verify->add_option("--seed", seed, "RNG seed")->required();
  verify->add_option("--tol", tol, "residual tolerance");
  verify->add_option("--bath-dim", bath_dim, "bath dimension");
  verify->add_option("--out", verify_out, "output directory");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "single spin-bath run");
  std::string sim_config, sim_out;
  simulate->add_option("--config", sim_config, "JSON config")->required();
  simulate->add_option("--out", sim_out, "output directory");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "spin-bath parameter sweep");
  std::string sweep_config, sweep_out = "out_sweep";
  int jobs = 0;
  sweep_cmd->add_option("--config", sweep_config, "JSON config")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory");
  sweep_cmd->add_option("--jobs", jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed())
      return cmd_synth(model, gate_spec, noop, drift, pair, n, chain_n, lambda, tau, synth_out);
    if (verify->parsed())
      return cmd_verify(schedule_file, subspace, samples, seed, tol, bath_dim, verify_out);
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, sweep_out, jobs);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
