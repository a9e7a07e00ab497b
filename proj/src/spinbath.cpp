#include "dcq/spinbath.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace dcq {

namespace {

double uniform01(std::mt19937_64& rng) {
  return std::ldexp(static_cast<double>(rng() >> 11) + 0.5, -53);
}

double uniform_pm(std::mt19937_64& rng, double scale) {
  return scale * (2.0 * uniform01(rng) - 1.0);
}

double gaussian(std::mt19937_64& rng) {
  double u = uniform01(rng), v = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SpinBathModel sample_bath_model(int n, int n_bath, double gamma, double hyperfine,
                                std::uint64_t seed, int dimension_cap) {
  if (n < 1 || n_bath < 1) throw std::invalid_argument("sample_bath_model: need n >= 1, n_bath >= 1");
  if ((1 << n) * (1 << n_bath) > dimension_cap)
    throw std::invalid_argument("sample_bath_model: joint dimension exceeds cap");
  SpinBathModel m{n, n_bath, gamma, hyperfine, seed, {}, {}};
  std::mt19937_64 rng(seed);
  m.gamma_couplings.resize(static_cast<size_t>(n_bath));
  for (int i = 0; i < n_bath; ++i) {
    m.gamma_couplings[static_cast<size_t>(i)].assign(static_cast<size_t>(n_bath), 0.0);
    for (int j = i + 1; j < n_bath; ++j)
      m.gamma_couplings[static_cast<size_t>(i)][static_cast<size_t>(j)] = uniform_pm(rng, gamma);
  }
  m.hyperfine_couplings.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    m.hyperfine_couplings[static_cast<size_t>(i)].resize(static_cast<size_t>(n_bath));
    for (int k = 0; k < n_bath; ++k)
      m.hyperfine_couplings[static_cast<size_t>(i)][static_cast<size_t>(k)] =
          uniform_pm(rng, hyperfine);
  }
  return m;
}

std::pair<Mat, Mat> build_internal_hamiltonian(const SpinBathModel& model) {
  const JointSpace space = model.space();
  const int nb = model.n_bath;
  const int db = 1 << nb;
  // Spin vectors are sigma/2, so each alpha-alpha pair term carries 1/4.
  Mat h_bath = Mat::Zero(db, db);
  for (int i = 0; i < nb; ++i)
    for (int j = i + 1; j < nb; ++j) {
      double g = model.gamma_couplings[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (g == 0.0) continue;
      for (char a : {'X', 'Y', 'Z'}) {
        double w = (a == 'Z') ? -2.0 : 1.0;  // I.I - 3 Iz Iz
        Mat p = (PauliString::single(nb, i + 1, a) * PauliString::single(nb, j + 1, a)).matrix();
        h_bath += (g * w / 4.0) * p.real().cast<cplx>();
      }
    }
  Mat h_b = embed_bath(space, h_bath);

  Mat h_sb = Mat::Zero(space.dim(), space.dim());
  for (int i = 0; i < model.n; ++i)
    for (int k = 0; k < nb; ++k) {
      double a_ik = model.hyperfine_couplings[static_cast<size_t>(i)][static_cast<size_t>(k)];
      if (a_ik == 0.0) continue;
      for (char a : {'X', 'Y', 'Z'})
        h_sb += (a_ik / 4.0) * kron(PauliString::single(model.n, i + 1, a).matrix(),
                                    PauliString::single(nb, k + 1, a).matrix());
    }
  return {h_b, h_sb};
}

Mat gate_generator(int n, const GateSpec& gate) {
  switch (gate.kind) {
    case GateKind::X:
      return PauliString::single(n, gate.qubit, 'X').matrix();
    case GateKind::Y:
      return PauliString::single(n, gate.qubit, 'Y').matrix();
    case GateKind::Heisenberg: {
      Mat c = Mat::Zero(1 << n, 1 << n);
      for (char a : {'X', 'Y', 'Z'})
        c += (PauliString::single(n, gate.qubit, a) * PauliString::single(n, gate.qubit2, a))
                 .matrix();
      return c;
    }
  }
  throw std::invalid_argument("gate_generator: unknown kind");
}

Mat gate_target(int n, const GateSpec& gate) {
  return unitary_exponential(gate.theta * gate_generator(n, gate), 1.0);
}

Schedule primitive_schedule(int n, const GateSpec& gate, double tau) {
  if (tau <= 0) throw std::invalid_argument("primitive_schedule: tau must be positive");
  Schedule s;
  s.id = "primitive";
  s.segments.push_back({gate_generator(n, gate), gate.theta / tau, tau, Role::Q, "Q", 0});
  return s;
}

Schedule dcg_schedule(int n, const GateSpec& gate, double tau) {
  if (tau <= 0) throw std::invalid_argument("dcg_schedule: tau must be positive");
  if (gate.qubit < 1 || gate.qubit > n ||
      (gate.kind == GateKind::Heisenberg && (gate.qubit2 < 1 || gate.qubit2 > n)))
    throw std::invalid_argument("dcg_schedule: gate qubit out of range");
  const int dim = 1 << n;
  Mat cx = Mat::Zero(dim, dim), cy = Mat::Zero(dim, dim);
  for (int i = 1; i <= n; ++i) {
    cx += PauliString::single(n, i, 'X').matrix();
    cy += PauliString::single(n, i, 'Y').matrix();
  }
  Mat c = gate_generator(n, gate);
  const double pulse = M_PI / (2.0 * tau);
  Schedule s;
  s.id = "dcg";
  auto seg = [&](const Mat& g, double amp, Role role, const std::string& token) {
    s.segments.push_back({g, amp, tau, role, token, 0});
  };
  for (int i = 1; i <= 16; ++i) {
    switch (i) {
      case 1: case 7: case 12: case 14:
        seg(cx, pulse, Role::Generator, "X");
        break;
      case 4: case 10: case 11: case 13:
        seg(cy, pulse, Role::Generator, "Y");
        break;
      case 2: case 5: case 8:
        seg(c, gate.theta / tau, Role::IdentityArm, "I_Q");
        break;
      case 3: case 6: case 9:
        seg(c, -gate.theta / tau, Role::IdentityArm, "I_Q");
        break;
      default:  // 15, 16
        seg(c, gate.theta / (2.0 * tau), Role::QHalf, "Q_half");
        break;
    }
  }
  return s;
}

Schedule apply_control_error(const Schedule& schedule, const ControlErrorModel& err) {
  Schedule out = schedule;
  switch (err.kind) {
    case ControlErrorModel::Kind::None:
      break;
    case ControlErrorModel::Kind::FixedSystematic:
      for (auto& s : out.segments) s.amplitude *= 1.0 + err.epsilon;
      break;
    case ControlErrorModel::Kind::ScaledSystematic:
      if (err.h_dev.size() == 0)
        throw std::invalid_argument("apply_control_error: scaled kind requires h_dev");
      for (auto& s : out.segments) {
        s.generator = Mat(s.amplitude * s.generator + err.epsilon * err.h_dev);
        s.amplitude = 1.0;
      }
      break;
    case ControlErrorModel::Kind::RandomOverrotation: {
      std::mt19937_64 rng(err.seed);
      for (auto& s : out.segments)
        s.amplitude *= 1.0 + err.epsilon + err.width * gaussian(rng);
      break;
    }
  }
  return out;
}

Vec reference_input_state(int n) {
  const int dim = 1 << n;
  Vec psi = Vec::Zero(dim);
  const double a = 1.0 / std::sqrt(2.0);
  psi[0] = a;
  // The partner basis state flips qubit 2 (qubit 1 for n = 1); qubit 1 is the
  // most significant bit, so qubit i carries weight 2^(n-i).
  psi[n >= 2 ? (1 << (n - 2)) : 1] = a;
  return psi;
}

Mat simulate(const JointSpace& space, const Schedule& schedule, const Mat& h_internal,
             const Vec& psi_in) {
  const int dim = space.dim();
  if (h_internal.rows() != dim) throw std::invalid_argument("simulate: H_int dimension mismatch");
  if (psi_in.size() != space.system_dim())
    throw std::invalid_argument("simulate: input state dimension mismatch");
  Mat u = Mat::Identity(dim, dim);
  for (const auto& seg : schedule.segments) {
    if (seg.duration <= 0) throw std::invalid_argument("simulate: non-positive segment duration");
    u = unitary_exponential(embed_system(space, seg.hamiltonian()) + h_internal, seg.duration) * u;
  }
  double unitarity = (u.adjoint() * u - Mat::Identity(dim, dim)).norm();
  if (unitarity > 1e-9) throw std::runtime_error("simulate: propagator unitarity residual too large");
  Mat rho_s = psi_in * psi_in.adjoint();
  Mat rho_b = Mat::Identity(space.bath_dim(), space.bath_dim()) / space.bath_dim();
  Mat rho = u * kron(rho_s, rho_b) * u.adjoint();
  return trace_out_bath(space, rho);
}

double gate_fidelity(const Mat& rho_actual, const Mat& target, const Vec& psi_in) {
  Vec out = target * psi_in;
  return uhlmann_fidelity(rho_actual, out * out.adjoint());
}

RatioResult improvement_ratio(double f_prim, double f_dcg, double floor) {
  double denom = 1.0 - f_dcg;
  if (denom < floor) return {(1.0 - f_prim) / floor, true};
  return {(1.0 - f_prim) / denom, false};
}

namespace {

SweepPoint run_point(const SweepConfig& cfg, double tau, std::uint64_t seed) {
  SpinBathModel model =
      sample_bath_model(cfg.n, cfg.n_bath, cfg.gamma, cfg.hyperfine, seed, cfg.dimension_cap);
  auto [h_b, h_sb] = build_internal_hamiltonian(model);
  Mat h_int = h_b + h_sb;
  JointSpace space = model.space();
  Vec psi = reference_input_state(cfg.n);
  Mat target = gate_target(cfg.n, cfg.gate);

  Schedule prim = apply_control_error(primitive_schedule(cfg.n, cfg.gate, tau), cfg.error_model);
  Schedule corr = apply_control_error(dcg_schedule(cfg.n, cfg.gate, tau), cfg.error_model);
  double f_prim = gate_fidelity(simulate(space, prim, h_int, psi), target, psi);
  double f_dcg = gate_fidelity(simulate(space, corr, h_int, psi), target, psi);
  RatioResult r = improvement_ratio(f_prim, f_dcg);
  return {tau, cfg.hyperfine, cfg.gamma, cfg.error_model.epsilon,
          seed, f_prim, f_dcg, r.value, r.saturated};
}

}  // namespace

SweepSummary sweep(const SweepConfig& config) {
  std::vector<std::pair<double, std::uint64_t>> grid;
  for (double tau : config.taus)
    for (std::uint64_t seed : config.seeds) grid.emplace_back(tau, seed);

  SweepSummary out;
  out.points.resize(grid.size());
  int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    for (size_t i = 0; i < grid.size(); ++i)
      out.points[i] = run_point(config, grid[i].first, grid[i].second);
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
          out.points[i] = run_point(config, grid[i].first, grid[i].second);
      });
    for (auto& t : pool) t.join();
  }

  // Per-tau mean log r over usable seeds (non-saturated, DCG infidelity above
  // the fit floor).
  std::vector<double> taus_sorted = config.taus;
  std::sort(taus_sorted.begin(), taus_sorted.end());
  std::vector<double> lt, lr;
  for (double tau : taus_sorted) {
    double acc = 0;
    int cnt = 0;
    for (const auto& p : out.points)
      if (p.tau == tau && !p.saturated && (1.0 - p.f_dcg) >= config.fit_infidelity_floor &&
          p.r > 0) {
        acc += std::log(p.r);
        ++cnt;
      }
    if (cnt > 0) {
      lt.push_back(std::log(tau));
      lr.push_back(acc / cnt);
    }
  }

  // tau*: first descending crossing of r = 1 while scanning tau upward.
  for (size_t i = 0; i + 1 < lt.size(); ++i) {
    if (lr[i] >= 0 && lr[i + 1] < 0) {
      double t = lr[i] / (lr[i] - lr[i + 1]);
      out.tau_star = std::exp(lt[i] + t * (lt[i + 1] - lt[i]));
      out.has_tau_star = true;
      break;
    }
  }

  // Asymptotic window: the largest low-tau prefix whose local slopes stay
  // within slope_window_tol of the smallest-tau slope.
  if (lt.size() >= 2) {
    auto local = [&](size_t i) { return (lr[i + 1] - lr[i]) / (lt[i + 1] - lt[i]); };
    double s0 = local(0);
    size_t k = 1;
    while (k < lt.size() - 1 &&
           std::abs(local(k) - s0) <= config.slope_window_tol * std::abs(s0))
      ++k;
    size_t m = k + 1;  // points in the window
    out.window_size = static_cast<int>(m);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
      sx += lt[i]; sy += lr[i]; sxx += lt[i] * lt[i]; sxy += lt[i] * lr[i];
    }
    double denom = m * sxx - sx * sx;
    out.slope = (m * sxy - sx * sy) / denom;
    double intercept = (sy - out.slope * sx) / m;
    if (m > 2) {
      double ssr = 0;
      for (size_t i = 0; i < m; ++i) {
        double e = lr[i] - (out.slope * lt[i] + intercept);
        ssr += e * e;
      }
      out.slope_stderr = std::sqrt(ssr / (m - 2) / (sxx - sx * sx / m));
    }
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::string csv = "tau,A,Gamma,epsilon,seed,f_prim,f_dcg,r,saturated\n";
  for (const auto& p : points) {
    csv += fmt17(p.tau) + "," + fmt17(p.hyperfine) + "," + fmt17(p.gamma) + "," +
           fmt17(p.epsilon) + "," + std::to_string(p.seed) + "," + fmt17(p.f_prim) + "," +
           fmt17(p.f_dcg) + "," + fmt17(p.r) + "," + (p.saturated ? "1" : "0") + "\n";
  }
  return csv;
}

std::string sweep_summary_json(const SweepSummary& summary) {
  nlohmann::json j = {{"slope", summary.slope},
                      {"slope_stderr", summary.slope_stderr},
                      {"window_size", summary.window_size},
                      {"tau_star", nullptr}};
  if (summary.has_tau_star) j["tau_star"] = summary.tau_star;
  return j.dump(2);
}

Mat rotating_frame_transform(const JointSpace& space, const Mat& h_e, double omega_c, double t) {
  if (omega_c <= 0) throw std::invalid_argument("rotating_frame_transform: need Omega_c > 0");
  const int n = space.n_qubits();
  Mat z_sum = Mat::Zero(1 << n, 1 << n);
  for (int i = 1; i <= n; ++i) z_sum += PauliString::single(n, i, 'Z').matrix();
  Mat r = embed_system(space, unitary_exponential(omega_c * z_sum, t));
  return r.adjoint() * h_e * r;
}

Mat time_average_over_period(const JointSpace& space, const Mat& h_e, double omega_c) {
  // Harmonics run at even multiples of Omega_c up to 2 n Omega_c, so a uniform
  // grid with more than n points over the period T = pi/Omega_c is exact.
  const int n_samples = 4 * space.n_qubits() + 1;
  const double period = M_PI / omega_c;
  Mat acc = Mat::Zero(h_e.rows(), h_e.cols());
  for (int j = 0; j < n_samples; ++j)
    acc += rotating_frame_transform(space, h_e, omega_c, j * period / n_samples);
  return acc / n_samples;
}

}  // namespace dcq
