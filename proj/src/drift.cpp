#include "dcq/drift.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace dcq {

Mat pair_drift_term(int n, int k, double lambda) {
  if (k < 1 || k >= n) throw std::invalid_argument("pair_drift_term: bond index out of range");
  const int dim = 1 << n;
  Mat h = Mat::Zero(dim, dim);
  for (char a : {'X', 'Y', 'Z'})
    h += (lambda / 4.0) *
         (PauliString::single(n, k, a) * PauliString::single(n, k + 1, a)).matrix();
  return h;
}

Mat chain_drift_hamiltonian(const ChainModel& chain) {
  const int dim = 1 << chain.n;
  Mat h = Mat::Zero(dim, dim);
  for (int i = 1; i < chain.n; ++i) h += pair_drift_term(chain.n, i, chain.lambda);
  return h;
}

ChainGroup chain_decoupling_group(int n, int k, ChainGroupVariant variant) {
  if (n < 3) throw std::invalid_argument("chain_decoupling_group: need n >= 3");
  bool pair = variant == ChainGroupVariant::PairGate;
  if (k < 1 || k > (pair ? n - 1 : n))
    throw std::invalid_argument("chain_decoupling_group: invalid target index");
  ChainGroup cg;
  for (int j = 1; j <= n; ++j) {
    if (pair && (j == k || j == k + 1)) continue;
    (j % 2 == 1 ? cg.odd_set : cg.even_set).push_back(j);
  }
  cg.group = DecouplingGroup::z2_power(4);

  auto gen_string = [&](char odd_letter, char even_letter) {
    std::string labels(static_cast<size_t>(n), 'I');
    for (int j : cg.odd_set) labels[static_cast<size_t>(j - 1)] = odd_letter;
    for (int j : cg.even_set) labels[static_cast<size_t>(j - 1)] = even_letter;
    return PauliString(labels);
  };
  std::vector<PauliString> gens = {gen_string('X', 'X'), gen_string('X', 'Y'),
                                   gen_string('Y', 'X'), gen_string('Y', 'Y')};
  cg.rep.generator_names = {"XoXe", "XoYe", "YoXe", "YoYe"};
  cg.rep.elements.resize(16, PauliString::identity(n));
  for (int b = 0; b < 16; ++b) {
    PauliString e = PauliString::identity(n);
    for (int j = 0; j < 4; ++j)
      if ((b >> j) & 1) e = gens[static_cast<size_t>(j)] * e;
    cg.rep.elements[static_cast<size_t>(b)] = e;
  }
  return cg;
}

namespace {

// Generator pulse: the odd set sweeps an angle pi while the even set sweeps
// 3pi (both are pi-pulses projectively). The 1:3 frequency ratio makes the
// cos*cos cross-integrals over a segment vanish, so the toggled ZZ bond
// components — which commute with the whole group and would otherwise survive
// the group average — integrate to zero.
Mat chain_pulse_generator(int n, const ChainGroup& cg, int gen_index) {
  static const char odd_letter[4] = {'X', 'X', 'Y', 'Y'};
  static const char even_letter[4] = {'X', 'Y', 'X', 'Y'};
  const int dim = 1 << n;
  Mat g = Mat::Zero(dim, dim);
  for (int j : cg.odd_set) g += PauliString::single(n, j, odd_letter[gen_index]).matrix();
  for (int j : cg.even_set) g += 3.0 * PauliString::single(n, j, even_letter[gen_index]).matrix();
  return g;
}

// Depth-first search for an Eulerian cycle on Z2^4 whose generator sequence,
// projected onto one letter class (class_bit(j) per generator j), repeats the
// same length-8 pattern in every 8-segment block.
bool periodic_cycle_dfs(int i, int v, const int* pattern, int (*class_bit)(int),
                        std::array<std::array<char, 4>, 16>& used, std::vector<int>& seq) {
  if (i == 64) return v == 0;
  for (int j = 0; j < 4; ++j) {
    if (class_bit(j) != pattern[i % 8]) continue;
    if (used[static_cast<size_t>(v)][static_cast<size_t>(j)]) continue;
    used[static_cast<size_t>(v)][static_cast<size_t>(j)] = 1;
    seq.push_back(j);
    if (periodic_cycle_dfs(i + 1, v ^ (1 << j), pattern, class_bit, used, seq)) return true;
    used[static_cast<size_t>(v)][static_cast<size_t>(j)] = 0;
    seq.pop_back();
  }
  return false;
}

std::vector<int> periodic_pair_cycle(bool constrain_odd) {
  // Balanced block pattern: four of each letter, and the constrained-class
  // frame visits all four quotient elements within each letter class.
  static const int pattern[8] = {0, 1, 1, 0, 1, 0, 0, 1};
  std::array<std::array<char, 4>, 16> used{};
  std::vector<int> seq;
  seq.reserve(64);
  int (*cls)(int) = constrain_odd ? +[](int j) { return j < 2 ? 0 : 1; }
                                  : +[](int j) { return j % 2; };
  if (!periodic_cycle_dfs(0, 0, pattern, cls, used, seq))
    throw std::logic_error("periodic_pair_cycle: no cycle found");
  return seq;
}

}  // namespace

std::vector<int> chain_pair_cycle(const ChainModel& chain, int k) {
  // The spectator qubit adjacent to the active pair (k+2, or k-1 at the chain
  // end) sees both the layer-1 toggling and the slow layer-2 pulse tail across
  // the boundary bond. Locking the toggling pattern on that qubit's parity
  // class to the layer-2 block grid makes those boundary contributions cancel
  // across the eight blocks, because the block frames traverse the whole pair
  // group within each pulse-axis class.
  int outer = (k + 2 <= chain.n) ? k + 2 : k - 1;
  return periodic_pair_cycle(outer % 2 == 1);
}

namespace {

// The pulse realizations fix the closed product only up to a global phase;
// fold the residual phase into the last segment as an identity offset.
void absorb_global_phase(Schedule& s, const Mat& target) {
  if (s.segments.empty()) return;
  Mat u = s.closed_propagator();
  cplx z = (target.adjoint() * u).trace();
  if (std::abs(z) < 0.5 * target.rows())
    throw std::runtime_error("absorb_global_phase: closed product is not the target gate");
  double phi = std::arg(z);
  if (std::abs(phi) < 1e-12) return;
  ControlSegment& last = s.segments.back();
  last.generator = Mat(last.amplitude * last.generator +
                       (phi / last.duration) * Mat::Identity(target.rows(), target.cols()));
  last.amplitude = 1.0;
}

}  // namespace

Schedule DriftSchedule::flatten() const {
  const double total = layer1.total_duration();
  if (std::abs(layer2.total_duration() - total) > 1e-12 * std::max(1.0, total))
    throw std::invalid_argument("DriftSchedule::flatten: layer durations differ");
  std::vector<double> cuts = {0.0};
  for (const Schedule* l : {&layer1, &layer2}) {
    double t = 0;
    for (const auto& seg : l->segments) {
      t += seg.duration;
      cuts.push_back(t);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             cuts.end());

  auto segment_at = [](const Schedule& l, double t) -> const ControlSegment& {
    double acc = 0;
    for (const auto& seg : l.segments) {
      acc += seg.duration;
      if (t < acc - 1e-12) return seg;
    }
    return l.segments.back();
  };

  Schedule out;
  out.id = layer1.id + "+" + layer2.id;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const ControlSegment& s1 = segment_at(layer1, mid);
    const ControlSegment& s2 = segment_at(layer2, mid);
    ControlSegment merged;
    merged.generator = s1.hamiltonian() + s2.hamiltonian();
    merged.amplitude = 1.0;
    merged.duration = cuts[i + 1] - cuts[i];
    merged.role = Role::Free;
    merged.token = s1.token + "+" + s2.token;
    merged.layer = 0;
    out.segments.push_back(std::move(merged));
  }
  return out;
}

DriftSchedule two_qubit_drift_dcg(const ChainModel& chain, int k, double tau) {
  if (chain.n < 4) throw std::invalid_argument("two_qubit_drift_dcg: need n >= 4");
  if (tau <= 0) throw std::invalid_argument("two_qubit_drift_dcg: tau must be positive");
  const int n = chain.n;
  ChainGroup cg = chain_decoupling_group(n, k, ChainGroupVariant::PairGate);
  std::vector<int> cycle = chain_pair_cycle(chain, k);

  DriftSchedule out;
  out.layer1.id = "drift_pair_layer1";
  const double pulse = M_PI / (2.0 * tau);
  for (int j : cycle)
    out.layer1.segments.push_back({chain_pulse_generator(n, cg, j), pulse, tau, Role::Generator,
                                   cg.rep.generator_names[static_cast<size_t>(j)], 1});
  absorb_global_phase(out.layer1, Mat::Identity(1 << n, 1 << n));

  out.layer2.id = "drift_pair_layer2";
  Mat bond = pair_drift_term(n, k, chain.lambda);
  Mat px = PauliString::single(n, k, 'X').matrix() + PauliString::single(n, k + 1, 'X').matrix();
  Mat py = PauliString::single(n, k, 'Y').matrix() + PauliString::single(n, k + 1, 'Y').matrix();
  const double amp2 = M_PI / (16.0 * tau);
  for (int l = 1; l <= 8; ++l) {
    bool x = l == 1 || l == 3 || l == 6 || l == 8;
    out.layer2.segments.push_back({Mat(amp2 * (x ? px : py) + bond), 1.0, 8.0 * tau,
                                   Role::Generator, x ? "X_pair" : "Y_pair", 2});
  }
  return out;
}

Mat two_qubit_drift_target(const ChainModel& chain, int k, double tau) {
  return unitary_exponential(pair_drift_term(chain.n, k, chain.lambda), 64.0 * tau);
}

Schedule single_qubit_drift_dcg(const ChainModel& chain, int k, double theta, char axis,
                                double tau) {
  if (tau <= 0) throw std::invalid_argument("single_qubit_drift_dcg: tau must be positive");
  if (axis != 'X' && axis != 'Y')
    throw std::invalid_argument("single_qubit_drift_dcg: axis must be X or Y");
  const int n = chain.n;
  if (k < 1 || k > n) throw std::invalid_argument("single_qubit_drift_dcg: qubit out of range");
  ChainGroup cg = chain_decoupling_group(n, k, ChainGroupVariant::SingleQubitGate);
  SequenceSpec spec = synthesize_dcg(cg.group, cg.rep, "Q");

  Mat c = PauliString::single(n, k, axis).matrix();
  const double pulse = M_PI / (2.0 * tau);
  Schedule out;
  out.id = "drift_single";
  for (const auto& tok : spec.tokens) {
    switch (tok.role) {
      case Role::Generator:
        out.segments.push_back({chain_pulse_generator(n, cg, tok.generator_index), pulse, tau,
                                Role::Generator, tok.name, 0});
        break;
      case Role::IdentityArm:
        out.segments.push_back({c, theta / tau, tau, Role::IdentityArm, tok.name, 0});
        out.segments.push_back({c, -theta / tau, tau, Role::IdentityArm, tok.name, 0});
        break;
      case Role::QHalf:
        out.segments.push_back({c, theta / (2.0 * tau), tau, Role::QHalf, tok.name, 0});
        out.segments.push_back({c, theta / (2.0 * tau), tau, Role::QHalf, tok.name, 0});
        break;
      default:
        throw std::logic_error("single_qubit_drift_dcg: unexpected token role");
    }
  }
  absorb_global_phase(out, unitary_exponential(theta * c, 1.0));
  return out;
}

AngleInversion tau_for_angle(double theta, double lambda, double tau_min) {
  if (lambda == 0) throw std::invalid_argument("tau_for_angle: lambda must be nonzero");
  double tau = theta / (64.0 * lambda);
  return {tau, tau < tau_min};
}

}  // namespace dcq
