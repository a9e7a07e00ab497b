#include "dcq/schedule.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dcq {

double Schedule::total_duration() const {
  double t = 0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

Mat Schedule::closed_propagator_prefix(int k) const {
  if (segments.empty() || k == 0) return Mat();
  Mat u = Mat::Identity(segments[0].generator.rows(), segments[0].generator.cols());
  for (int i = 0; i < k; ++i)
    u = unitary_exponential(segments[i].hamiltonian(), segments[i].duration) * u;
  return u;
}

Mat Schedule::closed_propagator() const {
  return closed_propagator_prefix(static_cast<int>(segments.size()));
}

namespace {

const char* role_name(Role r) {
  switch (r) {
    case Role::Generator: return "generator";
    case Role::IdentityArm: return "identity_arm";
    case Role::QHalf: return "q_half";
    case Role::Q: return "q";
    case Role::Free: return "free";
  }
  return "?";
}

Role role_from(const std::string& s) {
  if (s == "generator") return Role::Generator;
  if (s == "identity_arm") return Role::IdentityArm;
  if (s == "q_half") return Role::QHalf;
  if (s == "q") return Role::Q;
  if (s == "free") return Role::Free;
  throw std::invalid_argument("unknown role: " + s);
}

// Hermitian system operators round-trip through their real Pauli expansion.
nlohmann::json pauli_expand(const Mat& m, int n) {
  nlohmann::json terms = nlohmann::json::array();
  const int dim = 1 << n;
  std::string labels(static_cast<size_t>(n), 'I');
  const char alpha[4] = {'I', 'X', 'Y', 'Z'};
  for (int code = 0; code < (1 << (2 * n)); ++code) {
    for (int q = 0; q < n; ++q) labels[static_cast<size_t>(q)] = alpha[(code >> (2 * q)) & 3];
    PauliString p(labels);
    cplx c = (p.matrix().adjoint() * m).trace() / static_cast<double>(dim);
    if (std::abs(c) > 1e-13)
      terms.push_back({{"pauli", labels}, {"weight", c.real()}});
  }
  return terms;
}

Mat pauli_assemble(const nlohmann::json& terms, int n) {
  const int dim = 1 << n;
  Mat m = Mat::Zero(dim, dim);
  for (const auto& t : terms)
    m += t.at("weight").get<double>() * PauliString(t.at("pauli").get<std::string>()).matrix();
  return m;
}

}  // namespace

std::string Schedule::to_json(int n_qubits) const {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : segments)
    segs.push_back({{"role", role_name(s.role)},
                    {"token", s.token},
                    {"layer", s.layer},
                    {"amplitude", s.amplitude},
                    {"duration", s.duration},
                    {"generator", pauli_expand(s.generator, n_qubits)}});
  nlohmann::json j = {{"id", id}, {"n_qubits", n_qubits}, {"segments", segs}};
  return j.dump(2);
}

Schedule Schedule::from_json(const std::string& text, int n_qubits) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("n_qubits")) n_qubits = j.at("n_qubits").get<int>();
  Schedule sched;
  sched.id = j.value("id", "");
  for (const auto& js : j.at("segments")) {
    ControlSegment s;
    s.role = role_from(js.at("role").get<std::string>());
    s.token = js.value("token", "");
    s.layer = js.value("layer", 0);
    s.amplitude = js.at("amplitude").get<double>();
    s.duration = js.at("duration").get<double>();
    s.generator = pauli_assemble(js.at("generator"), n_qubits);
    sched.segments.push_back(std::move(s));
  }
  return sched;
}

ControlProfile reverse_conjugate_profile(const ControlProfile& p) {
  ControlProfile out;
  out.id = p.id + "_reversed";
  for (auto it = p.segments.rbegin(); it != p.segments.rend(); ++it) {
    ControlSegment s = *it;
    s.amplitude = -s.amplitude;
    out.segments.push_back(std::move(s));
  }
  return out;
}

ControlProfile stretch_profile(const ControlProfile& p, double factor) {
  if (factor <= 0) throw std::invalid_argument("stretch_profile: factor must be positive");
  ControlProfile out = p;
  out.id = p.id + "_stretched";
  for (auto& s : out.segments) {
    s.amplitude /= factor;
    s.duration *= factor;
  }
  return out;
}

BalancePair make_balance_pair(const ControlProfile& p) {
  BalancePair pair;
  pair.identity_profile = p;
  pair.identity_profile.id = p.id + "_IQ";
  ControlProfile rev = reverse_conjugate_profile(p);
  for (auto& s : rev.segments) pair.identity_profile.segments.push_back(s);
  pair.gate_profile = stretch_profile(p, 2.0);
  pair.gate_profile.id = p.id + "_half";
  for (auto& s : pair.gate_profile.segments) s.role = Role::QHalf;
  return pair;
}

}  // namespace dcq
