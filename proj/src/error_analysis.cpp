#include "dcq/error_analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace dcq {

Mat hermitian_log_unitary(const Mat& w) {
  // W is normal; the Schur form of a normal matrix is diagonal up to roundoff.
  Eigen::ComplexSchur<Mat> schur(w);
  const Mat& q = schur.matrixU();
  Mat phi = Mat::Zero(w.rows(), w.cols());
  Eigen::VectorXd phases(w.rows());
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    cplx lambda = schur.matrixT()(i, i);
    double theta = -std::arg(lambda);  // e^{-i theta} = lambda
    if (std::abs(theta) > M_PI - 1e-6)
      throw std::runtime_error("hermitian_log_unitary: eigenphase at the branch cut");
    phases[i] = theta;
  }
  phi = q * phases.asDiagonal() * q.adjoint();
  return 0.5 * (phi + phi.adjoint());
}

ErrorAction exact_error_action(const JointSpace& space, const Schedule& schedule, const Mat& h_e) {
  const int dim = space.dim();
  if (h_e.rows() != dim) throw std::invalid_argument("exact_error_action: H_e dimension mismatch");
  Mat u = Mat::Identity(dim, dim);
  Mat u_gate = Mat::Identity(space.system_dim(), space.system_dim());
  for (const auto& seg : schedule.segments) {
    Mat h_sys = seg.hamiltonian();
    u = unitary_exponential(embed_system(space, h_sys) + h_e, seg.duration) * u;
    u_gate = unitary_exponential(h_sys, seg.duration) * u_gate;
  }
  Mat w = embed_system(space, u_gate).adjoint() * u;
  ErrorAction out;
  out.phi = hermitian_log_unitary(w);
  out.convergence_warning = operator_norm(h_e) * schedule.total_duration() >= M_PI;
  return out;
}

ErrorAction first_order_magnus(const JointSpace& space, const Schedule& schedule, const Mat& h_e) {
  const int db = space.bath_dim();
  Mat phi = Mat::Zero(space.dim(), space.dim());
  Mat prefix = Mat::Identity(space.system_dim(), space.system_dim());
  for (const auto& seg : schedule.segments) {
    HermitianEig eig(seg.hamiltonian());
    const Eigen::VectorXd& ev = eig.eigenvalues();
    Mat v_joint = embed_system(space, eig.eigenvectors());
    Mat w = v_joint.adjoint() * h_e * v_joint;
    // Entrywise integral of e^{i(l_r - l_c)s} over the segment; the sin-based
    // form of e^{i theta} - 1 avoids cancellation at small phases.
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        double omega = ev[r / db] - ev[c / db];
        double theta = omega * seg.duration;
        cplx g;
        if (std::abs(theta) < 1e-7) {
          g = seg.duration * cplx(1.0 - theta * theta / 6.0, 0.5 * theta);
        } else {
          double half = std::sin(0.5 * theta);
          g = cplx(-2.0 * half * half, std::sin(theta)) / cplx(0, omega);
        }
        w(r, c) *= g;
      }
    }
    Mat pre = embed_system(space, prefix);
    phi += pre.adjoint() * v_joint * w * v_joint.adjoint() * pre;
    prefix = eig.exp_it(seg.duration) * prefix;
  }
  ErrorAction out;
  out.phi = 0.5 * (phi + phi.adjoint());
  out.convergence_warning = operator_norm(h_e) * schedule.total_duration() >= M_PI;
  return out;
}

ErrorAction compose_gate_errors(const JointSpace& space,
                                const std::vector<std::pair<Mat, Mat>>& gates_and_phis) {
  Mat phi = Mat::Zero(space.dim(), space.dim());
  Mat partial = Mat::Identity(space.system_dim(), space.system_dim());
  double max_phi_norm = 0.0;
  for (const auto& [q, phi_q] : gates_and_phis) {
    Mat p_joint = embed_system(space, partial);
    phi += p_joint.adjoint() * phi_q * p_joint;
    partial = q * partial;
    max_phi_norm = std::max(max_phi_norm, operator_norm(phi_q));
  }
  ErrorAction out;
  out.phi = 0.5 * (phi + phi.adjoint());
  out.convergence_warning =
      static_cast<double>(gates_and_phis.size()) * max_phi_norm >= M_PI;
  return out;
}

double second_order_bound(double h_sb_norm, double h_b_norm, double t) {
  if (h_sb_norm < 0 || h_b_norm < 0) throw std::invalid_argument("second_order_bound: negative norm");
  return (t * t / 4.0) * (2.0 * h_b_norm * h_sb_norm + h_sb_norm * h_sb_norm);
}

Mat random_hermitian(std::mt19937_64& rng, int dim) {
  // Explicit Box-Muller on raw 53-bit draws keeps results identical across
  // standard library implementations.
  auto uniform01 = [&rng]() { return std::ldexp(static_cast<double>(rng() >> 11) + 0.5, -53); };
  auto gauss = [&]() {
    double u = uniform01(), v = uniform01();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  };
  Mat m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = cplx(gauss(), gauss());
  m = 0.5 * (m + Mat(m.adjoint())).eval();
  double nrm = operator_norm(m);
  if (nrm > 0) m /= nrm;
  return m;
}

std::vector<PauliString> ErrorSubspace::generator_patterns() const {
  const int n = space_.n_qubits();
  std::vector<PauliString> out;
  switch (kind_) {
    case Kind::Dephasing:
      for (int i = 1; i <= n; ++i) out.push_back(PauliString::single(n, i, 'Z'));
      break;
    case Kind::Linear:
      for (int i = 1; i <= n; ++i)
        for (char a : {'X', 'Y', 'Z'}) out.push_back(PauliString::single(n, i, a));
      break;
    case Kind::NearestNeighborBilinear:
      for (int i = 1; i <= n; ++i)
        for (char a : {'X', 'Y', 'Z'}) out.push_back(PauliString::single(n, i, a));
      for (int i = 1; i < n; ++i)
        for (char a : {'X', 'Y', 'Z'})
          for (char b : {'X', 'Y', 'Z'}) {
            PauliString p = PauliString::single(n, i, a) * PauliString::single(n, i + 1, b);
            out.push_back(p);
          }
      break;
  }
  return out;
}

Mat ErrorSubspace::sample(std::mt19937_64& rng, double magnitude) const {
  Mat h = Mat::Zero(space_.dim(), space_.dim());
  for (const auto& pattern : generator_patterns()) {
    Mat bath = random_hermitian(rng, space_.bath_dim());
    h += kron(pattern.matrix(), bath);
  }
  double nrm = operator_norm(h);
  if (nrm > 0) h *= magnitude / nrm;
  return h;
}

NogoReport nogo_witness(const JointSpace& space, const std::vector<Mat>& sequence,
                        const std::vector<Mat>& probes, double tol) {
  if (sequence.empty()) throw std::invalid_argument("nogo_witness: empty sequence");
  NogoReport rep{true, true, true, 0, 0, 0};
  Mat a = Mat::Identity(space.system_dim(), space.system_dim());
  std::vector<Mat> partials = {a};  // P_0 = I
  for (const auto& q : sequence) {
    a = q * a;
    partials.push_back(a);
  }
  Mat a_joint = embed_system(space, a);
  for (const auto& x : probes) {
    Mat sum1 = Mat::Zero(space.dim(), space.dim());
    Mat sum2 = Mat::Zero(space.dim(), space.dim());
    for (size_t i = 1; i <= sequence.size(); ++i) {
      Mat pm1 = embed_system(space, partials[i - 1]);
      Mat pi = embed_system(space, partials[i]);
      sum1 += pm1.adjoint() * x * pm1;
      sum2 += pi.adjoint() * x * pi;
    }
    double scale = std::max(operator_norm(x), 1e-300);
    double r1 = operator_norm(mod_b_reduce(space, sum1)) / scale;
    double r2 = operator_norm(mod_b_reduce(space, sum2)) / scale;
    double ra = operator_norm(mod_b_reduce(space, a_joint.adjoint() * x * a_joint - x)) / scale;
    rep.worst_e1 = std::max(rep.worst_e1, r1);
    rep.worst_e2 = std::max(rep.worst_e2, r2);
    rep.worst_action = std::max(rep.worst_action, ra);
    if (r1 > tol) rep.e1_sums_vanish = false;
    if (r2 > tol) rep.e2_sums_vanish = false;
    if (ra > tol) rep.action_trivial = false;
  }
  return rep;
}

CancellationReport verify_first_order_cancellation(const JointSpace& space,
                                                   const Schedule& schedule,
                                                   const ErrorSubspace& subspace, int samples,
                                                   double tol, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CancellationReport rep{true, 0.0, samples};
  const double t = schedule.total_duration();
  for (int s = 0; s < samples; ++s) {
    Mat h_e = subspace.sample(rng, 1.0);
    ErrorAction phi1 = first_order_magnus(space, schedule, h_e);
    double residual = operator_norm(mod_b_reduce(space, phi1.phi)) / (operator_norm(h_e) * t);
    rep.worst_residual = std::max(rep.worst_residual, residual);
    if (residual >= tol) rep.pass = false;
  }
  return rep;
}

}  // namespace dcq
