#include "dcq/operator_core.hpp"

#include <cmath>
#include <stdexcept>

namespace dcq {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

Mat embed_system(const JointSpace& space, const Mat& sys) {
  if (sys.rows() != space.system_dim() || sys.cols() != space.system_dim())
    throw std::invalid_argument("embed_system: dimension mismatch");
  if (space.bath_dim() == 1) return sys;
  return kron(sys, Mat::Identity(space.bath_dim(), space.bath_dim()));
}

Mat embed_bath(const JointSpace& space, const Mat& bath) {
  if (bath.rows() != space.bath_dim() || bath.cols() != space.bath_dim())
    throw std::invalid_argument("embed_bath: dimension mismatch");
  return kron(Mat::Identity(space.system_dim(), space.system_dim()), bath);
}

bool is_hermitian(const Mat& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

Mat assemble(const JointSpace& space, const HamiltonianSpec& spec) {
  Mat h = Mat::Zero(space.dim(), space.dim());
  for (const auto& term : spec.terms) {
    if (term.system.n_qubits() != space.n_qubits())
      throw std::invalid_argument("assemble: PauliString length mismatch");
    Mat sys = term.system.matrix();
    if (term.bath) {
      if (term.bath->rows() != space.bath_dim() || term.bath->cols() != space.bath_dim())
        throw std::invalid_argument("assemble: bath operator dimension mismatch");
      if (!is_hermitian(*term.bath))
        throw std::invalid_argument("assemble: non-Hermitian bath operator");
      h += term.weight * kron(sys, *term.bath);
    } else {
      h += term.weight * embed_system(space, sys);
    }
  }
  if (!is_hermitian(h))
    throw std::invalid_argument("assemble: resulting Hamiltonian is not Hermitian");
  return h;
}

HermitianEig::HermitianEig(const Mat& h) {
  if (!is_hermitian(h, 1e-10)) throw std::invalid_argument("HermitianEig: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

Mat HermitianEig::exp_it(double t) const {
  Vec phases(evals_.size());
  for (Eigen::Index i = 0; i < evals_.size(); ++i)
    phases[i] = std::exp(cplx(0, -evals_[i] * t));
  return evecs_ * phases.asDiagonal() * evecs_.adjoint();
}

Mat unitary_exponential(const Mat& h, double t) {
  return HermitianEig(h).exp_it(t);
}

double operator_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Mat trace_out_system(const JointSpace& space, const Mat& op) {
  const int ds = space.system_dim(), db = space.bath_dim();
  if (op.rows() != space.dim() || op.cols() != space.dim())
    throw std::invalid_argument("trace_out_system: dimension mismatch");
  Mat out = Mat::Zero(db, db);
  for (int s = 0; s < ds; ++s) out += op.block(s * db, s * db, db, db);
  return out;
}

Mat trace_out_bath(const JointSpace& space, const Mat& op) {
  const int ds = space.system_dim(), db = space.bath_dim();
  if (op.rows() != space.dim() || op.cols() != space.dim())
    throw std::invalid_argument("trace_out_bath: dimension mismatch");
  Mat out = Mat::Zero(ds, ds);
  for (int r = 0; r < ds; ++r)
    for (int c = 0; c < ds; ++c) out(r, c) = op.block(r * db, c * db, db, db).trace();
  return out;
}

Mat mod_b_reduce(const JointSpace& space, const Mat& op) {
  Mat tr = trace_out_system(space, op) / static_cast<double>(space.system_dim());
  return op - embed_bath(space, tr);
}

namespace {
Mat psd_sqrt(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] < -1e-10) throw std::invalid_argument("uhlmann_fidelity: negative eigenvalue");
    ev[i] = std::sqrt(std::max(ev[i], 0.0));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}
}  // namespace

double uhlmann_fidelity(const Mat& rho1, const Mat& rho2) {
  if (std::abs(rho1.trace() - cplx(1.0)) > 1e-10 || std::abs(rho2.trace() - cplx(1.0)) > 1e-10)
    throw std::invalid_argument("uhlmann_fidelity: inputs must have unit trace");
  // Trace-norm form Tr|sqrt(rho1) sqrt(rho2)|: equivalent to the
  // trace-of-square-root formula but roundoff stays additive instead of being
  // amplified by the outer square root, which matters for infidelities near
  // the double-precision floor.
  Mat b = psd_sqrt(rho1) * psd_sqrt(rho2);
  Eigen::JacobiSVD<Mat> svd(b);
  double f = svd.singularValues().sum();
  return std::min(f, 1.0);
}

double phase_aligned_distance(const Mat& a, const Mat& b) {
  cplx ov = (b.adjoint() * a).trace();
  cplx phase = (std::abs(ov) < 1e-14) ? cplx(1.0) : ov / std::abs(ov);
  return operator_norm(a - phase * b);
}

}  // namespace dcq
