#pragma once

#include <optional>
#include <vector>

#include "dcq/joint_space.hpp"
#include "dcq/pauli.hpp"

namespace dcq {

/// One term of a system-bath Hamiltonian: weight * (system Pauli) x (bath op).
/// A missing bath operator means identity on the bath factor.
struct HamiltonianTerm {
  PauliString system;
  std::optional<Mat> bath;
  double weight{1.0};

  bool is_pure_bath() const { return system.is_identity_pattern() && bath.has_value(); }
};

struct HamiltonianSpec {
  std::vector<HamiltonianTerm> terms;
};

Mat kron(const Mat& a, const Mat& b);

/// sys (2^n x 2^n) -> sys x I_B on the joint space.
Mat embed_system(const JointSpace& space, const Mat& sys);
/// bath (d_B x d_B) -> I_S x bath on the joint space.
Mat embed_bath(const JointSpace& space, const Mat& bath);

/// Assembles a Hermitian dense matrix on the joint space. Throws on dimension
/// mismatch or a non-Hermitian bath operator.
Mat assemble(const JointSpace& space, const HamiltonianSpec& spec);

bool is_hermitian(const Mat& m, double tol = 1e-12);

/// exp(-i H t) by Hermitian eigendecomposition. Throws if H is not Hermitian.
Mat unitary_exponential(const Mat& h, double t);

/// Cached eigendecomposition of a Hermitian matrix; exponentials at many
/// durations reuse the same factorization.
class HermitianEig {
 public:
  explicit HermitianEig(const Mat& h);
  Mat exp_it(double t) const;  // exp(-i H t)
  const Eigen::VectorXd& eigenvalues() const { return evals_; }
  const Mat& eigenvectors() const { return evecs_; }

 private:
  Eigen::VectorXd evals_;
  Mat evecs_;
};

/// Spectral norm (largest singular value).
double operator_norm(const Mat& m);

/// O - I_S x Tr_S(O)/2^n. Idempotent projector whose kernel is the pure-bath
/// sector; "equal mod B" means equal after this reduction.
Mat mod_b_reduce(const JointSpace& space, const Mat& op);

/// Partial trace over the system factor (d_B x d_B result).
Mat trace_out_system(const JointSpace& space, const Mat& op);
/// Partial trace over the bath factor (2^n x 2^n result).
Mat trace_out_bath(const JointSpace& space, const Mat& op);

/// Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)). Inputs must be unit-trace PSD within
/// tolerance; eigenvalues below -1e-10 raise.
double uhlmann_fidelity(const Mat& rho1, const Mat& rho2);

/// Distance ||A - e^{i phi} B|| minimized over the global phase phi.
double phase_aligned_distance(const Mat& a, const Mat& b);

}  // namespace dcq
