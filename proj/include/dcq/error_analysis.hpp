#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dcq/schedule.hpp"

namespace dcq {

struct ErrorAction {
  Mat phi;                          // Hermitian, joint space
  bool convergence_warning = false; // Magnus precondition ||H_e|| T < pi violated
};

/// Hermitian principal log: Phi with e^{-i Phi} = W, eigenphases in (-pi, pi).
/// Throws if any eigenphase is within 1e-6 of the branch cut.
Mat hermitian_log_unitary(const Mat& w);

/// Exact error action Phi = i log(U_gate(T)^dag U(T)) of a schedule evolving
/// jointly under the gating Hamiltonian plus H_e.
ErrorAction exact_error_action(const JointSpace& space, const Schedule& schedule, const Mat& h_e);

/// First-order Magnus term: sum over segments of the spectral-basis integral
/// of the toggled error Hamiltonian.
ErrorAction first_order_magnus(const JointSpace& space, const Schedule& schedule, const Mat& h_e);

/// Discrete-time first-order combination: sum_i P_{i-1}^dag Phi_i P_{i-1}
/// with P_i the partial products of the (system) gates.
ErrorAction compose_gate_errors(const JointSpace& space,
                                const std::vector<std::pair<Mat, Mat>>& gates_and_phis);

/// (T^2/4) (2 ||H_B|| ||H_SB|| + ||H_SB||^2).
double second_order_bound(double h_sb_norm, double h_b_norm, double t);

/// Random members of an error subspace, with bath factors drawn as GUE-like
/// Hermitian matrices normalized to unit spectral norm.
class ErrorSubspace {
 public:
  enum class Kind { Linear, Dephasing, NearestNeighborBilinear };

  ErrorSubspace(Kind kind, JointSpace space) : kind_(kind), space_(space) {}

  /// A random H_e with ||H_e|| = magnitude.
  Mat sample(std::mt19937_64& rng, double magnitude = 1.0) const;
  /// The single-qubit generator patterns S_alpha^(i) of the subspace.
  std::vector<PauliString> generator_patterns() const;
  const JointSpace& space() const { return space_; }

 private:
  Kind kind_;
  JointSpace space_;
};

/// GUE-like random Hermitian matrix with unit spectral norm.
Mat random_hermitian(std::mt19937_64& rng, int dim);

struct NogoReport {
  bool e1_sums_vanish;     // sum P_{i-1}^dag X P_{i-1} = 0 mod B for all probes
  bool e2_sums_vanish;     // sum P_i^dag X P_i = 0 mod B for all probes
  bool action_trivial;     // A^dag X A = X mod B for all probes
  double worst_e1, worst_e2, worst_action;
};

/// Evaluates the two black-box error models E1(U) = X and E2(U) = U^dag X U
/// over the given probe operators; when both sums vanish the sequence's net
/// action must commute with the probes.
NogoReport nogo_witness(const JointSpace& space, const std::vector<Mat>& sequence,
                        const std::vector<Mat>& probes, double tol = 1e-9);

struct CancellationReport {
  bool pass;
  double worst_residual;  // max ||mod_b(Phi^[1])|| / (||H_e|| T)
  int samples;
};

CancellationReport verify_first_order_cancellation(const JointSpace& space,
                                                   const Schedule& schedule,
                                                   const ErrorSubspace& subspace, int samples,
                                                   double tol, std::uint64_t seed);

}  // namespace dcq
