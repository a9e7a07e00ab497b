#pragma once

#include <string>
#include <vector>

#include "dcq/group.hpp"
#include "dcq/operator_core.hpp"

namespace dcq {

/// One piecewise-constant control segment. The gating Hamiltonian during the
/// segment is amplitude * generator (+ extra, for segments that carry an
/// always-on drift piece); it acts on the system factor only.
struct ControlSegment {
  Mat generator;      // system-dim Hermitian generator
  double amplitude;   // control input strength
  double duration;    // > 0
  Role role = Role::Free;
  std::string token;
  int layer = 0;

  Mat hamiltonian() const { return amplitude * generator; }
};

struct Schedule {
  std::vector<ControlSegment> segments;
  std::string id;

  double total_duration() const;
  /// Closed-system propagator (system dim), last segment leftmost.
  Mat closed_propagator() const;
  /// Closed-system propagator after the first k segments.
  Mat closed_propagator_prefix(int k) const;

  std::string to_json(int n_qubits) const;
  static Schedule from_json(const std::string& text, int n_qubits);
};

/// Rectangular control profile for a target gate: the special case of a
/// schedule used by the balance-pair construction.
using ControlProfile = Schedule;

/// Segment order reversed and amplitudes negated: the reverse anti-symmetric
/// profile, implementing Q' with Q'Q = I on the closed system.
ControlProfile reverse_conjugate_profile(const ControlProfile& p);

/// Each segment slowed by `factor` and weakened by 1/factor; for rectangular
/// profiles the propagator satisfies U''(t) = U(t/factor).
ControlProfile stretch_profile(const ControlProfile& p, double factor = 2.0);

struct BalancePair {
  ControlProfile identity_profile;  // Q'Q, duration 2*tau
  ControlProfile gate_profile;      // Q_half, duration 2*tau
};

/// First-order balance pair (Q'Q, Q_half) sharing the same first-order error.
BalancePair make_balance_pair(const ControlProfile& p);

}  // namespace dcq
