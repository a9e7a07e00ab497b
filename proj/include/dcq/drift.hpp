#pragma once

#include <string>
#include <vector>

#include "dcq/group.hpp"
#include "dcq/schedule.hpp"

namespace dcq {

/// Qubit chain with always-on nearest-neighbor Heisenberg drift
/// H_S = lambda sum_i S^(i).S^(i+1) (spin vectors sigma/2).
struct ChainModel {
  int n;
  double lambda;
};

/// System-dim drift Hamiltonian of the full chain.
Mat chain_drift_hamiltonian(const ChainModel& chain);
/// The single (k, k+1) bond term lambda S^(k).S^(k+1).
Mat pair_drift_term(int n, int k, double lambda);

enum class ChainGroupVariant { PairGate, SingleQubitGate };

/// Z2^4 decoupling group for the chain, with the four generators X^O X^E,
/// X^O Y^E, Y^O X^E, Y^O Y^E over the odd/even index sets. The pair-gate
/// variant excludes the active qubits k, k+1 from both sets; the single-qubit
/// variant uses all odd/even qubits.
struct ChainGroup {
  DecouplingGroup group;
  GroupRepresentation rep;
  std::vector<int> odd_set, even_set;
};

ChainGroup chain_decoupling_group(int n, int k, ChainGroupVariant variant);

/// Two parallel piecewise-constant control layers acting on disjoint qubit
/// sets; layer 2 carries the retained bond drift explicitly.
struct DriftSchedule {
  Schedule layer1;
  Schedule layer2;

  double total_duration() const { return layer1.total_duration(); }
  /// Single-layer merge: per tau-slice sum of the two layer Hamiltonians.
  Schedule flatten() const;
};

/// 64-tau entangling block on bond (k, k+1): layer 1 runs the 64-segment
/// Eulerian traversal of the chain group on the spectator qubits; layer 2 runs
/// eight 8-tau segments combining (pi/16tau) collective pair pulses (X for
/// blocks 1,3,6,8, Y for 2,4,5,7) with the retained bond drift. The closed
/// product is exp(-i 64 tau lambda S^(k).S^(k+1)).
DriftSchedule two_qubit_drift_dcg(const ChainModel& chain, int k, double tau);

/// Generator order (indices into the chain-group generators) of the layer-1
/// traversal used by two_qubit_drift_dcg: an Eulerian cycle on Z2^4 whose
/// toggling pattern on the boundary spectator's parity class repeats every
/// eight segments, synchronized with the layer-2 blocks.
std::vector<int> chain_pair_cycle(const ChainModel& chain, int k);

/// Closed-system target of the 64-tau block.
Mat two_qubit_drift_target(const ChainModel& chain, int k, double tau);

/// 96-segment dynamically corrected single-qubit gate exp(-i theta C),
/// C in {X^(k), Y^(k)}: the 64-segment Eulerian traversal with balance arms
/// (15 identity arms plus the final half-gate, 2 segments each).
Schedule single_qubit_drift_dcg(const ChainModel& chain, int k, double theta, char axis,
                                double tau);

struct AngleInversion {
  double tau;
  bool below_min;  // requested angle needs tau under the declared floor
};

/// tau with 64 tau lambda = theta for the fixed-angle entangling block.
AngleInversion tau_for_angle(double theta, double lambda, double tau_min = 0.0);

}  // namespace dcq
