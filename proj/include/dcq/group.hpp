#pragma once

#include <string>
#include <vector>

#include "dcq/operator_core.hpp"
#include "dcq/pauli.hpp"

namespace dcq {

/// Finite decoupling group with explicit multiplication table. Element 0 is
/// the identity. Generators are element indices.
struct DecouplingGroup {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> mult;  // mult[a][b] = index of g_a * g_b
  std::vector<int> generators;

  int order() const { return static_cast<int>(labels.size()); }

  /// Z2^k with the k standard generators, labels as bitstrings.
  static DecouplingGroup z2_power(int k);
};

/// Projective unitary representation by Pauli strings, indexed like the group
/// elements. generator_names[j] labels generator j in emitted sequences.
struct GroupRepresentation {
  std::vector<PauliString> elements;
  std::vector<std::string> generator_names;

  /// Checks G_a G_b proportional to G_{ab} for all pairs.
  bool is_projective_homomorphism(const DecouplingGroup& group, double tol = 1e-12) const;
};

/// {I, X^all} representation of Z2 on n qubits (pure dephasing).
GroupRepresentation rep_z2_collective(int n);
/// {I, X^all, Y^all, Z^all} representation of Z2xZ2 on n qubits (linear decoherence).
GroupRepresentation rep_z2z2_collective(int n);

struct CayleyEdge {
  int from;
  int to;
  int gen;  // index into group.generators
};

struct CayleyGraph {
  const DecouplingGroup* group;
  std::vector<CayleyEdge> edges;
  int n_generators() const { return static_cast<int>(group->generators.size()); }
};

/// Left-multiplication Cayley graph: edge g -> h*g for each generator h.
/// Throws if the generators do not reach every element.
CayleyGraph build_cayley_graph(const DecouplingGroup& group);

/// Canonical Eulerian cycle starting and ending at the identity, as edge
/// indices in application order. The tie-break prefers the lowest-index
/// generator different from the previously applied one, which reproduces the
/// published Z2xZ2 cycle X,Y,X,Y,Y,X,Y,X.
std::vector<int> find_eulerian_cycle(const CayleyGraph& graph);

/// Same traversal but with randomized tie-breaking (seeded), for
/// equivalence-across-traversals checks.
std::vector<int> find_eulerian_cycle_randomized(const CayleyGraph& graph, unsigned seed);

enum class Role { Generator, IdentityArm, QHalf, Q, Free };

struct Token {
  Role role;
  std::string name;
  int duration_mult;
  int generator_index = -1;
};

struct SequenceSpec {
  std::vector<Token> tokens;  // application order

  int total_duration_mult() const;
  std::vector<std::string> names() const;
  std::string to_text() const;  // one line per token, role:token:duration_mult
  std::string to_json() const;
  static SequenceSpec from_text(const std::string& text);
};

/// Eulerian DD: d*m generator tokens, each generator appearing d times.
SequenceSpec synthesize_edd(const DecouplingGroup& group, const GroupRepresentation& rep);

/// DCG: the Eulerian cycle with an I_Q arm traversed on first arrival at each
/// non-identity vertex and the identity vertex's arm, traversed at the final
/// return, realized as Q_half. Token count d*m + d, duration d*(m+2).
SequenceSpec synthesize_dcg(const DecouplingGroup& group, const GroupRepresentation& rep,
                            const std::string& q_name);

/// Variant built on an explicitly supplied Eulerian cycle.
SequenceSpec synthesize_dcg_on_cycle(const CayleyGraph& graph, const GroupRepresentation& rep,
                                     const std::vector<int>& cycle, const std::string& q_name);

/// Group-average map Pi_G(E) = sum_i G_i^dag E G_i on the joint space.
Mat projection_superop(const JointSpace& space, const GroupRepresentation& rep, const Mat& e);

}  // namespace dcq
