#pragma once

#include <string>
#include <vector>

#include "dcq/joint_space.hpp"

namespace dcq {

/// Weighted multi-qubit Pauli product. `labels` holds one of I,X,Y,Z per
/// qubit; qubit 1 is labels[0]. Products of two PauliStrings close up to a
/// phase in {+1,-1,+i,-i} times the coefficient product.
struct PauliString {
  std::string labels;
  cplx coeff{1.0, 0.0};

  PauliString() = default;
  PauliString(std::string l, cplx c = {1.0, 0.0});

  int n_qubits() const { return static_cast<int>(labels.size()); }
  bool is_identity_pattern() const;

  PauliString operator*(const PauliString& other) const;

  /// Dense 2^n x 2^n matrix, coefficient included.
  Mat matrix() const;

  /// Single nontrivial Pauli `p` on qubit `qubit` (1-based) of an n-qubit register.
  static PauliString single(int n, int qubit, char p, cplx coeff = {1.0, 0.0});
  static PauliString identity(int n);
};

/// Product of two single-qubit Pauli labels: returns the resulting label and
/// accumulates the phase.
char pauli_mul(char a, char b, cplx& phase);

/// 2x2 matrix of a single Pauli label.
Eigen::Matrix2cd pauli2(char p);

}  // namespace dcq
