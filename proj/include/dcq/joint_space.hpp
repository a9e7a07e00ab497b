#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace dcq {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Factored system (n qubits) x bath (arbitrary dimension) Hilbert space.
/// Joint indices are system-major: idx = s * bath_dim + b.
class JointSpace {
 public:
  JointSpace(int n_system_qubits, int bath_dim)
      : n_qubits_(n_system_qubits), bath_dim_(bath_dim) {
    if (n_system_qubits < 0 || bath_dim < 1)
      throw std::invalid_argument("JointSpace: invalid dimensions");
  }

  int n_qubits() const { return n_qubits_; }
  int system_dim() const { return 1 << n_qubits_; }
  int bath_dim() const { return bath_dim_; }
  int dim() const { return system_dim() * bath_dim_; }

  bool operator==(const JointSpace& o) const {
    return n_qubits_ == o.n_qubits_ && bath_dim_ == o.bath_dim_;
  }

 private:
  int n_qubits_;
  int bath_dim_;
};

}  // namespace dcq
