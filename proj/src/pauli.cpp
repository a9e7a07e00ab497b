#include "dcq/pauli.hpp"

#include <stdexcept>

namespace dcq {

namespace {
int pauli_index(char p) {
  switch (p) {
    case 'I': return 0;
    case 'X': return 1;
    case 'Y': return 2;
    case 'Z': return 3;
  }
  throw std::invalid_argument(std::string("bad Pauli label: ") + p);
}
const char kLabels[4] = {'I', 'X', 'Y', 'Z'};
}  // namespace

char pauli_mul(char a, char b, cplx& phase) {
  int ia = pauli_index(a), ib = pauli_index(b);
  if (ia == 0) return b;
  if (ib == 0) return a;
  if (ia == ib) return 'I';
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
  static const int third[4][4] = {{0, 0, 0, 0}, {0, 0, 3, 2}, {0, 3, 0, 1}, {0, 2, 1, 0}};
  bool cyclic = (ib == ia % 3 + 1);
  phase *= cyclic ? cplx(0, 1) : cplx(0, -1);
  return kLabels[third[ia][ib]];
}

PauliString::PauliString(std::string l, cplx c) : labels(std::move(l)), coeff(c) {
  for (char p : labels) pauli_index(p);
}

bool PauliString::is_identity_pattern() const {
  return labels.find_first_not_of('I') == std::string::npos;
}

PauliString PauliString::operator*(const PauliString& other) const {
  if (labels.size() != other.labels.size())
    throw std::invalid_argument("PauliString product: length mismatch");
  PauliString out;
  out.labels.resize(labels.size());
  cplx phase = coeff * other.coeff;
  for (size_t i = 0; i < labels.size(); ++i)
    out.labels[i] = pauli_mul(labels[i], other.labels[i], phase);
  out.coeff = phase;
  return out;
}

Eigen::Matrix2cd pauli2(char p) {
  Eigen::Matrix2cd m;
  const cplx i(0, 1);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument(std::string("bad Pauli label: ") + p);
  }
  return m;
}

Mat PauliString::matrix() const {
  // Qubit 1 is the most significant tensor factor.
  Mat m = Mat::Identity(1, 1);
  for (char p : labels) {
    Eigen::Matrix2cd q = pauli2(p);
    Mat next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        next.block(r * 2, c * 2, 2, 2) = m(r, c) * q;
    m = std::move(next);
  }
  return coeff * m;
}

PauliString PauliString::single(int n, int qubit, char p, cplx coeff) {
  if (qubit < 1 || qubit > n) throw std::invalid_argument("PauliString::single: qubit out of range");
  PauliString s(std::string(static_cast<size_t>(n), 'I'), coeff);
  s.labels[static_cast<size_t>(qubit - 1)] = p;
  return s;
}

PauliString PauliString::identity(int n) {
  return PauliString(std::string(static_cast<size_t>(n), 'I'));
}

}  // namespace dcq
