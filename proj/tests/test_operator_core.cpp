#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dcq/operator_core.hpp"

using namespace dcq;

namespace {

Mat random_hermitian_like(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
  return Mat(0.5 * (m + m.adjoint()));
}

Mat random_density(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = cplx(g(rng), g(rng));
  Mat rho = a * a.adjoint();
  return Mat(rho / rho.trace());
}

}  // namespace

TEST_CASE("assemble embeds system Paulis against the identity bath") {
  JointSpace sp(2, 1);
  HamiltonianSpec spec;
  spec.terms.push_back({PauliString::single(2, 1, 'X'), std::nullopt, 1.0});
  Mat h = assemble(sp, spec);
  Mat expect = kron(pauli2('X'), Mat::Identity(2, 2));
  CHECK(operator_norm(h - expect) < 1e-14);
}

TEST_CASE("assemble of an empty term list is the zero matrix") {
  JointSpace sp(2, 3);
  Mat h = assemble(sp, HamiltonianSpec{});
  CHECK(operator_norm(h) == 0.0);
}

TEST_CASE("assemble with random bath operators is Hermitian") {
  std::mt19937_64 rng(11);
  JointSpace sp(1, 4);
  HamiltonianSpec spec;
  for (char a : {'X', 'Y', 'Z'})
    spec.terms.push_back({PauliString::single(1, 1, a), random_hermitian_like(rng, 4), 0.7});
  Mat h = assemble(sp, spec);
  CHECK(operator_norm(Mat(h - h.adjoint())) < 1e-12);
}

TEST_CASE("assemble rejects dimension mismatch and non-Hermitian bath") {
  JointSpace sp(2, 2);
  HamiltonianSpec bad_len;
  bad_len.terms.push_back({PauliString("XYZ"), std::nullopt, 1.0});
  CHECK_THROWS(assemble(sp, bad_len));

  HamiltonianSpec bad_bath;
  Mat nb = Mat::Zero(2, 2);
  nb(0, 1) = 1.0;
  bad_bath.terms.push_back({PauliString::identity(2), nb, 1.0});
  CHECK_THROWS(assemble(sp, bad_bath));
}

TEST_CASE("pure-bath terms assemble as identity tensor bath") {
  std::mt19937_64 rng(3);
  JointSpace sp(1, 3);
  Mat b = random_hermitian_like(rng, 3);
  HamiltonianSpec spec;
  spec.terms.push_back({PauliString::identity(1), b, 2.0});
  CHECK(spec.terms[0].is_pure_bath());
  CHECK(operator_norm(assemble(sp, spec) - 2.0 * kron(Mat::Identity(2, 2), b)) < 1e-13);
}

TEST_CASE("unitary_exponential: Pauli rotation identity and t=0") {
  Mat x = pauli2('X');
  Mat u = unitary_exponential(x, M_PI / 2);
  CHECK(operator_norm(Mat(u + cplx(0, 1) * x)) < 1e-14);
  std::mt19937_64 rng(5);
  Mat h = random_hermitian_like(rng, 4);
  CHECK(operator_norm(Mat(unitary_exponential(h, 0.0) - Mat::Identity(4, 4))) < 1e-14);
}

TEST_CASE("unitary_exponential spectrum lies on the unit circle") {
  std::mt19937_64 rng(17);
  Mat h = random_hermitian_like(rng, 8);
  Mat u = unitary_exponential(h, 0.7);
  Eigen::ComplexEigenSolver<Mat> es(u);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(std::abs(es.eigenvalues()[i]) - 1.0) < 1e-12);
  CHECK(operator_norm(Mat(u.adjoint() * u - Mat::Identity(8, 8))) < 1e-10);
}

TEST_CASE("unitary_exponential rejects non-Hermitian input") {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS(unitary_exponential(m, 1.0));
}

TEST_CASE("same-Hamiltonian exponentials compose additively in time") {
  std::mt19937_64 rng(23);
  Mat h = random_hermitian_like(rng, 6);
  Mat lhs = unitary_exponential(h, 0.3) * unitary_exponential(h, 1.1);
  CHECK(operator_norm(Mat(lhs - unitary_exponential(h, 1.4))) < 1e-10);
}

TEST_CASE("HermitianEig reuses one factorization for many durations") {
  std::mt19937_64 rng(29);
  Mat h = random_hermitian_like(rng, 6);
  HermitianEig eig(h);
  for (double t : {0.0, 0.25, 2.0})
    CHECK(operator_norm(Mat(eig.exp_it(t) - unitary_exponential(h, t))) < 1e-12);
}

TEST_CASE("mod_b_reduce annihilates pure-bath terms and fixes system-traceless ones") {
  std::mt19937_64 rng(31);
  JointSpace sp(1, 4);
  Mat b = random_hermitian_like(rng, 4);
  CHECK(operator_norm(mod_b_reduce(sp, embed_bath(sp, b))) < 1e-13);
  Mat zb = kron(pauli2('Z'), b);
  CHECK(operator_norm(Mat(mod_b_reduce(sp, zb) - zb)) < 1e-13);
}

TEST_CASE("mod_b_reduce is an idempotent projector with system-traceless image") {
  std::mt19937_64 rng(37);
  JointSpace sp(2, 3);
  Mat o = random_hermitian_like(rng, sp.dim());
  Mat p = mod_b_reduce(sp, o);
  CHECK(operator_norm(Mat(mod_b_reduce(sp, p) - p)) < 1e-12);
  CHECK(operator_norm(trace_out_system(sp, p)) < 1e-13);
  // the removed part is pure-bath
  CHECK(operator_norm(Mat(o - p - embed_bath(sp, trace_out_system(sp, o) / 4.0))) < 1e-12);
}

TEST_CASE("operator_norm: unit Pauli, homogeneity, unitary invariance") {
  std::mt19937_64 rng(41);
  JointSpace sp(1, 2);
  CHECK(operator_norm(kron(pauli2('X'), Mat::Identity(2, 2))) == doctest::Approx(1.0));
  Mat o = random_hermitian_like(rng, 4);
  CHECK(operator_norm(Mat(-2.5 * o)) == doctest::Approx(2.5 * operator_norm(o)));
  Mat u = unitary_exponential(random_hermitian_like(rng, 4), 1.0);
  Mat v = unitary_exponential(random_hermitian_like(rng, 4), 1.0);
  CHECK(std::abs(operator_norm(Mat(u * o * v)) - operator_norm(o)) < 1e-11);
}

TEST_CASE("uhlmann_fidelity basics") {
  std::mt19937_64 rng(43);
  Mat rho = random_density(rng, 4);
  CHECK(uhlmann_fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));

  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  CHECK(uhlmann_fidelity(p0, p1) < 1e-7);
  CHECK(uhlmann_fidelity(p0, Mat(0.5 * Mat::Identity(2, 2))) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("uhlmann_fidelity is symmetric and monotone under an appended ancilla") {
  std::mt19937_64 rng(47);
  Mat r1 = random_density(rng, 3), r2 = random_density(rng, 3), sigma = random_density(rng, 2);
  double f = uhlmann_fidelity(r1, r2);
  CHECK(uhlmann_fidelity(r2, r1) == doctest::Approx(f).epsilon(1e-10));
  CHECK(uhlmann_fidelity(kron(r1, sigma), kron(r2, sigma)) == doctest::Approx(f).epsilon(1e-10));
}

TEST_CASE("uhlmann_fidelity input validation") {
  Mat not_normalized = 2.0 * Mat::Identity(2, 2);
  CHECK_THROWS(uhlmann_fidelity(not_normalized, not_normalized));
  Mat neg = Mat::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS(uhlmann_fidelity(neg, neg));
}

TEST_CASE("partial traces: product states, entangled states, trace preservation") {
  std::mt19937_64 rng(53);
  JointSpace sp(1, 2);
  Mat rs = random_density(rng, 2), rb = random_density(rng, 2);
  CHECK(operator_norm(Mat(trace_out_bath(sp, kron(rs, rb)) - rs)) < 1e-12);
  CHECK(operator_norm(Mat(trace_out_system(sp, kron(rs, rb)) - rb)) < 1e-12);

  Vec bell = Vec::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  Mat rho = bell * bell.adjoint();
  CHECK(operator_norm(Mat(trace_out_bath(sp, rho) - 0.5 * Mat::Identity(2, 2))) < 1e-12);

  Mat joint = random_density(rng, 4);
  CHECK(std::abs(trace_out_bath(sp, joint).trace() - cplx(1.0)) < 1e-12);
}

TEST_CASE("single-qubit Pauli product table closes with phases in {1,-1,i,-i}") {
  const char* labels = "IXYZ";
  for (char a : std::string(labels))
    for (char b : std::string(labels)) {
      PauliString p = PauliString::single(1, 1, a == 'I' ? 'X' : a);
      if (a == 'I') p = PauliString::identity(1);
      PauliString q = PauliString::single(1, 1, b == 'I' ? 'X' : b);
      if (b == 'I') q = PauliString::identity(1);
      PauliString prod = p * q;
      bool phase_ok = false;
      for (cplx ph : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)})
        if (std::abs(prod.coeff - ph) < 1e-14) phase_ok = true;
      CHECK(phase_ok);
      CHECK(operator_norm(Mat(prod.matrix() - p.matrix() * q.matrix())) < 1e-14);
    }
}

TEST_CASE("phase_aligned_distance ignores global phase") {
  std::mt19937_64 rng(59);
  Mat u = unitary_exponential(random_hermitian_like(rng, 4), 1.0);
  CHECK(phase_aligned_distance(Mat(cplx(std::cos(0.3), std::sin(0.3)) * u), u) < 1e-12);
}

TEST_CASE("qubit 1 is the most significant tensor factor") {
  Mat z1 = PauliString::single(2, 1, 'Z').matrix();
  Mat z2 = PauliString::single(2, 2, 'Z').matrix();
  CHECK(z1(0, 0) == cplx(1.0));
  CHECK(z1(3, 3) == cplx(-1.0));
  CHECK(operator_norm(Mat(z1 - kron(pauli2('Z'), Mat::Identity(2, 2)))) < 1e-14);
  CHECK(operator_norm(Mat(z2 - kron(Mat::Identity(2, 2), pauli2('Z')))) < 1e-14);
}
