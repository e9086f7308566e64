#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lqu/linalg.hpp"
#include "lqu/states.hpp"
#include "test_helpers.hpp"

using namespace lqu;
using lqu_test::entry_diff;

TEST_CASE("hermitian_eig on fixed inputs") {
  EigenDecomposition id3 = hermitian_eig(identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id3.values[i] == doctest::Approx(1.0));

  EigenDecomposition z = hermitian_eig(pauli(2));
  CHECK(z.values[0] == doctest::Approx(-1.0));
  CHECK(z.values[1] == doctest::Approx(1.0));
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix h = random_hermitian(5, rng);
    EigenDecomposition eig = hermitian_eig(h);
    CHECK(entry_diff(eig.reconstruct(), h) <= 1e-10 * max_abs(h));
    CHECK(entry_diff(eig.vectors.adjoint() * eig.vectors, identity(5)) <= 1e-12);
    for (int i = 1; i < 5; ++i) CHECK(eig.values[i] >= eig.values[i - 1]);
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input with a diagnostic") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = Complex(1.0, 0.0);  // strictly upper triangular: far from Hermitian
  CHECK_THROWS_AS(hermitian_eig(m), validation_error);
  try {
    hermitian_eig(m);
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("psd_sqrt fixed points and diagonal arithmetic") {
  // projector onto (|0> + |1>)/sqrt(2) is its own root
  ComplexMatrix p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  CHECK(entry_diff(psd_sqrt(p), p) <= 1e-12);

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.25;
  d(1, 1) = 0.75;
  ComplexMatrix r = psd_sqrt(d);
  CHECK(std::real(r(0, 0)) == doctest::Approx(0.5));
  CHECK(std::real(r(1, 1)) == doctest::Approx(std::sqrt(0.75)));
  CHECK(std::abs(r(0, 1)) <= 1e-15);
}

TEST_CASE("psd_sqrt squares back and commutes on random states") {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    ComplexMatrix rho = random_density_matrix(4, rng).matrix();
    ComplexMatrix r = psd_sqrt(rho);
    CHECK(entry_diff(r * r, rho) <= 1e-9);
    CHECK(entry_diff(r * rho, rho * r) <= 1e-10);
    CHECK(hermiticity_residual(r) <= 1e-12);
  }
}

TEST_CASE("psd_sqrt rejects genuinely negative spectra") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1e-6;  // far below the clip band
  CHECK_THROWS_AS(psd_sqrt(m), validation_error);
}

TEST_CASE("tensor product layout: A is the slow index") {
  CHECK(entry_diff(tensor(identity(2), identity(2)), identity(4)) == 0.0);

  ComplexMatrix zi = tensor(pauli(2), identity(2));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(1, 1) = 1.0;
  expected(2, 2) = -1.0;
  expected(3, 3) = -1.0;
  CHECK(entry_diff(zi, expected) == 0.0);
}

TEST_CASE("tensor trace multiplicativity and associativity") {
  Rng rng(17);
  for (int t = 0; t < 10; ++t) {
    ComplexMatrix a = random_hermitian(2, rng);
    ComplexMatrix b = random_hermitian(3, rng);
    ComplexMatrix c = random_hermitian(2, rng);
    CHECK(std::abs(tensor(a, b).trace() - a.trace() * b.trace()) <= 1e-12);
    CHECK(entry_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) <= 1e-12);
  }
}

TEST_CASE("partial_trace on known states") {
  BipartiteState bell = bell_phi_plus();
  CHECK(entry_diff(partial_trace(bell, Subsystem::A), identity(2) * 0.5) <= 1e-12);
  CHECK(entry_diff(partial_trace(bell, Subsystem::B), identity(2) * 0.5) <= 1e-12);

  Rng rng(23);
  DensityMatrix rho_a = random_density_matrix(2, rng);
  DensityMatrix rho_b = random_density_matrix(3, rng);
  BipartiteState product(tensor(rho_a.matrix(), rho_b.matrix()), 2, 3);
  CHECK(entry_diff(partial_trace(product, Subsystem::A), rho_a.matrix()) <= 1e-12);
  CHECK(entry_diff(partial_trace(product, Subsystem::B), rho_b.matrix()) <= 1e-12);
}

TEST_CASE("partial_trace preserves the trace on random states") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    BipartiteState rho = random_bipartite(2, 3, rng);
    CHECK(std::abs(partial_trace(rho, Subsystem::A).trace() - Complex(1.0)) <= 1e-12);
    CHECK(std::abs(partial_trace(rho, Subsystem::B).trace() - Complex(1.0)) <= 1e-12);
  }
}

TEST_CASE("partial_trace rejects a bipartition that does not factor the dimension") {
  Rng rng(37);
  ComplexMatrix rho = random_density_matrix(4, rng).matrix();
  CHECK_THROWS_AS(partial_trace(rho, 3, 2, Subsystem::A), validation_error);
}

TEST_CASE("haar_unitary is unitary and seed-deterministic") {
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    ComplexMatrix u = haar_unitary(5, seed);
    CHECK(entry_diff(u.adjoint() * u, identity(5)) <= 1e-12);
    CHECK(entry_diff(haar_unitary(5, seed), u) == 0.0);
  }
  CHECK(entry_diff(haar_unitary(5, 1), haar_unitary(5, 2)) > 1e-3);
}

TEST_CASE("haar_unitary eigenphases are uniform (chi-square)") {
  // 300 samples of dim 8 -> 2400 phases over 16 bins; reject only wild skew
  constexpr int kBins = 16;
  std::vector<int> counts(kBins, 0);
  int total = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    ComplexMatrix u = haar_unitary(8, seed);
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(u);
    for (Eigen::Index i = 0; i < 8; ++i) {
      double phase = std::arg(solver.eigenvalues()[i]);  // (-pi, pi]
      if (phase < 0.0) phase += 2.0 * std::numbers::pi;
      int bin = static_cast<int>(phase / (2.0 * std::numbers::pi) * kBins);
      if (bin == kBins) bin = 0;
      ++counts[static_cast<std::size_t>(bin)];
      ++total;
    }
  }
  const double expected = static_cast<double>(total) / kBins;
  double chi_sq = 0.0;
  for (int c : counts) {
    const double d = c - expected;
    chi_sq += d * d / expected;
  }
  // 15 dof: mean 15, this threshold is ~p < 1e-4; deterministic seeds anyway
  CHECK(chi_sq < 45.0);
}

TEST_CASE("rng stream derivation decorrelates parallel trials") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  Rng a(derive_seed(9, 0));
  Rng b(derive_seed(9, 1));
  CHECK(a.raw() != b.raw());
}

TEST_CASE("trace_product agrees with the explicit product trace") {
  Rng rng(41);
  ComplexMatrix a = random_hermitian(4, rng);
  ComplexMatrix b = random_hermitian(4, rng);
  CHECK(std::abs(trace_product(a, b) - (a * b).trace()) <= 1e-12);
}
