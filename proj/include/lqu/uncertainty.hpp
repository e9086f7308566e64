#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lqu/states.hpp"

namespace lqu {

// Validated Hermitian observable with a cached eigensystem (possibly
// degenerate; measurement "rulers" with distinct outcomes are Spectrum).
class Observable {
 public:
  explicit Observable(const ComplexMatrix& m);

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const RealVector& eigenvalues() const { return eig_.values; }
  const ComplexMatrix& eigenvectors() const { return eig_.vectors; }

 private:
  ComplexMatrix matrix_;
  EigenDecomposition eig_;
};

// Fixed nondegenerate spectrum Lambda: the eigenvalues every observable in
// the minimization class must carry. Sorted ascending; gaps below the
// spectrum_gap tolerance are rejected.
class Spectrum {
 public:
  explicit Spectrum(RealVector values);
  static Spectrum pauli();  // (-1, 1)

  Eigen::Index size() const { return values_.size(); }
  const RealVector& values() const { return values_; }

 private:
  RealVector values_;
};

// Correlation matrix (W)_ij = tr[ sqrt(rho) (sigma_i (x) I) sqrt(rho) (sigma_j (x) I) ]
// for a qubit subsystem A. Real symmetric 3x3 with eigenvalues in [-1, 1].
struct WMatrix {
  Eigen::Matrix3d entries;

  double lambda_max() const;
};

double variance(const DensityMatrix& rho, const Observable& k);

// Wigner-Yanase skew information I(rho, K) = -tr([sqrt(rho), K]^2) / 2.
double skew_information(const DensityMatrix& rho, const Observable& k);

WMatrix w_matrix(const BipartiteState& rho);

// Local quantum uncertainty for a qubit A: 1 - lambda_max(W). Pinned to [0, 1];
// excursions beyond the clamping margin are an error.
double lqu_closed_form(const BipartiteState& rho);

// Direct minimization of the skew information over local observables with
// spectrum lambda on A: Haar-sampled starts (budget of them) followed by a
// rotation pattern search. Deterministic for a fixed seed, parallel or not.
double lqu_bruteforce(const BipartiteState& rho, const Spectrum& lambda,
                      int budget, std::uint64_t seed);
// plain-loop reference, kept for testing the parallel kernel
double lqu_bruteforce_serial(const BipartiteState& rho, const Spectrum& lambda,
                             int budget, std::uint64_t seed);

// Exact minimum of the variance over the fixed-spectrum observable class for
// a state diagonalized alongside: enumerates eigenvector assignments. On a
// tie the lexicographically smallest assignment wins. dim <= 8.
struct MinVarianceResult {
  double value;
  std::vector<int> assignment;  // assignment[i] = spectrum slot of eigenvector i
};
MinVarianceResult min_variance_fixed_spectrum(const DensityMatrix& rho,
                                              const Spectrum& lambda);

// sampled counterpart of the above, same search engine as lqu_bruteforce
double min_variance_search(const DensityMatrix& rho, const Spectrum& lambda,
                           int budget, std::uint64_t seed);

// squared Hellinger distance (1/2) tr[(sqrt(rho) - sqrt(chi))^2]
double hellinger_sq(const DensityMatrix& rho, const DensityMatrix& chi);

// 2 (1 - tr rho_A^2) for a pure bipartite state
double linear_entanglement_entropy(const BipartiteState& psi);

namespace detail {

// Minimize objective(K_A) over K_A = V diag(lambda) V^dag, V unitary.
// Used by both the skew and the variance searches; exposed for tests.
double minimize_over_observables(
    const std::function<double(const ComplexMatrix&)>& objective,
    Eigen::Index dA, const Spectrum& lambda, int budget, std::uint64_t seed,
    bool parallel);

}  // namespace detail

}  // namespace lqu
