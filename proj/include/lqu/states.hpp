#pragma once

#include <vector>

#include "lqu/linalg.hpp"

namespace lqu {

// Validated state: Hermitian, unit trace, positive semidefinite. The
// eigensystem and the square root are computed once at construction, so
// downstream code (and parallel loops) can share them read-only.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m);

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const ComplexMatrix& sqrt() const { return sqrt_; }
  const RealVector& eigenvalues() const { return eig_.values; }
  const ComplexMatrix& eigenvectors() const { return eig_.vectors; }

  double purity() const;
  bool is_pure() const;
  // unit eigenvector of the largest eigenvalue; meaningful for pure states
  ComplexVector dominant_eigenvector() const;

 private:
  ComplexMatrix matrix_;
  EigenDecomposition eig_;
  ComplexMatrix sqrt_;
};

// A state together with its bipartition dA x dB (A slow, B fast).
class BipartiteState {
 public:
  BipartiteState(const ComplexMatrix& m, Eigen::Index dA, Eigen::Index dB);
  BipartiteState(DensityMatrix rho, Eigen::Index dA, Eigen::Index dB);

  Eigen::Index dA() const { return dA_; }
  Eigen::Index dB() const { return dB_; }
  Eigen::Index dim() const { return rho_.dim(); }
  const DensityMatrix& state() const { return rho_; }
  const ComplexMatrix& matrix() const { return rho_.matrix(); }

 private:
  DensityMatrix rho_;
  Eigen::Index dA_;
  Eigen::Index dB_;
};

ComplexMatrix partial_trace(const BipartiteState& rho, Subsystem keep);

// |psi><psi| from an amplitude vector; the vector is normalized first.
DensityMatrix pure_state(const ComplexVector& amplitudes);
BipartiteState pure_bipartite(const ComplexVector& amplitudes, Eigen::Index dA,
                              Eigen::Index dB);

// (|00> + |11>)/sqrt(2)
BipartiteState bell_phi_plus();

// p |phi+><phi+| + (1-p) I/4, p in [0, 1]
BipartiteState werner(double p);

// sum_i p_i |i><i| (x) tau_i: zero discord by construction
BipartiteState classical_quantum(const std::vector<double>& probs,
                                 const std::vector<DensityMatrix>& taus);

// one clean ancilla (subsystem A) + maximally mixed n-qubit register after
// the controlled unitary: blocks [[I, mu U^dag], [mu U, I]] / 2^(n+1)
BipartiteState dqc1_output(int register_qubits, double mu,
                           const ComplexMatrix& unitary);

// spin-j probe restricted to span{|m=+j>, |m=-j>} (subsystem A) correlated
// with a flag qubit: rho = (|j,0><j,0| + |-j,1><-j,1| + r offdiag) / 2.
// The restricted J_z on A is diag(j, -j); see spin_jz in metrology.
BipartiteState spin_probe(double j, double r);

// normalized so the maximally mixed two-qubit state gives 1; Werner gives 1-p^2
double linear_entropy_two_qubit(const DensityMatrix& rho);

// test/verify ensembles
ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng);
DensityMatrix random_density_matrix(Eigen::Index dim, Rng& rng);
ComplexVector random_pure_amplitudes(Eigen::Index dim, Rng& rng);
BipartiteState random_bipartite(Eigen::Index dA, Eigen::Index dB, Rng& rng);
BipartiteState random_pure_bipartite(Eigen::Index dA, Eigen::Index dB, Rng& rng);

}  // namespace lqu
