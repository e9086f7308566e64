#include "lqu/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lqu {

namespace {

// shared by DensityMatrix: validate, then build eig + sqrt from one solve
struct ValidatedState {
  ComplexMatrix matrix;
  EigenDecomposition eig;
  ComplexMatrix sqrt;
};

ValidatedState validate_state(const ComplexMatrix& m) {
  require_square(m, "DensityMatrix");
  const double tr_err = std::abs(m.trace() - Complex(1.0, 0.0));
  if (tr_err > tolerances().trace) {
    std::ostringstream os;
    os << "DensityMatrix: trace deviates from 1 by " << tr_err;
    throw validation_error(os.str());
  }
  EigenDecomposition eig = hermitian_eig(m);
  RealVector roots = eig.values;
  const double clip = tolerances().psd_clip;
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    if (roots[i] < -clip) {
      std::ostringstream os;
      os << "DensityMatrix: negative eigenvalue " << roots[i];
      throw validation_error(os.str());
    }
    // the +-clip band is rounding noise; snapping it to zero keeps the square
    // root from amplifying +1e-16 into 1e-8
    if (roots[i] <= clip) {
      eig.values[i] = 0.0;
      roots[i] = 0.0;
    } else {
      roots[i] = std::sqrt(roots[i]);
    }
  }
  ComplexMatrix root = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
  return {0.5 * (m + m.adjoint()), std::move(eig), 0.5 * (root + root.adjoint())};
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  ValidatedState v = validate_state(m);
  matrix_ = std::move(v.matrix);
  eig_ = std::move(v.eig);
  sqrt_ = std::move(v.sqrt);
}

double DensityMatrix::purity() const {
  return std::real(trace_product(matrix_, matrix_));
}

bool DensityMatrix::is_pure() const {
  return std::abs(purity() - 1.0) <= tolerances().purity;
}

ComplexVector DensityMatrix::dominant_eigenvector() const {
  return eig_.vectors.col(eig_.vectors.cols() - 1);
}

BipartiteState::BipartiteState(const ComplexMatrix& m, Eigen::Index dA,
                               Eigen::Index dB)
    : BipartiteState(DensityMatrix(m), dA, dB) {}

BipartiteState::BipartiteState(DensityMatrix rho, Eigen::Index dA, Eigen::Index dB)
    : rho_(std::move(rho)), dA_(dA), dB_(dB) {
  if (dA < 1 || dB < 1 || rho_.dim() != dA * dB) {
    std::ostringstream os;
    os << "BipartiteState: dimension " << rho_.dim() << " is not " << dA << "*" << dB;
    throw validation_error(os.str());
  }
}

ComplexMatrix partial_trace(const BipartiteState& rho, Subsystem keep) {
  return partial_trace(rho.matrix(), rho.dA(), rho.dB(), keep);
}

DensityMatrix pure_state(const ComplexVector& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !amplitudes.allFinite()) {
    throw validation_error("pure_state: amplitude vector must be nonzero and finite");
  }
  ComplexVector psi = amplitudes / norm;
  return DensityMatrix(psi * psi.adjoint());
}

BipartiteState pure_bipartite(const ComplexVector& amplitudes, Eigen::Index dA,
                              Eigen::Index dB) {
  return BipartiteState(pure_state(amplitudes), dA, dB);
}

BipartiteState bell_phi_plus() {
  ComplexVector psi = ComplexVector::Zero(4);
  psi[0] = psi[3] = 1.0 / std::numbers::sqrt2;
  return pure_bipartite(psi, 2, 2);
}

BipartiteState werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw validation_error("werner: p must lie in [0, 1]");
  }
  ComplexVector psi = ComplexVector::Zero(4);
  psi[0] = psi[3] = 1.0 / std::numbers::sqrt2;
  ComplexMatrix rho = p * (psi * psi.adjoint());
  rho += (1.0 - p) * 0.25 * identity(4);
  return BipartiteState(rho, 2, 2);
}

BipartiteState classical_quantum(const std::vector<double>& probs,
                                 const std::vector<DensityMatrix>& taus) {
  if (probs.empty() || probs.size() != taus.size()) {
    throw validation_error("classical_quantum: need one tau per probability");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw validation_error("classical_quantum: negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > tolerances().trace) {
    throw validation_error("classical_quantum: probabilities do not sum to 1");
  }
  const Eigen::Index dA = static_cast<Eigen::Index>(probs.size());
  const Eigen::Index dB = taus[0].dim();
  for (const auto& t : taus) {
    if (t.dim() != dB) {
      throw validation_error("classical_quantum: taus must share one dimension");
    }
  }
  ComplexMatrix rho = ComplexMatrix::Zero(dA * dB, dA * dB);
  for (Eigen::Index i = 0; i < dA; ++i) {
    rho.block(i * dB, i * dB, dB, dB) = probs[static_cast<std::size_t>(i)] *
                                        taus[static_cast<std::size_t>(i)].matrix();
  }
  return BipartiteState(rho, dA, dB);
}

BipartiteState dqc1_output(int register_qubits, double mu,
                           const ComplexMatrix& unitary) {
  if (register_qubits < 1) {
    throw validation_error("dqc1_output: need at least one register qubit");
  }
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw validation_error("dqc1_output: polarization mu must lie in [0, 1]");
  }
  const Eigen::Index n = Eigen::Index(1) << register_qubits;
  require_square(unitary, "dqc1_output");
  if (unitary.rows() != n) {
    std::ostringstream os;
    os << "dqc1_output: unitary is " << unitary.rows() << "-dimensional, expected 2^"
       << register_qubits << " = " << n;
    throw validation_error(os.str());
  }
  const double uerr = max_abs(unitary.adjoint() * unitary - identity(n));
  if (uerr > tolerances().unitarity) {
    std::ostringstream os;
    os << "dqc1_output: matrix is not unitary, ||U^dag U - I||_max = " << uerr;
    throw validation_error(os.str());
  }
  const double w = 1.0 / static_cast<double>(2 * n);
  ComplexMatrix rho(2 * n, 2 * n);
  rho.topLeftCorner(n, n) = w * identity(n);
  rho.bottomRightCorner(n, n) = w * identity(n);
  rho.topRightCorner(n, n) = (mu * w) * unitary.adjoint();
  rho.bottomLeftCorner(n, n) = (mu * w) * unitary;
  return BipartiteState(rho, 2, n);
}

BipartiteState spin_probe(double j, double r) {
  if (!(j > 0.0) || std::abs(2.0 * j - std::round(2.0 * j)) > 1e-9) {
    throw validation_error("spin_probe: j must be a positive half-integer");
  }
  if (!(r >= 0.0 && r <= 1.0)) {
    throw validation_error("spin_probe: r must lie in [0, 1]");
  }
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = rho(3, 3) = 0.5;
  rho(0, 3) = rho(3, 0) = 0.5 * r;
  return BipartiteState(rho, 2, 2);
}

double linear_entropy_two_qubit(const DensityMatrix& rho) {
  if (rho.dim() != 4) {
    throw validation_error("linear_entropy_two_qubit: state must be 4-dimensional");
  }
  return (4.0 / 3.0) * (1.0 - rho.purity());
}

ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  return 0.5 * (g + g.adjoint());
}

DensityMatrix random_density_matrix(Eigen::Index dim, Rng& rng) {
  // Hilbert-Schmidt ensemble: G G^dag normalized
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = Complex(rng.normal(), rng.normal());
  ComplexMatrix w = g * g.adjoint();
  return DensityMatrix(w / w.trace());
}

ComplexVector random_pure_amplitudes(Eigen::Index dim, Rng& rng) {
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

BipartiteState random_bipartite(Eigen::Index dA, Eigen::Index dB, Rng& rng) {
  return BipartiteState(random_density_matrix(dA * dB, rng), dA, dB);
}

BipartiteState random_pure_bipartite(Eigen::Index dA, Eigen::Index dB, Rng& rng) {
  return BipartiteState(pure_state(random_pure_amplitudes(dA * dB, rng)), dA, dB);
}

}  // namespace lqu
