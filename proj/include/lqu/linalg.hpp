#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "lqu/errors.hpp"
#include "lqu/rng.hpp"
#include "lqu/tolerances.hpp"

namespace lqu {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Composite index convention used throughout: subsystem A is the slow index,
// row = iA * dB + iB. So sigma_z (x) I = diag(1, 1, -1, -1).
enum class Subsystem { A, B };

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are the matching orthonormal eigenvectors

  ComplexMatrix reconstruct() const;
};

double max_abs(const ComplexMatrix& m);
// ||M - M^dag||_max, the diagnostic quoted by hermiticity failures.
double hermiticity_residual(const ComplexMatrix& m);
void require_finite(const ComplexMatrix& m, const char* what);
void require_square(const ComplexMatrix& m, const char* what);

// Checks Hermiticity (relative tolerance), symmetrizes, and diagonalizes.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

// Unique PSD square root via the eigensystem. Eigenvalues in [-psd_clip, 0)
// are treated as rounding noise and clipped; anything lower is an error.
ComplexMatrix psd_sqrt(const ComplexMatrix& rho);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index dA,
                            Eigen::Index dB, Subsystem keep);

// Haar-distributed unitary: QR of a complex Ginibre matrix with the R diagonal
// phases folded back into Q.
ComplexMatrix haar_unitary(Eigen::Index dim, Rng& rng);
ComplexMatrix haar_unitary(Eigen::Index dim, std::uint64_t seed);

// tr(a*b) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix identity(Eigen::Index dim);
// i = 0, 1, 2 -> sigma_x, sigma_y, sigma_z
const ComplexMatrix& pauli(int i);

}  // namespace lqu
