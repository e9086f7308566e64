#include "lqu/linalg.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace lqu {

ComplexMatrix EigenDecomposition::reconstruct() const {
  return vectors * values.asDiagonal() * vectors.adjoint();
}

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw validation_error(std::string(what) + ": non-finite entries");
  }
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw validation_error(os.str());
  }
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  require_square(m, "hermitian_eig");
  require_finite(m, "hermitian_eig");
  const double scale = max_abs(m);
  const double residual = hermiticity_residual(m);
  if (residual > tolerances().hermiticity * scale) {
    std::ostringstream os;
    os << "hermitian_eig: matrix is not Hermitian, residual ||M - M^dag||_max = "
       << residual << " exceeds " << tolerances().hermiticity << " * " << scale;
    throw validation_error(os.str());
  }
  ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw validation_error("hermitian_eig: eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix psd_sqrt(const ComplexMatrix& rho) {
  EigenDecomposition eig = hermitian_eig(rho);
  RealVector vals = eig.values;
  const double clip = tolerances().psd_clip;
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < -clip) {
      std::ostringstream os;
      os << "psd_sqrt: matrix is not positive semidefinite, eigenvalue "
         << vals[i] << " below -" << clip;
      throw validation_error(os.str());
    }
    // |eigenvalue| <= clip is rounding noise either way; sqrt would amplify
    // +1e-16 into 1e-8, so snap the whole band to zero
    vals[i] = vals[i] > clip ? std::sqrt(vals[i]) : 0.0;
  }
  ComplexMatrix root = eig.vectors * vals.asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (root + root.adjoint());  // scrub rounding off the Hermitian result
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Eigen::Index dA,
                            Eigen::Index dB, Subsystem keep) {
  require_square(rho, "partial_trace");
  if (dA < 1 || dB < 1 || rho.rows() != dA * dB) {
    std::ostringstream os;
    os << "partial_trace: dimension mismatch, matrix is " << rho.rows() << "x"
       << rho.cols() << " but dA*dB = " << dA * dB;
    throw validation_error(os.str());
  }
  if (keep == Subsystem::A) {
    ComplexMatrix out = ComplexMatrix::Zero(dA, dA);
    for (Eigen::Index i = 0; i < dA; ++i)
      for (Eigen::Index j = 0; j < dA; ++j)
        for (Eigen::Index k = 0; k < dB; ++k)
          out(i, j) += rho(i * dB + k, j * dB + k);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
  for (Eigen::Index i = 0; i < dB; ++i)
    for (Eigen::Index j = 0; j < dB; ++j)
      for (Eigen::Index k = 0; k < dA; ++k)
        out(i, j) += rho(k * dB + i, k * dB + j);
  return out;
}

ComplexMatrix haar_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw validation_error("haar_unitary: dimension must be positive");
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)      // column-major fill keeps the
    for (Eigen::Index i = 0; i < dim; ++i)    // draw order well defined
      g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fold the phases of diag(R) into Q to make the distribution Haar
  for (Eigen::Index j = 0; j < dim; ++j) {
    Complex d = r(j, j);
    double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

ComplexMatrix haar_unitary(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw validation_error("trace_product: incompatible dimensions");
  }
  return (a.transpose().cwiseProduct(b)).sum();
}

ComplexMatrix identity(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

const ComplexMatrix& pauli(int i) {
  static const std::array<ComplexMatrix, 3> sigma = [] {
    std::array<ComplexMatrix, 3> s;
    s[0] = ComplexMatrix{{Complex(0, 0), Complex(1, 0)}, {Complex(1, 0), Complex(0, 0)}};
    s[1] = ComplexMatrix{{Complex(0, 0), Complex(0, -1)}, {Complex(0, 1), Complex(0, 0)}};
    s[2] = ComplexMatrix{{Complex(1, 0), Complex(0, 0)}, {Complex(0, 0), Complex(-1, 0)}};
    return s;
  }();
  if (i < 0 || i > 2) throw validation_error("pauli: index must be 0, 1 or 2");
  return sigma[static_cast<std::size_t>(i)];
}

}  // namespace lqu
