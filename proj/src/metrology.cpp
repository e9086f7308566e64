#include "lqu/metrology.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lqu {

BipartiteState PhaseFamily::evolved() const {
  return evolve_phase(probe, hamiltonian, phase);
}

BipartiteState evolve_phase(const BipartiteState& probe,
                            const Observable& hamiltonian_a, double phase) {
  if (hamiltonian_a.dim() != probe.dA()) {
    std::ostringstream os;
    os << "evolve_phase: generator dimension " << hamiltonian_a.dim()
       << " != dA = " << probe.dA();
    throw validation_error(os.str());
  }
  ComplexVector phases(hamiltonian_a.dim());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -phase * hamiltonian_a.eigenvalues()[k]));
  }
  ComplexMatrix ua = hamiltonian_a.eigenvectors() * phases.asDiagonal() *
                     hamiltonian_a.eigenvectors().adjoint();
  ComplexMatrix u = tensor(ua, identity(probe.dB()));
  return BipartiteState(u * probe.matrix() * u.adjoint(), probe.dA(), probe.dB());
}

double qfi(const DensityMatrix& rho, const Observable& h) {
  if (rho.dim() != h.dim()) {
    throw validation_error("qfi: state and generator dimensions differ");
  }
  const RealVector& p = rho.eigenvalues();
  ComplexMatrix hm = rho.eigenvectors().adjoint() * h.matrix() * rho.eigenvectors();
  const double cutoff = tolerances().sld_cutoff;
  double f = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    for (Eigen::Index j = 0; j < p.size(); ++j) {
      const double sum = p[i] + p[j];
      if (sum <= cutoff) continue;
      const double diff = p[i] - p[j];
      f += (diff * diff / sum) * std::norm(hm(i, j));
    }
  }
  return 2.0 * f;
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& chi) {
  if (rho.dim() != chi.dim()) {
    throw validation_error("fidelity: states must share one dimension");
  }
  // F = (tr sqrt( sqrt(rho) chi sqrt(rho) ))^2. The nonzero spectrum of
  // sqrt(rho) chi sqrt(rho) is that of its compression onto the support of
  // rho. Working in the compressed basis keeps the kernel's rounding noise
  // out of tr sqrt, where every stray 1e-16 eigenvalue would surface as 1e-8.
  const RealVector& p = rho.eigenvalues();  // ascending, noise snapped to 0
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) ++rank;
  }
  ComplexMatrix basis = rho.eigenvectors().rightCols(rank);
  ComplexVector root = p.tail(rank).cwiseSqrt().cast<Complex>();
  ComplexMatrix compressed = root.asDiagonal() *
                             (basis.adjoint() * chi.matrix() * basis).eval() *
                             root.asDiagonal();
  EigenDecomposition eig = hermitian_eig(compressed);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values[i] > 0.0) tr += std::sqrt(eig.values[i]);
  }
  return tr * tr;
}

double qfi_fidelity_oracle(const DensityMatrix& rho, const Observable& h,
                           double delta) {
  if (!(delta > 0.0)) {
    throw validation_error("qfi_fidelity_oracle: step must be positive");
  }
  auto dip_at = [&](double step) {
    ComplexVector phases(h.dim());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
      phases[k] = std::exp(Complex(0.0, -step * h.eigenvalues()[k]));
    }
    ComplexMatrix u =
        h.eigenvectors() * phases.asDiagonal() * h.eigenvectors().adjoint();
    DensityMatrix shifted(u * rho.matrix() * u.adjoint());
    return 1.0 - std::sqrt(std::min(1.0, fidelity(rho, shifted)));
  };
  // The fidelity dip is F step^2 / 8. Two error sources compete: truncation
  // grows as (|H| step)^2, cancellation blows up once the dip nears rounding
  // noise. Cap the phase swing at 3e-3 and grow the step until the dip
  // clears the noise floor or the cap is hit.
  const double radius = std::max(std::abs(h.eigenvalues().minCoeff()),
                                 std::abs(h.eigenvalues().maxCoeff()));
  const double max_step = radius > 0.0 ? 3e-3 / radius : 100.0 * delta;
  double step = std::min(radius > 0.0 ? std::min(delta, 1e-3 / radius) : delta,
                         max_step);
  double dip = dip_at(step);
  while (dip < 1e-10 && step < max_step) {
    step = std::min(4.0 * step, max_step);
    dip = dip_at(step);
  }
  return 8.0 * dip / (step * step);
}

EstimationBound estimation_bound(const BipartiteState& probe,
                                 const Observable& hamiltonian_a,
                                 long long repetitions, int budget,
                                 std::uint64_t seed) {
  if (repetitions < 1) {
    throw validation_error("estimation_bound: repetitions must be >= 1");
  }
  // throws when the generator spectrum is degenerate
  Spectrum lambda(hamiltonian_a.eigenvalues());

  double u;
  if (probe.dA() == 2) {
    // closed form is stated for the sigma spectrum (-1, 1); any qubit ruler
    // (a, b) is an affine image, and the shift drops out of the skew term
    const double half_width = 0.5 * (lambda.values()[1] - lambda.values()[0]);
    u = half_width * half_width * lqu_closed_form(probe);
  } else {
    u = lqu_bruteforce(probe, lambda, budget, seed);
  }

  Observable full(tensor(hamiltonian_a.matrix(), identity(probe.dB())));
  const double skew = skew_information(probe.state(), full);
  const double fisher = qfi(probe.state(), full);

  EstimationBound bound;
  bound.lqu_bound = 4.0 * u;
  bound.skew_value = 4.0 * skew;
  bound.qfi = fisher;
  bound.repetitions = repetitions;
  bound.variance_bound =
      fisher > 0.0 ? 1.0 / (static_cast<double>(repetitions) * fisher)
                   : std::numeric_limits<double>::infinity();

  const double chain_tol = 1e-8;
  if (bound.lqu_bound > bound.skew_value + chain_tol ||
      bound.skew_value > bound.qfi + chain_tol) {
    std::ostringstream os;
    os << "estimation_bound: chain violated, 4U = " << bound.lqu_bound
       << ", 4I = " << bound.skew_value << ", F = " << bound.qfi;
    throw validation_error(os.str());
  }
  return bound;
}

Observable spin_jz(double j) {
  if (!(j > 0.0) || std::abs(2.0 * j - std::round(2.0 * j)) > 1e-9) {
    throw validation_error("spin_jz: j must be a positive half-integer");
  }
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = j;
  m(1, 1) = -j;
  return Observable(m);
}

double spin_probe_lqu_formula(double j, double r) {
  if (!(j > 0.0)) throw validation_error("spin_probe_lqu_formula: j must be positive");
  if (!(r >= 0.0 && r <= 1.0)) {
    throw validation_error("spin_probe_lqu_formula: r must lie in [0, 1]");
  }
  return j * j * (1.0 - std::sqrt(1.0 - r * r));
}

double shot_noise_threshold(double j) {
  if (!(j > 0.0)) throw validation_error("shot_noise_threshold: j must be positive");
  const int steps = 100000;
  for (int k = 1; k <= steps; ++k) {
    const double r = static_cast<double>(k) / steps;
    if (4.0 * spin_probe_lqu_formula(j, r) > 2.0 * j) return r;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace lqu
