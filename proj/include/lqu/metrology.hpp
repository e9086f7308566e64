#pragma once

#include "lqu/uncertainty.hpp"

namespace lqu {

// One-parameter family rho_phi = e^{-i phi H_A (x) I} rho e^{+i phi H_A (x) I}.
struct PhaseFamily {
  BipartiteState probe;
  Observable hamiltonian;  // acts on A alone
  double phase = 0.0;

  BipartiteState evolved() const;
};

// The chain 4 U <= 4 I <= F and the Cramer-Rao floor it implies.
struct EstimationBound {
  double lqu_bound;       // 4 * U_A^Lambda
  double skew_value;      // 4 * I(rho, H_A (x) I)
  double qfi;             // F(rho, H_A (x) I)
  long long repetitions;  // nu
  double variance_bound;  // 1 / (nu F); +inf when F = 0
};

BipartiteState evolve_phase(const BipartiteState& probe,
                            const Observable& hamiltonian_a, double phase);

// quantum Fisher information via the symmetric logarithmic derivative
double qfi(const DensityMatrix& rho, const Observable& h);

// finite-difference check through Uhlmann fidelity; step is scaled by the
// spectral radius of h so large generators keep their relative accuracy
double qfi_fidelity_oracle(const DensityMatrix& rho, const Observable& h,
                           double delta = 1e-4);

double fidelity(const DensityMatrix& rho, const DensityMatrix& chi);

// Full chain for a probe and a local generator with nondegenerate spectrum.
// For a qubit A the LQU term uses the closed form rescaled to the generator's
// spectrum width, otherwise the sampled minimizer with the given budget.
EstimationBound estimation_bound(const BipartiteState& probe,
                                 const Observable& hamiltonian_a,
                                 long long repetitions, int budget = 2000,
                                 std::uint64_t seed = 1);

// restricted J_z on span{|+j>, |-j>}: diag(j, -j)
Observable spin_jz(double j);

// j^2 (1 - sqrt(1 - r^2)) for the spin probe
double spin_probe_lqu_formula(double j, double r);

// smallest r on a 1e-5 grid with 4 j^2 (1 - sqrt(1 - r^2)) > 2j, i.e. where
// the discord bound beats shot noise; +inf when no r in (0, 1] qualifies
double shot_noise_threshold(double j);

}  // namespace lqu
