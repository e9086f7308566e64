#pragma once

#include <string>

namespace lqu {

// Every numeric guard in the library, pinned in one place. The environment
// variable LQU_TOLERANCES may override individual fields with a JSON map,
// e.g. LQU_TOLERANCES='{"psd_clip":1e-9}'. It is read once, before any
// computation; unknown keys are an error.
struct Tolerances {
  double hermiticity = 1e-9;    // relative max-norm bound on M - M^dag
  double trace = 1e-9;          // |tr(rho) - 1|
  double psd_clip = 1e-10;      // eigenvalues in [-psd_clip, 0) are clipped to 0
  double unitarity = 1e-9;      // ||U^dag U - I||_max for supplied unitaries
  double spectrum_gap = 1e-9;   // minimum gap of a nondegenerate spectrum
  double completeness = 1e-9;   // Kraus completeness residual
  double w_imag = 1e-10;        // imaginary residue allowed in W-matrix entries
  double purity = 1e-9;         // |tr(rho^2) - 1| for pure-state preconditions
  double outcome_prob = 1e-12;  // selective outcomes below this are dropped
  double sld_cutoff = 1e-12;    // p_i + p_j cutoff in the Fisher information sum
  double lqu_clamp = 1e-10;     // closed-form LQU clamped to [0,1] within this margin
};

const Tolerances& tolerances();

// JSON rendering of the active tolerances, for report metadata.
std::string tolerances_json();

}  // namespace lqu
