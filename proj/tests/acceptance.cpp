// End-to-end acceptance gate: eight criteria, one report line each, exit
// code counts the failures. Tolerances and runtime budgets are pinned here.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lqu/channels.hpp"
#include "lqu/metrology.hpp"
#include "lqu/sweeps.hpp"
#include "lqu/verify.hpp"

using namespace lqu;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int number;
  const char* name;
  double time_limit;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double werner_lqu_reference(double p) {
  return (1.0 + p) / 2.0 - std::sqrt((1.0 - p) * (1.0 + 3.0 * p)) / 2.0;
}

Outcome criterion_bell() {
  const double v = lqu_closed_form(bell_phi_plus());
  Outcome out;
  out.passed = std::abs(v - 1.0) <= 1e-10;
  out.detail = "|lqu - 1| = " + fmt(std::abs(v - 1.0));
  return out;
}

Outcome criterion_faithfulness() {
  double worst_cq = 0.0;
  for (int t = 0; t < 50; ++t) {
    Rng rng(derive_seed(7, static_cast<std::uint64_t>(t)));
    const double p = 0.2 + 0.6 * rng.uniform();
    BipartiteState cq = classical_quantum(
        {p, 1.0 - p}, {random_density_matrix(3, rng), random_density_matrix(3, rng)});
    worst_cq = std::max(worst_cq, lqu_closed_form(cq));
  }
  double least_werner = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const double p = 0.05 * (k + 1);
    least_werner = std::min(least_werner, lqu_closed_form(werner(p)));
  }
  Outcome out;
  out.passed = worst_cq <= 1e-10 && least_werner >= 1e-3;
  out.detail = "max cq lqu = " + fmt(worst_cq) +
               ", min werner lqu = " + fmt(least_werner);
  return out;
}

Outcome criterion_oracle_equivalence() {
  double worst = 0.0;
  for (Eigen::Index dB : {2, 3}) {
    for (int t = 0; t < 100; ++t) {
      Rng rng(derive_seed(dB == 2 ? 11 : 13, static_cast<std::uint64_t>(t)));
      BipartiteState rho = random_bipartite(2, dB, rng);
      const double sampled =
          lqu_bruteforce(rho, Spectrum::pauli(), 2000, static_cast<std::uint64_t>(t));
      worst = std::max(worst, std::abs(sampled - lqu_closed_form(rho)));
    }
  }
  Outcome out;
  out.passed = worst <= 1e-6;
  out.detail = "max |bruteforce - closed| = " + fmt(worst) + " over 200 states";
  return out;
}

Outcome criterion_werner_sweep() {
  auto rows = werner_sweep(GridSpec::parse("0:1:101"));
  double var_dev = 0.0, entropy_dev = 0.0, lqu_dev = 0.0;
  for (const auto& r : rows) {
    var_dev = std::max(var_dev, std::abs(r.variance_sz - 1.0));
    entropy_dev = std::max(entropy_dev, std::abs(r.linear_entropy - (1.0 - r.p * r.p)));
    lqu_dev = std::max(lqu_dev, std::abs(r.lqu - werner_lqu_reference(r.p)));
  }
  Outcome out;
  out.passed = rows.size() == 101 && var_dev <= 1e-12 && entropy_dev <= 1e-10 &&
               lqu_dev <= 1e-9;
  out.detail = "deviations: variance " + fmt(var_dev) + ", entropy " +
               fmt(entropy_dev) + ", lqu " + fmt(lqu_dev);
  return out;
}

Outcome criterion_dqc1() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto rows = dqc1_sweep(8, GridSpec::parse("0:1:11"), haar_unitary(256, seed));
    for (const auto& r : rows) worst = std::max(worst, r.abs_error);
  }
  Outcome out;
  out.passed = worst <= 0.02;
  out.detail = "max |numeric - formula| = " + fmt(worst) + " over 5 seeds, n=8";
  return out;
}

Outcome criterion_metrology_chain() {
  Observable h_a(pauli(2));
  Observable h_full(tensor(pauli(2), identity(3)));
  double chain_violation = -std::numeric_limits<double>::infinity();
  double phi_drift = 0.0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(derive_seed(17, static_cast<std::uint64_t>(t)));
    BipartiteState probe = random_bipartite(2, 3, rng);
    const double skew_at_zero = skew_information(probe.state(), h_full);
    for (double phi : {0.0, 0.7, 2.1}) {
      BipartiteState moved = evolve_phase(probe, h_a, phi);
      const double four_u = 4.0 * lqu_closed_form(moved);
      const double four_i = 4.0 * skew_information(moved.state(), h_full);
      const double fisher = qfi(moved.state(), h_full);
      chain_violation =
          std::max({chain_violation, four_u - four_i, four_i - fisher});
      phi_drift = std::max(
          phi_drift, std::abs(skew_information(moved.state(), h_full) - skew_at_zero));
    }
  }
  Outcome out;
  out.passed = chain_violation <= 1e-8 && phi_drift <= 1e-9;
  out.detail = "worst chain gap = " + fmt(chain_violation) +
               ", phase drift = " + fmt(phi_drift);
  return out;
}

Outcome criterion_spin_probe() {
  double lqu_dev = 0.0, sld_dev = 0.0, oracle_rel = 0.0, heisenberg_dev = 0.0;
  for (double j : {0.5, 2.5, 5.0, 10.0, 50.0, 100.0}) {
    Observable jz_full(tensor(spin_jz(j).matrix(), identity(2)));
    for (double r : {0.1, 0.3, 0.6, 0.9, 1.0}) {
      BipartiteState probe = spin_probe(j, r);
      lqu_dev = std::max(lqu_dev, std::abs(j * j * lqu_closed_form(probe) -
                                           spin_probe_lqu_formula(j, r)));
      const double reference = 4.0 * j * j * r * r;
      sld_dev = std::max(sld_dev, std::abs(qfi(probe.state(), jz_full) - reference));
      const double probed = qfi_fidelity_oracle(probe.state(), jz_full);
      oracle_rel = std::max(oracle_rel, std::abs(probed - reference) /
                                            std::max(reference, 1e-8));
      if (r == 1.0) {
        heisenberg_dev = std::max(
            heisenberg_dev, std::abs(qfi(probe.state(), jz_full) - 4.0 * j * j));
      }
    }
  }
  bool thresholds_ok = true;
  for (double j : {5.0, 10.0, 50.0, 100.0}) {
    const double scaled = shot_noise_threshold(j) * std::sqrt(j);
    thresholds_ok = thresholds_ok && scaled >= 0.5 && scaled <= 2.0;
  }
  Outcome out;
  out.passed = lqu_dev <= 1e-9 && sld_dev <= 1e-8 && oracle_rel <= 1e-4 &&
               heisenberg_dev <= 1e-8 && thresholds_ok;
  out.detail = "lqu dev " + fmt(lqu_dev) + ", sld dev " + fmt(sld_dev) +
               ", oracle rel " + fmt(oracle_rel) +
               (thresholds_ok ? ", thresholds in [0.5,2]/sqrt(j)"
                              : ", THRESHOLD OUT OF RANGE");
  return out;
}

Outcome criterion_property_suites() {
  VerifyOptions options;  // shipped defaults: seed 1, per-property trial counts
  auto results = run_verify("all", options);
  bool channels_have_200 = false, monotonicity_has_200 = false;
  for (const auto& r : results) {
    if (r.name == "contractivity-B" && r.trials >= 200) channels_have_200 = true;
    if (r.name == "pure-monotonicity-A" && r.trials >= 200) monotonicity_has_200 = true;
  }
  const bool in_process = all_passed(results);

  // the shipped binary must agree: `verify --suite all` exits 0
  std::string cmd = std::string(LQU_CLI_PATH) + " verify --suite all > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

  Outcome out;
  out.passed = in_process && channels_have_200 && monotonicity_has_200 && exit_code == 0;
  std::ostringstream os;
  os << results.size() << " properties, all "
     << (in_process ? "green" : "NOT GREEN") << "; cli exit " << exit_code;
  out.detail = os.str();
  return out;
}

}  // namespace

int main() {
  lqu_closed_form(werner(0.1));  // warm-up outside any timed window

  std::vector<Criterion> criteria{
      {1, "bell-state normalization", 1e-3, criterion_bell},
      {2, "faithfulness (cq zero, werner positive)", 1.0, criterion_faithfulness},
      {3, "oracle equivalence, 200 states @ budget 2000", 120.0,
       criterion_oracle_equivalence},
      {4, "werner sweep reproduction, 101 points", 5.0, criterion_werner_sweep},
      {5, "dqc1 closed form, n=8, 5 seeds", 600.0, criterion_dqc1},
      {6, "metrology chain on 100 probes, 3 phases", 30.0, criterion_metrology_chain},
      {7, "spin probe: lqu, qfi, thresholds", 10.0, criterion_spin_probe},
      {8, "property suites + verify all", 300.0, criterion_property_suites},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const double t0 = now_seconds();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed = now_seconds() - t0;
    const bool in_time = elapsed <= c.time_limit;
    const bool ok = out.passed && in_time;
    if (!ok) ++failures;
    std::printf("%s  %d  %-46s %9.3f s (limit %g)  %s%s\n", ok ? "PASS" : "FAIL",
                c.number, c.name, elapsed, c.time_limit, out.detail.c_str(),
                in_time ? "" : "  [OVER TIME]");
  }
  std::printf("acceptance: %d/8 criteria passed\n", 8 - failures);
  return failures;
}
