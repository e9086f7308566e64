// lqu-bench: times the OpenMP kernels against their serial reference
// implementations and checks that both produce identical results.
#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "lqu/sweeps.hpp"
#include "lqu/version.hpp"

namespace {

double wall_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Row {
  std::string kernel;
  double serial_s;
  double parallel_s;
  bool match;
};

void print_row(const Row& r) {
  std::printf("%-28s %10.3f s %10.3f s %8.2fx   %s\n", r.kernel.c_str(), r.serial_s,
              r.parallel_s, r.serial_s / r.parallel_s, r.match ? "match" : "MISMATCH");
}

template <typename Fn>
double timed(Fn&& fn, double* out) {
  const double t0 = wall_seconds();
  *out = fn();
  return wall_seconds() - t0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel kernel timings"};
  int budget = 20000;
  std::uint64_t seed = 7;
  app.add_option("--budget", budget, "brute-force sample budget");
  app.add_option("--seed", seed, "seed for the random inputs");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("lqu-bench %s | OpenMP threads: %d\n", lqu::kVersion,
              omp_get_max_threads());
#else
  std::printf("lqu-bench %s | OpenMP not enabled in this build\n", lqu::kVersion);
#endif
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    lqu::Rng rng(seed);
    lqu::BipartiteState rho = lqu::random_bipartite(2, 3, rng);
    lqu::Spectrum lambda = lqu::Spectrum::pauli();
    double serial_value = 0.0, parallel_value = 0.0;
    Row row;
    row.kernel = "lqu-bruteforce 2x3";
    row.serial_s = timed(
        [&] { return lqu::lqu_bruteforce_serial(rho, lambda, budget, seed); },
        &serial_value);
    row.parallel_s = timed(
        [&] { return lqu::lqu_bruteforce(rho, lambda, budget, seed); },
        &parallel_value);
    row.match = serial_value == parallel_value;
    print_row(row);
  }

  {
    lqu::GridSpec grid{0.0, 1.0, 2001};
    double s = 0.0, p = 0.0;
    Row row;
    row.kernel = "werner-sweep 2001";
    std::vector<lqu::WernerRecord> a, b;
    row.serial_s = timed(
        [&] {
          a = lqu::werner_sweep_serial(grid);
          return a.back().lqu;
        },
        &s);
    row.parallel_s = timed(
        [&] {
          b = lqu::werner_sweep(grid);
          return b.back().lqu;
        },
        &p);
    row.match = lqu::werner_csv(a, "x") == lqu::werner_csv(b, "x");
    print_row(row);
  }

  {
    lqu::GridSpec grid{0.01, 1.0, 200};
    std::vector<double> js{5.0, 10.0, 50.0, 100.0};
    double s = 0.0, p = 0.0;
    Row row;
    row.kernel = "spin-probe-sweep 4x200";
    std::vector<lqu::SpinProbeRecord> a, b;
    row.serial_s = timed(
        [&] {
          a = lqu::spin_probe_sweep_serial(js, grid, 100);
          return a.back().qfi;
        },
        &s);
    row.parallel_s = timed(
        [&] {
          b = lqu::spin_probe_sweep(js, grid, 100);
          return b.back().qfi;
        },
        &p);
    row.match = lqu::spin_probe_csv(a, "x") == lqu::spin_probe_csv(b, "x");
    print_row(row);
  }

  {
    lqu::ComplexMatrix u = lqu::haar_unitary(64, seed);
    lqu::GridSpec grid{0.0, 1.0, 11};
    double s = 0.0, p = 0.0;
    Row row;
    row.kernel = "dqc1-sweep n=6";
    std::vector<lqu::Dqc1Record> a, b;
    row.serial_s = timed(
        [&] {
          a = lqu::dqc1_sweep_serial(6, grid, u);
          return a.back().lqu_numeric;
        },
        &s);
    row.parallel_s = timed(
        [&] {
          b = lqu::dqc1_sweep(6, grid, u);
          return b.back().lqu_numeric;
        },
        &p);
    row.match = lqu::dqc1_csv(a, "x") == lqu::dqc1_csv(b, "x");
    print_row(row);
  }

  return 0;
}
