#pragma once

#include <string>
#include <vector>

#include "lqu/metrology.hpp"

namespace lqu {

// "start:stop:steps" with steps points inclusive of both ends
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int steps = 0;

  static GridSpec parse(const std::string& text);
  std::vector<double> points() const;
};

// Sweep rows carry the per-point wall time in memory for reporting; it is
// never written into the CSV, which must be byte-stable across runs.
struct WernerRecord {
  double p;
  double variance_sz;
  double lqu;
  double linear_entropy;
  double seconds;
};

struct Dqc1Record {
  int n;
  double mu;
  double lqu_numeric;
  double lqu_formula;
  double abs_error;
  double seconds;
};

struct SpinProbeRecord {
  double j;
  double r;
  double lqu_formula;
  double lqu_numeric;
  double qfi;
  double four_lqu;
  double var_bound;
  double shot_noise;
  double heisenberg;
  double seconds;
};

std::vector<WernerRecord> werner_sweep(const GridSpec& p_grid);
std::vector<WernerRecord> werner_sweep_serial(const GridSpec& p_grid);

// 1 <= n <= 12; the unitary must be 2^n-dimensional
std::vector<Dqc1Record> dqc1_sweep(int n, const GridSpec& mu_grid,
                                   const ComplexMatrix& unitary);
std::vector<Dqc1Record> dqc1_sweep_serial(int n, const GridSpec& mu_grid,
                                          const ComplexMatrix& unitary);

// r grid must stay inside (0, 1]: var_bound = 1/(nu qfi) diverges at r = 0
std::vector<SpinProbeRecord> spin_probe_sweep(const std::vector<double>& js,
                                              const GridSpec& r_grid,
                                              long long nu);
std::vector<SpinProbeRecord> spin_probe_sweep_serial(const std::vector<double>& js,
                                                     const GridSpec& r_grid,
                                                     long long nu);

// CSV bodies: "# <meta>" comment first, then the header row, then one line per
// record, all doubles in "%.12e", "\n" endings
std::string werner_csv(const std::vector<WernerRecord>& rows, const std::string& meta);
std::string dqc1_csv(const std::vector<Dqc1Record>& rows, const std::string& meta);
std::string spin_probe_csv(const std::vector<SpinProbeRecord>& rows,
                           const std::string& meta);

}  // namespace lqu
