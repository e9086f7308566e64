// lqu: compute discord-like uncertainty quantities, reproduce the reference
// sweeps, and run the property-verification suites.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lqu/channels.hpp"
#include "lqu/matrix_io.hpp"
#include "lqu/metrology.hpp"
#include "lqu/sweeps.hpp"
#include "lqu/verify.hpp"
#include "lqu/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitVerifyFailed = 4;
constexpr int kExitUsage = 5;

double wall_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// usage problems the option parser cannot see (missing companion files etc.)
struct usage_error : std::runtime_error {
  explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

std::string join_args(const std::vector<std::string>& args) {
  std::string out = "lqu";
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

std::string meta_line(std::uint64_t seed, const std::string& cmd) {
  std::ostringstream os;
  os << "lqu " << lqu::kVersion << " | rng=" << lqu::kRngName << " | seed=" << seed
     << " | cmd: " << cmd;
  return os.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lqu::parse_error("cannot open output file: " + path);
  out << bytes;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
  } else {
    write_file(out_path, payload);
  }
}

struct ComputeArgs {
  std::string state_file;
  std::string what = "lqu";
  std::string observable_file;
  std::string chi_file;
  std::vector<double> lambda;
  int budget = 2000;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string out_path;
};

// observable file may hold the full AB operator or just the A-side block,
// which is then extended by identity on B
lqu::Observable load_observable(const std::string& path,
                                const lqu::MatrixFile& state_mf) {
  lqu::MatrixFile mf = lqu::read_matrix_file(path);
  lqu::Observable k = lqu::to_observable(mf);
  if (k.dim() == state_mf.dim) return k;
  if (state_mf.dA && k.dim() == *state_mf.dA) {
    return lqu::Observable(
        lqu::tensor(k.matrix(), lqu::identity(*state_mf.dB)));
  }
  std::ostringstream os;
  os << "observable dimension " << k.dim() << " matches neither the state ("
     << state_mf.dim << ") nor subsystem A";
  throw lqu::validation_error(os.str());
}

int run_compute(const ComputeArgs& args, const std::string& cmd) {
  lqu::MatrixFile state_mf = lqu::read_matrix_file(args.state_file);
  nlohmann::json report;
  report["tool"] = "lqu";
  report["version"] = lqu::kVersion;
  report["rng"] = lqu::kRngName;
  report["quantity"] = args.what;
  report["state_file"] = args.state_file;
  report["state_hash"] = lqu::file_hash(args.state_file);
  report["tolerances"] = nlohmann::json::parse(lqu::tolerances_json());
  report["command"] = cmd;

  double value = 0.0;
  if (args.what == "lqu") {
    lqu::BipartiteState rho = lqu::to_bipartite(state_mf);
    if (rho.dA() == 2 && args.lambda.empty()) {
      value = lqu::lqu_closed_form(rho);
      report["method"] = "closed-form";
    } else if (rho.dA() == 2) {
      lqu::RealVector lam(2);
      if (args.lambda.size() != 2) {
        throw usage_error("--lambda must list exactly dA = 2 values");
      }
      lam << args.lambda[0], args.lambda[1];
      lqu::Spectrum spectrum(lam);  // validates nondegeneracy
      const double half_width = 0.5 * (spectrum.values()[1] - spectrum.values()[0]);
      value = half_width * half_width * lqu::lqu_closed_form(rho);
      report["method"] = "closed-form";
      report["lambda"] = args.lambda;
    } else {
      if (args.lambda.empty()) {
        throw usage_error("--lambda is required for lqu when dA > 2");
      }
      if (static_cast<Eigen::Index>(args.lambda.size()) != rho.dA()) {
        throw usage_error("--lambda must list exactly dA values");
      }
      lqu::RealVector lam(rho.dA());
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        lam[i] = args.lambda[static_cast<std::size_t>(i)];
      }
      value = lqu::lqu_bruteforce(rho, lqu::Spectrum(lam), args.budget, args.seed);
      report["method"] = "bruteforce";
      report["lambda"] = args.lambda;
      report["budget"] = args.budget;
      report["seed"] = args.seed;
    }
  } else if (args.what == "skew" || args.what == "variance" || args.what == "qfi") {
    if (args.observable_file.empty()) {
      throw usage_error("--observable is required for " + args.what);
    }
    lqu::DensityMatrix rho = lqu::to_density(state_mf);
    lqu::Observable k = load_observable(args.observable_file, state_mf);
    if (args.what == "skew") {
      value = lqu::skew_information(rho, k);
    } else if (args.what == "variance") {
      value = lqu::variance(rho, k);
    } else {
      value = lqu::qfi(rho, k);
    }
    report["observable_file"] = args.observable_file;
    report["observable_hash"] = lqu::file_hash(args.observable_file);
  } else if (args.what == "hellinger") {
    if (args.chi_file.empty()) {
      throw usage_error("--chi (second state file) is required for hellinger");
    }
    lqu::DensityMatrix rho = lqu::to_density(state_mf);
    lqu::DensityMatrix chi = lqu::to_density(lqu::read_matrix_file(args.chi_file));
    value = lqu::hellinger_sq(rho, chi);
    report["chi_file"] = args.chi_file;
    report["chi_hash"] = lqu::file_hash(args.chi_file);
  } else {
    throw usage_error("unknown quantity \"" + args.what + "\"");
  }

  report["value"] = value;
  char rendered[32];
  std::snprintf(rendered, sizeof rendered, "%.12e", value);
  report["value_text"] = rendered;

  std::string payload;
  if (args.format == "json") {
    payload = report.dump(2) + "\n";
  } else if (args.format == "text") {
    payload = std::string(rendered) + "\n";
  } else {
    throw usage_error("--format must be text or json for compute");
  }
  emit(payload, args.out_path);
  return kExitOk;
}

template <typename Record>
nlohmann::json sweep_rows_json(const std::vector<Record>& rows);

template <>
nlohmann::json sweep_rows_json(const std::vector<lqu::WernerRecord>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"p", r.p},
                   {"variance_sz", r.variance_sz},
                   {"lqu", r.lqu},
                   {"linear_entropy", r.linear_entropy}});
  }
  return arr;
}

template <>
nlohmann::json sweep_rows_json(const std::vector<lqu::Dqc1Record>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"mu", r.mu},
                   {"lqu_numeric", r.lqu_numeric},
                   {"lqu_formula", r.lqu_formula},
                   {"abs_error", r.abs_error}});
  }
  return arr;
}

template <>
nlohmann::json sweep_rows_json(const std::vector<lqu::SpinProbeRecord>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"j", r.j},
                   {"r", r.r},
                   {"lqu_formula", r.lqu_formula},
                   {"lqu_numeric", r.lqu_numeric},
                   {"qfi", r.qfi},
                   {"four_lqu", r.four_lqu},
                   {"var_bound", r.var_bound},
                   {"shot_noise", r.shot_noise},
                   {"heisenberg", r.heisenberg}});
  }
  return arr;
}

template <typename Record>
int emit_sweep(const std::vector<Record>& rows, const std::string& csv,
               const std::string& format, const std::string& out_path,
               const std::string& meta, double seconds) {
  if (format == "csv") {
    emit(csv, out_path);
  } else if (format == "json") {
    nlohmann::json j;
    j["meta"] = meta;
    j["rows"] = sweep_rows_json(rows);
    emit(j.dump(2) + "\n", out_path);
  } else {
    throw usage_error("--format must be csv or json for sweeps");
  }
  std::cerr << "wrote " << rows.size() << " rows in " << seconds << " s\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local quantum uncertainty: discord measure, sweeps and checks"};
  app.require_subcommand(1);

  ComputeArgs compute;
  CLI::App* cmd_compute =
      app.add_subcommand("compute", "compute one scalar quantity for a state file");
  cmd_compute->add_option("state", compute.state_file, "state matrix file (JSON)")
      ->required();
  cmd_compute->add_option("--what", compute.what,
                          "lqu | skew | qfi | hellinger | variance");
  cmd_compute->add_option("--observable", compute.observable_file,
                          "observable matrix file (skew/qfi/variance)");
  cmd_compute->add_option("--chi", compute.chi_file,
                          "second state file (hellinger)");
  cmd_compute->add_option("--lambda", compute.lambda,
                          "comma-separated spectrum for the lqu search")
      ->delimiter(',');
  cmd_compute->add_option("--budget", compute.budget, "search budget (lqu, dA > 2)");
  cmd_compute->add_option("--seed", compute.seed, "search seed (lqu, dA > 2)");
  cmd_compute->add_option("--format", compute.format, "text | json");
  cmd_compute->add_option("--out", compute.out_path, "write output here instead of stdout");

  std::string grid_text = "0:1:101";
  std::string out_path;
  std::string format = "csv";
  CLI::App* cmd_werner =
      app.add_subcommand("werner-sweep", "Werner family: variance, lqu, entropy");
  cmd_werner->add_option("--grid", grid_text, "p grid as start:stop:steps");
  cmd_werner->add_option("--out", out_path, "output path (default stdout)");
  cmd_werner->add_option("--format", format, "csv | json");

  int dqc1_n = 4;
  std::uint64_t seed = 1;
  std::string unitary_file;
  std::string dqc1_grid_text = "0:1:11";
  CLI::App* cmd_dqc1 = app.add_subcommand(
      "dqc1-sweep", "one-clean-qubit output: numeric lqu vs closed formula");
  cmd_dqc1->add_option("--n", dqc1_n, "register qubits (1..12)");
  cmd_dqc1->add_option("--grid", dqc1_grid_text, "mu grid as start:stop:steps");
  cmd_dqc1->add_option("--seed", seed, "seed for the Haar register unitary");
  cmd_dqc1->add_option("--unitary", unitary_file,
                       "unitary matrix file (overrides --seed)");
  cmd_dqc1->add_option("--out", out_path, "output path (default stdout)");
  cmd_dqc1->add_option("--format", format, "csv | json");

  std::vector<double> spin_js{5.0, 10.0, 50.0, 100.0};
  std::string spin_grid_text = "0.01:1:100";
  long long spin_nu = 100;
  CLI::App* cmd_spin = app.add_subcommand(
      "spin-probe-sweep", "spin-j probe: lqu, qfi and estimation bounds");
  cmd_spin->add_option("--j", spin_js, "comma-separated spin values")->delimiter(',');
  cmd_spin->add_option("--grid", spin_grid_text, "r grid as start:stop:steps, r > 0");
  cmd_spin->add_option("--nu", spin_nu, "measurement repetitions");
  cmd_spin->add_option("--out", out_path, "output path (default stdout)");
  cmd_spin->add_option("--format", format, "csv | json");

  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  int verify_trials = 0;
  bool verify_serial = false;
  bool corrupt_tolerances = false;
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "run the statistical property suites");
  cmd_verify->add_option("--suite", suite, "all | skew | lqu | metrology | channels");
  cmd_verify->add_option("--seed", verify_seed, "base seed for all trials");
  cmd_verify->add_option("--trials", verify_trials,
                         "override per-property trial counts (0 = defaults)");
  cmd_verify->add_flag("--serial", verify_serial, "disable the parallel trial loop");
  cmd_verify
      ->add_flag("--corrupt-tolerances", corrupt_tolerances,
                 "self-test: force every property to fail")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::vector<std::string> raw_args(argv + 1, argv + argc);
  const std::string cmd = join_args(raw_args);

  try {
    if (cmd_compute->parsed()) {
      return run_compute(compute, cmd);
    }
    if (cmd_werner->parsed()) {
      const double t0 = wall_seconds();
      auto rows = lqu::werner_sweep(lqu::GridSpec::parse(grid_text));
      const double dt = wall_seconds() - t0;
      return emit_sweep(rows, lqu::werner_csv(rows, meta_line(0, cmd)), format,
                        out_path, meta_line(0, cmd), dt);
    }
    if (cmd_dqc1->parsed()) {
      const double t0 = wall_seconds();
      lqu::ComplexMatrix u;
      if (!unitary_file.empty()) {
        u = lqu::to_unitary(lqu::read_matrix_file(unitary_file));
      } else {
        if (dqc1_n < 1 || dqc1_n > 12) {
          throw lqu::validation_error("dqc1 sweep: n must lie in [1, 12]");
        }
        u = lqu::haar_unitary(Eigen::Index(1) << dqc1_n, seed);
      }
      auto rows = lqu::dqc1_sweep(dqc1_n, lqu::GridSpec::parse(dqc1_grid_text), u);
      const double dt = wall_seconds() - t0;
      return emit_sweep(rows, lqu::dqc1_csv(rows, meta_line(seed, cmd)), format,
                        out_path, meta_line(seed, cmd), dt);
    }
    if (cmd_spin->parsed()) {
      const double t0 = wall_seconds();
      auto rows = lqu::spin_probe_sweep(spin_js, lqu::GridSpec::parse(spin_grid_text),
                                        spin_nu);
      const double dt = wall_seconds() - t0;
      return emit_sweep(rows, lqu::spin_probe_csv(rows, meta_line(0, cmd)), format,
                        out_path, meta_line(0, cmd), dt);
    }
    if (cmd_verify->parsed()) {
      lqu::VerifyOptions options;
      options.seed = verify_seed;
      options.trials = verify_trials;
      options.parallel = !verify_serial;
      options.corrupt_tolerances = corrupt_tolerances;
      const double t0 = wall_seconds();
      auto results = lqu::run_verify(suite, options);
      const double dt = wall_seconds() - t0;
      std::cout << lqu::render_verify_report(results, options, dt);
      return lqu::all_passed(results) ? kExitOk : kExitVerifyFailed;
    }
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const lqu::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const lqu::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
