// Drives the installed binary through a shell: output bytes, exit codes,
// and reproducibility promises as a user would see them.
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "lqu/matrix_io.hpp"
#include "lqu/metrology.hpp"
#include "lqu/version.hpp"

using namespace lqu;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args, const std::string& env = "",
                  bool merge_stderr = true) {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += LQU_CLI_PATH;
  cmd += " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  RunResult result;
  if (!pipe) return result;
  char buffer[4096];
  while (std::size_t got = std::fread(buffer, 1, sizeof buffer, pipe)) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string scratch_path(const std::string& name) {
  static const std::filesystem::path dir = [] {
    std::filesystem::path p = "cli_scratch";
    std::filesystem::create_directories(p);
    return p;
  }();
  return (dir / name).string();
}

std::string write_state(const std::string& name, const ComplexMatrix& m,
                        MatrixKind kind, Eigen::Index dA = 0, Eigen::Index dB = 0) {
  MatrixFile mf;
  mf.kind = kind;
  mf.dim = m.rows();
  if (dA > 0) {
    mf.dA = dA;
    mf.dB = dB;
  }
  mf.entries = m;
  const std::string path = scratch_path(name);
  write_matrix_file(path, mf);
  return path;
}

double parse_scalar(const std::string& text) { return std::stod(text); }

std::string bell_file() {
  return write_state("bell.json", bell_phi_plus().matrix(), MatrixKind::Density, 2, 2);
}

std::string werner05_file() {
  return write_state("werner05.json", werner(0.5).matrix(), MatrixKind::Density, 2, 2);
}

}  // namespace

TEST_CASE("compute lqu on reference states") {
  const std::string bell = bell_file();
  RunResult r = run_cli("compute " + bell + " --what lqu");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "1.000000000000e+00\n");

  Rng rng(301);
  BipartiteState cq = classical_quantum(
      {0.4, 0.6}, {random_density_matrix(3, rng), random_density_matrix(3, rng)});
  const std::string cq_path =
      write_state("cq.json", cq.matrix(), MatrixKind::Density, 2, 3);
  RunResult rc = run_cli("compute " + cq_path);
  CHECK(rc.exit_code == 0);
  CHECK(parse_scalar(rc.output) <= 1e-10);

  const std::string w05 = werner05_file();
  RunResult rw = run_cli("compute " + w05 + " --what lqu");
  CHECK(rw.exit_code == 0);
  const double expected = 0.75 - std::sqrt(0.5 * 2.5) / 2.0;
  CHECK(std::abs(parse_scalar(rw.output) - expected) <= 1e-9);
}

TEST_CASE("compute skew, variance and qfi against the library") {
  const std::string w05 = werner05_file();
  const std::string sz = write_state("sigma_z_A.json", pauli(2), MatrixKind::Observable);

  Observable zi(tensor(pauli(2), identity(2)));
  DensityMatrix rho = werner(0.5).state();

  RunResult skew = run_cli("compute " + w05 + " --what skew --observable " + sz);
  CHECK(skew.exit_code == 0);
  CHECK(std::abs(parse_scalar(skew.output) - skew_information(rho, zi)) <= 1e-12);

  RunResult var = run_cli("compute " + w05 + " --what variance --observable " + sz);
  CHECK(var.exit_code == 0);
  CHECK(std::abs(parse_scalar(var.output) - 1.0) <= 1e-12);

  RunResult fisher = run_cli("compute " + w05 + " --what qfi --observable " + sz);
  CHECK(fisher.exit_code == 0);
  CHECK(std::abs(parse_scalar(fisher.output) - qfi(rho, zi)) <= 1e-12);
}

TEST_CASE("compute hellinger between two state files") {
  const std::string w05 = werner05_file();
  const std::string w03 =
      write_state("werner03.json", werner(0.3).matrix(), MatrixKind::Density, 2, 2);
  RunResult r = run_cli("compute " + w05 + " --what hellinger --chi " + w03);
  CHECK(r.exit_code == 0);
  CHECK(std::abs(parse_scalar(r.output) -
                 hellinger_sq(werner(0.5).state(), werner(0.3).state())) <= 1e-12);
}

TEST_CASE("compute json report: metadata present, reruns byte-identical") {
  const std::string bell = bell_file();
  RunResult first = run_cli("compute " + bell + " --what lqu --format json");
  RunResult second = run_cli("compute " + bell + " --what lqu --format json");
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);

  nlohmann::json j = nlohmann::json::parse(first.output);
  CHECK(j["tool"] == "lqu");
  CHECK(j["version"] == kVersion);
  CHECK(j["rng"] == kRngName);
  CHECK(j["method"] == "closed-form");
  CHECK(j["value_text"] == "1.000000000000e+00");
  CHECK(j["state_hash"].is_string());
  CHECK(j["tolerances"].contains("psd_clip"));
}

TEST_CASE("lambda rules through the cli: scaling and arity checks") {
  const std::string w05 = werner05_file();
  const double base = parse_scalar(run_cli("compute " + w05).output);

  RunResult scaled = run_cli("compute " + w05 + " --lambda -2,2");
  CHECK(scaled.exit_code == 0);
  CHECK(std::abs(parse_scalar(scaled.output) - 4.0 * base) <= 1e-9);

  CHECK(run_cli("compute " + w05 + " --lambda -1").exit_code == 5);
}

TEST_CASE("exit codes: parse, validation, usage") {
  CHECK(run_cli("compute missing_file.json").exit_code == 2);

  const std::string garbage = scratch_path("garbage.json");
  {
    std::FILE* f = std::fopen(garbage.c_str(), "w");
    std::fputs("not json at all", f);
    std::fclose(f);
  }
  CHECK(run_cli("compute " + garbage).exit_code == 2);

  const std::string bad_trace =
      write_state("bad_trace.json", identity(4), MatrixKind::Density, 2, 2);
  CHECK(run_cli("compute " + bad_trace).exit_code == 3);

  const std::string w05 = werner05_file();
  CHECK(run_cli("compute " + w05 + " --what skew").exit_code == 5);  // no observable
  CHECK(run_cli("compute " + w05 + " --what entropy").exit_code == 5);
  CHECK(run_cli("frobnicate").exit_code == 5);
  CHECK(run_cli("verify --suite bogus").exit_code == 3);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("tolerance overrides come from the environment") {
  // slightly detuned trace: rejected by default, accepted when relaxed
  const std::string wobbly = write_state(
      "wobbly.json", werner(0.2).matrix() * (1.0 + 2e-7), MatrixKind::Density, 2, 2);
  CHECK(run_cli("compute " + wobbly).exit_code == 3);
  CHECK(run_cli("compute " + wobbly, "LQU_TOLERANCES='{\"trace\":1e-3}'").exit_code ==
        0);
  CHECK(run_cli("compute " + wobbly, "LQU_TOLERANCES='{\"no_such_knob\":1}'")
            .exit_code == 2);
  CHECK(run_cli("compute " + wobbly, "LQU_TOLERANCES='not json'").exit_code == 2);
}

TEST_CASE("werner sweep: stable bytes, annotated header, correct endpoints") {
  const std::string args = "werner-sweep --grid 0:1:11";
  RunResult first = run_cli(args, "", false);
  RunResult second = run_cli(args, "", false);
  CHECK(first.exit_code == 0);
  CHECK(first.output == second.output);

  std::string expected_meta = std::string("# lqu ") + kVersion +
                              " | rng=" + kRngName + " | seed=0 | cmd: lqu " + args;
  CHECK(first.output.substr(0, expected_meta.size()) == expected_meta);
  CHECK(first.output.find("p,variance_sz,lqu,linear_entropy\n") != std::string::npos);

  // last row is p=1: variance 1, lqu 1, entropy 0
  std::string tail = first.output.substr(first.output.rfind('\n', first.output.size() - 2) + 1);
  double p, var, lqu_v, ent;
  REQUIRE(std::sscanf(tail.c_str(), "%lf,%lf,%lf,%lf", &p, &var, &lqu_v, &ent) == 4);
  CHECK(p == 1.0);
  CHECK(std::abs(var - 1.0) <= 1e-12);
  CHECK(std::abs(lqu_v - 1.0) <= 1e-9);
  CHECK(std::abs(ent) <= 1e-10);

  CHECK(run_cli("werner-sweep --grid 0:2:5").exit_code == 3);  // p beyond [0,1]
}

TEST_CASE("dqc1 sweep: formula column is n-independent, file unitaries accepted") {
  RunResult n1 = run_cli("dqc1-sweep --n 1 --grid 0:1:3 --seed 9", "", false);
  RunResult n2 = run_cli("dqc1-sweep --n 2 --grid 0:1:3 --seed 9", "", false);
  CHECK(n1.exit_code == 0);
  CHECK(n2.exit_code == 0);

  auto formula_column = [](const std::string& csv) {
    std::vector<std::string> values;
    std::size_t pos = csv.find('\n', csv.find('\n') + 1) + 1;  // skip meta+header
    while (pos < csv.size()) {
      std::size_t eol = csv.find('\n', pos);
      std::string line = csv.substr(pos, eol - pos);
      int n = 0;
      double mu, numeric, formula, err;
      REQUIRE(std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf", &n, &mu, &numeric,
                          &formula, &err) == 5);
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12e", formula);
      values.push_back(buf);
      if (mu == 0.0) CHECK(numeric <= 1e-12);
      pos = eol + 1;
    }
    return values;
  };
  CHECK(formula_column(n1.output) == formula_column(n2.output));

  const std::string u_file =
      write_state("u2.json", haar_unitary(2, 5), MatrixKind::Unitary);
  CHECK(run_cli("dqc1-sweep --n 1 --grid 0:1:3 --unitary " + u_file, "", false)
            .exit_code == 0);
  CHECK(run_cli("dqc1-sweep --n 13 --grid 0:1:3").exit_code == 3);
}

TEST_CASE("spin probe sweep rows satisfy the published relations") {
  RunResult r = run_cli("spin-probe-sweep --j 1,2.5 --grid 0.2:1:5 --nu 10", "", false);
  CHECK(r.exit_code == 0);

  std::size_t pos = r.output.find('\n', r.output.find('\n') + 1) + 1;
  int rows = 0;
  while (pos < r.output.size()) {
    std::size_t eol = r.output.find('\n', pos);
    std::string line = r.output.substr(pos, eol - pos);
    double j, rr, lf, ln, f, four, vb, shot, heis;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &j, &rr,
                        &lf, &ln, &f, &four, &vb, &shot, &heis) == 9);
    CHECK(four <= f + 1e-8);
    CHECK(std::abs(f - 4.0 * j * j * rr * rr) <= 1e-8);
    CHECK(shot == doctest::Approx(2.0 * j));
    CHECK(heis == doctest::Approx(4.0 * j * j));
    CHECK(std::abs(vb * 10.0 * f - 1.0) <= 1e-9);
    if (rr == 1.0) CHECK(std::abs(f - 4.0 * j * j) <= 1e-8);
    ++rows;
    pos = eol + 1;
  }
  CHECK(rows == 10);

  CHECK(run_cli("spin-probe-sweep --j 1 --grid 0:1:5").exit_code == 3);  // r=0 diverges
}

TEST_CASE("verify subcommand: reports, exit codes, self-test hook") {
  RunResult ok = run_cli("verify --suite skew --trials 5 --seed 3");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("PASS") != std::string::npos);
  CHECK(ok.output.find("FAIL") == std::string::npos);
  CHECK(ok.output.find("seed=3") != std::string::npos);
  CHECK(ok.output.find("statistical") != std::string::npos);
  CHECK(ok.output.find("wall") != std::string::npos);

  RunResult corrupted =
      run_cli("verify --suite skew --trials 5 --seed 3 --corrupt-tolerances");
  CHECK(corrupted.exit_code == 4);
  CHECK(corrupted.output.find("FAIL") != std::string::npos);

  RunResult serial = run_cli("verify --suite skew --trials 5 --seed 3 --serial");
  CHECK(serial.exit_code == 0);
}
