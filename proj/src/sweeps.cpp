#include "lqu/sweeps.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lqu {

namespace {

double monotonic_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double parse_number(const std::string& text, const char* what) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw parse_error(std::string("grid: bad ") + what + " \"" + text + "\"");
  }
  return value;
}

// run fn over [0, count) with results stored by index; the parallel flavor
// and the serial flavor share fn, so they produce identical records
template <typename Record, typename Fn>
std::vector<Record> map_indexed(Eigen::Index count, bool parallel, Fn&& fn) {
  std::vector<Record> out(static_cast<std::size_t>(count));
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < count; ++i) {
      out[static_cast<std::size_t>(i)] = fn(i);
    }
    return out;
  }
#else
  (void)parallel;
#endif
  for (Eigen::Index i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = fn(i);
  }
  return out;
}

std::string format_row(const double* values, std::size_t count) {
  std::string row;
  char buf[32];
  for (std::size_t i = 0; i < count; ++i) {
    std::snprintf(buf, sizeof buf, "%.12e", values[i]);
    if (i) row += ',';
    row += buf;
  }
  return row;
}

}  // namespace

GridSpec GridSpec::parse(const std::string& text) {
  std::istringstream in(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 3) {
    throw parse_error("grid: expected start:stop:steps, got \"" + text + "\"");
  }
  GridSpec g;
  g.start = parse_number(parts[0], "start");
  g.stop = parse_number(parts[1], "stop");
  const std::string& steps = parts[2];
  int n = 0;
  auto [ptr, ec] = std::from_chars(steps.data(), steps.data() + steps.size(), n);
  if (ec != std::errc() || ptr != steps.data() + steps.size()) {
    throw parse_error("grid: bad step count \"" + steps + "\"");
  }
  g.steps = n;
  if (g.steps < 1) throw parse_error("grid: steps must be >= 1");
  if (!(g.start <= g.stop)) throw parse_error("grid: start must be <= stop");
  if (g.steps == 1 && g.start != g.stop) {
    throw parse_error("grid: a single step needs start = stop");
  }
  return g;
}

std::vector<double> GridSpec::points() const {
  std::vector<double> pts(static_cast<std::size_t>(steps));
  if (steps == 1) {
    pts[0] = start;
    return pts;
  }
  const double width = (stop - start) / static_cast<double>(steps - 1);
  for (int k = 0; k < steps; ++k) {
    pts[static_cast<std::size_t>(k)] = start + width * k;
  }
  pts.back() = stop;  // land exactly on the endpoint
  return pts;
}

namespace {

std::vector<WernerRecord> werner_sweep_impl(const GridSpec& grid, bool parallel) {
  if (grid.start < 0.0 || grid.stop > 1.0) {
    throw validation_error("werner sweep: grid must stay inside [0, 1]");
  }
  const std::vector<double> ps = grid.points();
  const Observable sz(tensor(pauli(2), identity(2)));
  return map_indexed<WernerRecord>(
      static_cast<Eigen::Index>(ps.size()), parallel, [&](Eigen::Index i) {
        const double t0 = monotonic_seconds();
        const double p = ps[static_cast<std::size_t>(i)];
        BipartiteState rho = werner(p);
        WernerRecord rec;
        rec.p = p;
        rec.variance_sz = variance(rho.state(), sz);
        rec.lqu = lqu_closed_form(rho);
        rec.linear_entropy = linear_entropy_two_qubit(rho.state());
        rec.seconds = monotonic_seconds() - t0;
        return rec;
      });
}

std::vector<Dqc1Record> dqc1_sweep_impl(int n, const GridSpec& grid,
                                        const ComplexMatrix& unitary, bool parallel) {
  if (n < 1 || n > 12) {
    throw validation_error("dqc1 sweep: register size n must lie in [1, 12]");
  }
  if (grid.start < 0.0 || grid.stop > 1.0) {
    throw validation_error("dqc1 sweep: mu grid must stay inside [0, 1]");
  }
  const std::vector<double> mus = grid.points();
  return map_indexed<Dqc1Record>(
      static_cast<Eigen::Index>(mus.size()), parallel, [&](Eigen::Index i) {
        const double t0 = monotonic_seconds();
        const double mu = mus[static_cast<std::size_t>(i)];
        Dqc1Record rec;
        rec.n = n;
        rec.mu = mu;
        rec.lqu_numeric = lqu_closed_form(dqc1_output(n, mu, unitary));
        rec.lqu_formula = 0.5 * (1.0 - std::sqrt(1.0 - mu * mu));
        rec.abs_error = std::abs(rec.lqu_numeric - rec.lqu_formula);
        rec.seconds = monotonic_seconds() - t0;
        return rec;
      });
}

std::vector<SpinProbeRecord> spin_probe_sweep_impl(const std::vector<double>& js,
                                                   const GridSpec& grid,
                                                   long long nu, bool parallel) {
  if (js.empty()) throw validation_error("spin probe sweep: need at least one j");
  if (nu < 1) throw validation_error("spin probe sweep: nu must be >= 1");
  if (!(grid.start > 0.0) || grid.stop > 1.0) {
    throw validation_error(
        "spin probe sweep: r grid must stay inside (0, 1]; r = 0 makes the "
        "variance bound infinite");
  }
  for (double j : js) {
    if (!(j > 0.0)) throw validation_error("spin probe sweep: j must be positive");
  }
  const std::vector<double> rs = grid.points();
  const Eigen::Index total = static_cast<Eigen::Index>(js.size() * rs.size());
  return map_indexed<SpinProbeRecord>(total, parallel, [&](Eigen::Index idx) {
    const double t0 = monotonic_seconds();
    const double j = js[static_cast<std::size_t>(idx) / rs.size()];
    const double r = rs[static_cast<std::size_t>(idx) % rs.size()];
    BipartiteState rho = spin_probe(j, r);
    Observable h = spin_jz(j);
    SpinProbeRecord rec;
    rec.j = j;
    rec.r = r;
    rec.lqu_formula = spin_probe_lqu_formula(j, r);
    rec.lqu_numeric = j * j * lqu_closed_form(rho);
    rec.qfi = qfi(rho.state(), Observable(tensor(h.matrix(), identity(2))));
    rec.four_lqu = 4.0 * rec.lqu_numeric;
    rec.var_bound = 1.0 / (static_cast<double>(nu) * rec.qfi);
    rec.shot_noise = 2.0 * j;
    rec.heisenberg = 4.0 * j * j;
    rec.seconds = monotonic_seconds() - t0;
    return rec;
  });
}

}  // namespace

std::vector<WernerRecord> werner_sweep(const GridSpec& p_grid) {
  return werner_sweep_impl(p_grid, true);
}

std::vector<WernerRecord> werner_sweep_serial(const GridSpec& p_grid) {
  return werner_sweep_impl(p_grid, false);
}

std::vector<Dqc1Record> dqc1_sweep(int n, const GridSpec& mu_grid,
                                   const ComplexMatrix& unitary) {
  return dqc1_sweep_impl(n, mu_grid, unitary, true);
}

std::vector<Dqc1Record> dqc1_sweep_serial(int n, const GridSpec& mu_grid,
                                          const ComplexMatrix& unitary) {
  return dqc1_sweep_impl(n, mu_grid, unitary, false);
}

std::vector<SpinProbeRecord> spin_probe_sweep(const std::vector<double>& js,
                                              const GridSpec& r_grid, long long nu) {
  return spin_probe_sweep_impl(js, r_grid, nu, true);
}

std::vector<SpinProbeRecord> spin_probe_sweep_serial(const std::vector<double>& js,
                                                     const GridSpec& r_grid,
                                                     long long nu) {
  return spin_probe_sweep_impl(js, r_grid, nu, false);
}

std::string werner_csv(const std::vector<WernerRecord>& rows, const std::string& meta) {
  std::string out = "# " + meta + "\n" + "p,variance_sz,lqu,linear_entropy\n";
  for (const auto& r : rows) {
    const double values[] = {r.p, r.variance_sz, r.lqu, r.linear_entropy};
    out += format_row(values, 4);
    out += '\n';
  }
  return out;
}

std::string dqc1_csv(const std::vector<Dqc1Record>& rows, const std::string& meta) {
  std::string out = "# " + meta + "\n" + "n,mu,lqu_numeric,lqu_formula,abs_error\n";
  for (const auto& r : rows) {
    char head[16];
    std::snprintf(head, sizeof head, "%d", r.n);
    const double values[] = {r.mu, r.lqu_numeric, r.lqu_formula, r.abs_error};
    out += head;
    out += ',';
    out += format_row(values, 4);
    out += '\n';
  }
  return out;
}

std::string spin_probe_csv(const std::vector<SpinProbeRecord>& rows,
                           const std::string& meta) {
  std::string out =
      "# " + meta + "\n" +
      "j,r,lqu_formula,lqu_numeric,qfi,four_lqu,var_bound,shot_noise,heisenberg\n";
  for (const auto& r : rows) {
    const double values[] = {r.j,        r.r,         r.lqu_formula,
                             r.lqu_numeric, r.qfi,    r.four_lqu,
                             r.var_bound,   r.shot_noise, r.heisenberg};
    out += format_row(values, 9);
    out += '\n';
  }
  return out;
}

}  // namespace lqu
