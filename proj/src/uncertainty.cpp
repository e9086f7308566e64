#include "lqu/uncertainty.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lqu {

Observable::Observable(const ComplexMatrix& m) {
  eig_ = hermitian_eig(m);
  matrix_ = 0.5 * (m + m.adjoint());
}

Spectrum::Spectrum(RealVector values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw validation_error("Spectrum: need at least two values");
  }
  if (!values_.allFinite()) {
    throw validation_error("Spectrum: values must be finite");
  }
  std::sort(values_.data(), values_.data() + values_.size());
  for (Eigen::Index i = 1; i < values_.size(); ++i) {
    if (values_[i] - values_[i - 1] <= tolerances().spectrum_gap) {
      std::ostringstream os;
      os << "Spectrum: degenerate values, gap " << values_[i] - values_[i - 1]
         << " at position " << i;
      throw validation_error(os.str());
    }
  }
}

Spectrum Spectrum::pauli() {
  RealVector v(2);
  v << -1.0, 1.0;
  return Spectrum(v);
}

double WMatrix::lambda_max() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(entries);
  return solver.eigenvalues().maxCoeff();
}

namespace {

void require_same_dim(const DensityMatrix& rho, const Observable& k, const char* what) {
  if (rho.dim() != k.dim()) {
    std::ostringstream os;
    os << what << ": state dimension " << rho.dim() << " != observable dimension "
       << k.dim();
    throw validation_error(os.str());
  }
}

// skew information with the square root already at hand; K need not be validated
double skew_from_sqrt(const ComplexMatrix& root, const ComplexMatrix& k) {
  ComplexMatrix m = root * k;
  // tr(rho K^2) = ||sqrt(rho) K||_F^2 and tr(sqrt(rho) K sqrt(rho) K) = tr(M M)
  return m.squaredNorm() - std::real(trace_product(m, m));
}

double variance_impl(const ComplexMatrix& rho, const ComplexMatrix& k) {
  ComplexMatrix m = rho * k;
  const double mean = std::real(m.trace());
  return std::real(trace_product(m, k)) - mean * mean;
}

}  // namespace

double variance(const DensityMatrix& rho, const Observable& k) {
  require_same_dim(rho, k, "variance");
  return variance_impl(rho.matrix(), k.matrix());
}

double skew_information(const DensityMatrix& rho, const Observable& k) {
  require_same_dim(rho, k, "skew_information");
  return skew_from_sqrt(rho.sqrt(), k.matrix());
}

WMatrix w_matrix(const BipartiteState& rho) {
  if (rho.dA() != 2) {
    throw validation_error("w_matrix: subsystem A must be a qubit");
  }
  const ComplexMatrix& r = rho.state().sqrt();
  const Eigen::Index dB = rho.dB();
  auto blk = [&](Eigen::Index i, Eigen::Index j) {
    return r.block(i * dB, j * dB, dB, dB);
  };
  const Complex im(0.0, 1.0);

  // c[i] = sqrt(rho) * (sigma_i (x) I), assembled blockwise
  std::array<ComplexMatrix, 3> c;
  for (auto& m : c) m.resize(2 * dB, 2 * dB);
  c[0] << blk(0, 1), blk(0, 0), blk(1, 1), blk(1, 0);
  c[1] << im * blk(0, 1), -im * blk(0, 0), im * blk(1, 1), -im * blk(1, 0);
  c[2] << blk(0, 0), -blk(0, 1), blk(1, 0), -blk(1, 1);

  Eigen::Matrix3cd raw;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) raw(i, j) = trace_product(c[i], c[j]);

  const double imag_budget = tolerances().w_imag;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(raw(i, j).imag()) > imag_budget) {
        std::ostringstream os;
        os << "w_matrix: entry (" << i << "," << j << ") has imaginary residue "
           << raw(i, j).imag();
        throw validation_error(os.str());
      }
      if (std::abs(raw(i, j) - std::conj(raw(j, i))) > imag_budget) {
        throw validation_error("w_matrix: result is not symmetric");
      }
    }
  }
  WMatrix w;
  w.entries = 0.5 * (raw.real() + raw.real().transpose());
  return w;
}

double lqu_closed_form(const BipartiteState& rho) {
  const double value = 1.0 - w_matrix(rho).lambda_max();
  const double clamp = tolerances().lqu_clamp;
  if (value < -clamp || value > 1.0 + clamp) {
    std::ostringstream os;
    os << "lqu_closed_form: value " << value << " outside [0, 1]";
    throw validation_error(os.str());
  }
  return std::clamp(value, 0.0, 1.0);
}

namespace detail {

namespace {

// Hermitian basis of su(d) traceless generators with precomputed eigensystems,
// so a rotation exp(i theta G) costs two small products.
struct Generator {
  RealVector values;
  ComplexMatrix vectors;

  ComplexMatrix rotation(double theta) const {
    ComplexVector phases(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      phases[k] = std::exp(Complex(0.0, theta * values[k]));
    }
    return vectors * phases.asDiagonal() * vectors.adjoint();
  }
};

std::vector<Generator> su_generators(Eigen::Index d) {
  std::vector<Generator> gens;
  auto push = [&](const ComplexMatrix& g) {
    EigenDecomposition eig = hermitian_eig(g);
    gens.push_back({std::move(eig.values), std::move(eig.vectors)});
  };
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      ComplexMatrix x = ComplexMatrix::Zero(d, d);
      x(i, j) = x(j, i) = 1.0;
      push(x);
      ComplexMatrix y = ComplexMatrix::Zero(d, d);
      y(i, j) = Complex(0.0, -1.0);
      y(j, i) = Complex(0.0, 1.0);
      push(y);
    }
  }
  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    ComplexMatrix z = ComplexMatrix::Zero(d, d);
    z(k, k) = 1.0;
    z(k + 1, k + 1) = -1.0;
    push(z);
  }
  return gens;
}

struct Best {
  double value = std::numeric_limits<double>::infinity();
  long index = -1;
};

// total order on (value, index) pairs; ties resolve to the lower sample index
// so the winner is independent of thread scheduling
bool better(const Best& a, const Best& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.index != -1 && (b.index == -1 || a.index < b.index);
}

// the k best samples under the same total order; merge order cannot change
// the final contents, which keeps parallel runs identical to serial ones
struct TopK {
  std::size_t limit;
  std::vector<Best> items;  // sorted, best first

  explicit TopK(std::size_t k) : limit(k) { items.reserve(k + 1); }

  void offer(const Best& b) {
    auto pos = std::lower_bound(items.begin(), items.end(), b,
                                [](const Best& x, const Best& y) { return better(x, y); });
    items.insert(pos, b);
    if (items.size() > limit) items.pop_back();
  }

  void merge(const TopK& other) {
    for (const Best& b : other.items) offer(b);
  }
};

}  // namespace

double minimize_over_observables(
    const std::function<double(const ComplexMatrix&)>& objective,
    Eigen::Index dA, const Spectrum& lambda, int budget, std::uint64_t seed,
    bool parallel) {
  if (lambda.size() != dA) {
    throw validation_error("minimize_over_observables: spectrum size must equal dA");
  }
  if (budget < 1) {
    throw validation_error("minimize_over_observables: budget must be positive");
  }
  const RealVector& lam = lambda.values();
  auto observable_for = [&](const ComplexMatrix& v) -> ComplexMatrix {
    return v * lam.asDiagonal() * v.adjoint();
  };
  auto sample_value = [&](long i) -> double {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    return objective(observable_for(haar_unitary(dA, rng)));
  };

  const std::size_t starts = static_cast<std::size_t>(std::min(budget, 8));
  TopK best(starts);
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel
    {
      TopK local(starts);
#pragma omp for schedule(static) nowait
      for (long i = 0; i < budget; ++i) {
        local.offer({sample_value(i), i});
      }
#pragma omp critical(lqu_minimize_merge)
      best.merge(local);
    }
  } else
#else
  (void)parallel;
#endif
  {
    for (long i = 0; i < budget; ++i) {
      best.offer({sample_value(i), i});
    }
  }
  if (best.items.empty() || !std::isfinite(best.items.front().value)) {
    throw validation_error("minimize_over_observables: no finite sample value");
  }

  // pattern search: the step halves whenever a full sweep over the su(dA)
  // generators yields no improvement
  const std::vector<Generator> gens = su_generators(dA);
  auto refine = [&](ComplexMatrix& v, double& value, double min_step) {
    double step = 0.5;
    int sweeps = 0;
    while (step > min_step && sweeps++ < 2000) {
      bool improved = false;
      for (const Generator& g : gens) {
        for (double s : {step, -step}) {
          ComplexMatrix vtry = g.rotation(s) * v;
          double vt = objective(observable_for(vtry));
          if (vt < value - 1e-14 * std::max(1.0, std::abs(value))) {
            v = std::move(vtry);
            value = vt;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  };

  // funnel: coarse refinement on every retained start picks the basin, the
  // winner alone is polished down to the 1e-8 step floor
  ComplexMatrix winner;
  double winner_value = std::numeric_limits<double>::infinity();
  for (const Best& start : best.items) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(start.index)));
    ComplexMatrix v = haar_unitary(dA, rng);
    double value = start.value;
    refine(v, value, 1e-3);
    if (value < winner_value) {
      winner = std::move(v);
      winner_value = value;
    }
  }
  refine(winner, winner_value, 1e-8);
  return winner_value;
}

}  // namespace detail

namespace {

double lqu_bruteforce_impl(const BipartiteState& rho, const Spectrum& lambda,
                           int budget, std::uint64_t seed, bool parallel) {
  if (lambda.size() != rho.dA()) {
    throw validation_error("lqu_bruteforce: spectrum size must equal dA");
  }
  const ComplexMatrix& root = rho.state().sqrt();
  const Eigen::Index dB = rho.dB();
  auto objective = [&](const ComplexMatrix& ka) {
    return skew_from_sqrt(root, tensor(ka, identity(dB)));
  };
  return detail::minimize_over_observables(objective, rho.dA(), lambda, budget,
                                           seed, parallel);
}

}  // namespace

double lqu_bruteforce(const BipartiteState& rho, const Spectrum& lambda,
                      int budget, std::uint64_t seed) {
  return lqu_bruteforce_impl(rho, lambda, budget, seed, true);
}

double lqu_bruteforce_serial(const BipartiteState& rho, const Spectrum& lambda,
                             int budget, std::uint64_t seed) {
  return lqu_bruteforce_impl(rho, lambda, budget, seed, false);
}

MinVarianceResult min_variance_fixed_spectrum(const DensityMatrix& rho,
                                              const Spectrum& lambda) {
  const Eigen::Index d = rho.dim();
  if (lambda.size() != d) {
    throw validation_error("min_variance_fixed_spectrum: spectrum size must equal dim");
  }
  if (d > 8) {
    throw validation_error(
        "min_variance_fixed_spectrum: enumeration supports dim <= 8");
  }
  const RealVector& p = rho.eigenvalues();
  const RealVector& lam = lambda.values();
  std::vector<int> assignment(static_cast<std::size_t>(d));
  std::iota(assignment.begin(), assignment.end(), 0);

  MinVarianceResult result{std::numeric_limits<double>::infinity(), {}};
  std::vector<int> perm = assignment;
  do {
    double mean = 0.0, mean_sq = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double li = lam[perm[static_cast<std::size_t>(i)]];
      mean += p[i] * li;
      mean_sq += p[i] * li * li;
    }
    const double value = mean_sq - mean * mean;
    if (value < result.value) {  // strict: ties keep the lex-smallest assignment
      result.value = value;
      result.assignment = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

double min_variance_search(const DensityMatrix& rho, const Spectrum& lambda,
                           int budget, std::uint64_t seed) {
  if (lambda.size() != rho.dim()) {
    throw validation_error("min_variance_search: spectrum size must equal dim");
  }
  const ComplexMatrix& m = rho.matrix();
  auto objective = [&](const ComplexMatrix& k) { return variance_impl(m, k); };
  return detail::minimize_over_observables(objective, rho.dim(), lambda, budget,
                                           seed, true);
}

double hellinger_sq(const DensityMatrix& rho, const DensityMatrix& chi) {
  if (rho.dim() != chi.dim()) {
    throw validation_error("hellinger_sq: states must share one dimension");
  }
  const double overlap = std::real(trace_product(rho.sqrt(), chi.sqrt()));
  return std::max(0.0, 1.0 - overlap);
}

double linear_entanglement_entropy(const BipartiteState& psi) {
  if (!psi.state().is_pure()) {
    std::ostringstream os;
    os << "linear_entanglement_entropy: state is mixed, purity "
       << psi.state().purity();
    throw validation_error(os.str());
  }
  ComplexMatrix rho_a = partial_trace(psi, Subsystem::A);
  return 2.0 * (1.0 - std::real(trace_product(rho_a, rho_a)));
}

}  // namespace lqu
