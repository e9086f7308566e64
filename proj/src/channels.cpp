#include "lqu/channels.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace lqu {

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators, std::string label)
    : operators_(std::move(operators)), label_(std::move(label)) {
  if (operators_.empty()) {
    throw validation_error("KrausChannel: need at least one operator");
  }
  const Eigen::Index rows = operators_[0].rows();
  const Eigen::Index cols = operators_[0].cols();
  if (rows < 1 || cols < 1) {
    throw validation_error("KrausChannel: empty operator");
  }
  for (const auto& m : operators_) {
    if (m.rows() != rows || m.cols() != cols) {
      throw validation_error("KrausChannel: operators must share one shape");
    }
    require_finite(m, "KrausChannel");
  }
  const double residual = completeness_residual();
  if (residual > tolerances().completeness) {
    std::ostringstream os;
    os << "KrausChannel: completeness violated, ||sum M^dag M - I||_max = "
       << residual;
    throw validation_error(os.str());
  }
}

double KrausChannel::completeness_residual() const {
  const Eigen::Index d = dim_in();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& m : operators_) sum += m.adjoint() * m;
  return max_abs(sum - identity(d));
}

BipartiteState apply_local(const BipartiteState& rho, const KrausChannel& channel,
                           Subsystem side) {
  const Eigen::Index local_dim = side == Subsystem::A ? rho.dA() : rho.dB();
  if (channel.dim_in() != local_dim) {
    std::ostringstream os;
    os << "apply_local: channel acts on dimension " << channel.dim_in()
       << " but subsystem has dimension " << local_dim;
    throw validation_error(os.str());
  }
  const Eigen::Index dim_out =
      side == Subsystem::A ? channel.dim_out() * rho.dB() : rho.dA() * channel.dim_out();
  ComplexMatrix out = ComplexMatrix::Zero(dim_out, dim_out);
  for (const auto& m : channel.operators()) {
    ComplexMatrix k = side == Subsystem::A ? tensor(m, identity(rho.dB()))
                                           : tensor(identity(rho.dA()), m);
    out += k * rho.matrix() * k.adjoint();
  }
  const Eigen::Index dA_out = side == Subsystem::A ? channel.dim_out() : rho.dA();
  const Eigen::Index dB_out = side == Subsystem::A ? rho.dB() : channel.dim_out();
  return BipartiteState(out, dA_out, dB_out);
}

KrausChannel random_channel(Eigen::Index dim, int kraus_rank, std::uint64_t seed) {
  if (dim < 1) throw validation_error("random_channel: dimension must be positive");
  if (kraus_rank < 1) throw validation_error("random_channel: rank must be positive");
  ComplexMatrix u = haar_unitary(dim * kraus_rank, seed);
  ComplexMatrix isometry = u.leftCols(dim);
  std::vector<ComplexMatrix> ops;
  ops.reserve(static_cast<std::size_t>(kraus_rank));
  for (int i = 0; i < kraus_rank; ++i) {
    ops.push_back(isometry.middleRows(Eigen::Index(i) * dim, dim));
  }
  std::ostringstream label;
  label << "stinespring(d=" << dim << ",k=" << kraus_rank << ",seed=" << seed << ")";
  return KrausChannel(std::move(ops), label.str());
}

std::vector<SelectiveOutcome> selective_local_ops(const BipartiteState& psi,
                                                  const KrausChannel& channel_a) {
  if (!psi.state().is_pure()) {
    std::ostringstream os;
    os << "selective_local_ops: input must be pure, purity " << psi.state().purity();
    throw validation_error(os.str());
  }
  if (channel_a.dim_in() != psi.dA()) {
    throw validation_error("selective_local_ops: channel does not fit subsystem A");
  }
  const ComplexVector vec = psi.state().dominant_eigenvector();
  std::vector<SelectiveOutcome> outcomes;
  double total = 0.0;
  for (const auto& m : channel_a.operators()) {
    ComplexVector branch = tensor(m, identity(psi.dB())) * vec;
    const double p = branch.squaredNorm();
    total += p;
    if (p < tolerances().outcome_prob) continue;
    outcomes.push_back(
        {p, pure_bipartite(branch / std::sqrt(p), channel_a.dim_out(), psi.dB())});
  }
  if (std::abs(total - 1.0) > tolerances().trace) {
    std::ostringstream os;
    os << "selective_local_ops: outcome probabilities sum to " << total;
    throw validation_error(os.str());
  }
  return outcomes;
}

}  // namespace lqu
