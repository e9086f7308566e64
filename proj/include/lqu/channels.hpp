#pragma once

#include <string>
#include <vector>

#include "lqu/states.hpp"

namespace lqu {

// CPTP map as Kraus operators M_i with sum_i M_i^dag M_i = I (all operators
// share one shape; rectangular operators change the subsystem dimension).
class KrausChannel {
 public:
  explicit KrausChannel(std::vector<ComplexMatrix> operators,
                        std::string label = "");

  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  const std::string& label() const { return label_; }
  Eigen::Index dim_in() const { return operators_[0].cols(); }
  Eigen::Index dim_out() const { return operators_[0].rows(); }
  double completeness_residual() const;

 private:
  std::vector<ComplexMatrix> operators_;
  std::string label_;
};

// rho -> sum_i (M_i (x) I) rho (M_i (x) I)^dag (side A; mirrored for B)
BipartiteState apply_local(const BipartiteState& rho, const KrausChannel& channel,
                           Subsystem side);

// Stinespring draw: the first dim columns of a Haar unitary on dim*kraus_rank,
// cut into kraus_rank blocks of dim rows each.
KrausChannel random_channel(Eigen::Index dim, int kraus_rank, std::uint64_t seed);

struct SelectiveOutcome {
  double probability;
  BipartiteState state;
};

// Measurement reading of a channel on A applied to a *pure* bipartite state:
// outcome i occurs with p_i = ||(M_i (x) I)|psi>||^2 and leaves the normalized
// pure state behind. Outcomes below the probability floor are dropped.
std::vector<SelectiveOutcome> selective_local_ops(const BipartiteState& psi,
                                                  const KrausChannel& channel_a);

}  // namespace lqu
