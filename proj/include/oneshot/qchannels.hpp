#pragma once

#include <string>
#include <vector>

#include "oneshot/channel.hpp"
#include "oneshot/optimize.hpp"
#include "oneshot/registers.hpp"

namespace oneshot {

// Entanglement-assisted functionals of N: C(N) = max ½ I(B:R) over inputs,
// Π(N) the maximizers, V_max the largest V(B:R) over Π(N).
struct ChannelFunctionals {
  double capacity_like = 0.0;              // bits
  double vmax = 0.0;                       // bits², lower bound (Π(N) is sampled)
  std::vector<PureVector> capacity_inputs; // on in ⊗ R, R labelled with suffix "'"
  MultiStartReport optimizer_report;
  bool converged = true;                   // every start met the stationarity test
};

OptimizerConfig channel_optimizer_defaults();  // 64 starts

// Multi-start projected-gradient ascent over pure inputs on A ⊗ R. Starts whose
// value ends within cluster_tol of the best form the representative set.
ChannelFunctionals channel_functionals(const Channel& n, const OptimizerConfig& opt = channel_optimizer_defaults(),
                                       double cluster_tol = 1e-7);

// (N ⊗ id)(ψ) for ψ on in ⊗ R.
HermitianOperator channel_output(const Channel& n, const PureVector& input);
// I(B:R) and V(B:R) of (N ⊗ id)(ψ).
double channel_mutual_information(const Channel& n, const PureVector& input);
double channel_mutual_information_variance(const Channel& n, const PureVector& input);
// Maximally entangled vector on in ⊗ in'.
PureVector maximally_entangled_input(const RegisterShape& in);

enum class MetaConverseMode { covariant_mes, general_lowerconf };

struct MetaConverseResult {
  double value = 0.0;
  std::string provenance;
};

// covariant_mes: ½ D_h^{ε²}((N⊗id)Φ ‖ N(I/d) ⊗ I/d), valid when N is covariant
// (caller's assertion). general_lowerconf: max over inputs of a searched min over
// σ_B of ½ D_h^{ε²}((N⊗id)ψ ‖ σ_B ⊗ ψ_R); heuristic in both directions.
MetaConverseResult meta_converse_bound(const Channel& n, double eps, MetaConverseMode mode,
                                       const OptimizerConfig& opt = {});

}  // namespace oneshot
