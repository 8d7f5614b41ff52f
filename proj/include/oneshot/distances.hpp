#pragma once

#include "oneshot/bounds.hpp"
#include "oneshot/channel.hpp"
#include "oneshot/optimize.hpp"
#include "oneshot/registers.hpp"

namespace oneshot {

enum class DistanceKind { fidelity, generalized_fidelity, purified, trace };

struct DistanceValue {
  DistanceKind kind;
  double value;
};

// ‖√ρ√σ‖₁ for positive semidefinite ρ, σ.
double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);
// F + √((1 − Tr ρ)(1 − Tr σ)) on subnormalized states.
double generalized_fidelity(const HermitianOperator& rho, const HermitianOperator& sigma);
double purified_distance(const HermitianOperator& rho, const HermitianOperator& sigma);
// Smallest P that can be told apart from 0 on dimension dim: F carries a
// relative rounding error of order dim·eps_mach, and P = √(1 − F²) amplifies it
// to √(2·dim·eps_mach). A factor 8 of headroom is included.
double purified_distance_resolution(int dim);
// ‖ρ − σ‖₁ without the factor 1/2.
double trace_distance(const HermitianOperator& rho, const HermitianOperator& sigma);

DistanceValue distance(DistanceKind kind, const HermitianOperator& rho,
                       const HermitianOperator& sigma);

struct TriangleCheck {
  bool applicable = false;
  double lhs = 0.0;  // P(ρ, τ)
  double rhs = 0.0;  // P(ρ,σ)F(σ,τ) + P(σ,τ)F(ρ,σ)
};
TriangleCheck tight_triangle_check(const HermitianOperator& rho, const HermitianOperator& sigma,
                                   const HermitianOperator& tau);

struct ChannelDistanceResult {
  BoundInterval interval;
  PureVector best_input;
  MultiStartReport report;
};

// sup over pure ψ on in ⊗ R (|R| = |in|) of P((E⊗id)ψ, (F⊗id)ψ). The lower end
// is attained by the returned input; the upper end adds the start spread.
ChannelDistanceResult channel_purified_distance_full(const Channel& e, const Channel& f,
                                                     const OptimizerConfig& opt = {});
BoundInterval channel_purified_distance(const Channel& e, const Channel& f,
                                        const OptimizerConfig& opt = {});

// Value of the channel objective at a given input on in ⊗ R.
double channel_distance_at(const Channel& e, const Channel& f, const PureVector& input);

}  // namespace oneshot
