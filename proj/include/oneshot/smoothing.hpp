#pragma once

#include <string>
#include <vector>

#include "oneshot/bounds.hpp"
#include "oneshot/hypotest.hpp"
#include "oneshot/registers.hpp"

namespace oneshot {

// Enclosure of D_max^ε(ρ‖σ) from hypothesis testing:
//   D_h^{1−ε²−δ} − log 4/δ²  ≤  D_max^ε  ≤  min(D_h^{1−ε²} + log 1/(1−ε²), D_max).
// δ ≤ 0 selects the default (1 − ε²)/2.
BoundInterval dmax_smoothed_bounds(const HermitianOperator& rho, const HermitianOperator& sigma,
                                   double eps, double delta = 0.0);

// −log(1 − (ε²√k + √(1−kε²)√(1−ε²))²), evaluated as −log sin²(asin(√k ε) − asin ε).
double dmin_hypothesis_penalty(double eps, double k);
// −log(1 − (ε√(1−ε′²) + ε′√(1−ε²))²) = −log cos²(asin ε + asin ε′).
double dmin_dmax_penalty(double eps, double eps_prime);

// D_min^ε(ρ‖σ) ≤ D_h^{kε²} + dmin_hypothesis_penalty(ε, k) − log kε². The last
// term comes from converting D_max^{√(1−kε²)} into D_h^{kε²}.
// Requires 0 < ε ≤ k^{−1/2}, k > 1.
double dmin_smoothed_upper(const HermitianOperator& rho, const HermitianOperator& sigma,
                           double eps, double k = 2.0);
// D_min(ρ‖σ): ρ itself is in the ball.
double dmin_smoothed_lower(const HermitianOperator& rho, const HermitianOperator& sigma, double eps);
// Both ends; eps_prime > 0 adds the D_max^{ε′} route and keeps the smaller upper end.
BoundInterval dmin_smoothed_bounds(const HermitianOperator& rho, const HermitianOperator& sigma,
                                   double eps, double k = 2.0, double eps_prime = 0.0);

struct PartialImaxOptions {
  double k = 2.0;                 // D_h^{kε²} parameter on the dual side
  int explicit_cutoff = 4096;     // largest explicit tensor dimension
  std::string purifier = "P";     // label of the purifying register
  bool prefer_explicit = false;   // skip the type-class route for diagonal input
};

// Enclosure of the partially smoothed max-information I_max^ε(Ṙⁿ;Bⁿ) of ρ_BR^{⊗n}.
// Upper end through D_h of ρ^{⊗n} against ρ_B^{⊗n}⊗ρ_R^{⊗n}; lower end through the
// dual instance ρ_{RR'} ‖ ρ_R^{−1}⊗ρ_{R'} of a purification. Explicit tensors while
// they fit the cutoff, otherwise diagonal ρ_BR through type classes.
BoundInterval imax_partially_smoothed_bounds(const HermitianOperator& rho_br,
                                             const std::vector<std::string>& r_labels, int n,
                                             double eps, const PartialImaxOptions& opt = {});

// log β* of D_h for the dual instance of a classical joint distribution
// p[b][r] over n copies, via the block secular equation and the LP dual.
double dual_instance_log2_beta(const std::vector<std::vector<double>>& p_br, int n, ErrorParam e);

// Exact smoothed quantities for diagonal inputs (at most 3 outcomes per
// register, 9 in total). The ball is the purified-distance ball of
// subnormalized states.
enum class SmoothingKind { dmin, dmax, imax_partial };

double oracle_dmax(const std::vector<double>& p, const std::vector<double>& q, double eps);
// Optimum over diagonal ρ̄; dephasing can only raise F(ρ̄, σ), so this is the
// diagonal restriction of the supremum.
double oracle_dmin(const std::vector<double>& p, const std::vector<double>& q, double eps);
// p_br[b][r]; the R marginal is held fixed.
double oracle_imax_partial(const std::vector<std::vector<double>>& p_br, double eps);

double exact_smoothing_oracle(SmoothingKind kind, const HermitianOperator& rho,
                              const HermitianOperator& sigma, double eps);
// imax_partial on operators: r_labels name the fixed-marginal side.
double exact_smoothing_oracle(const HermitianOperator& rho_br,
                              const std::vector<std::string>& r_labels, double eps);

}  // namespace oneshot
