#pragma once

#include <limits>
#include <string>
#include <vector>

#include "oneshot/registers.hpp"

namespace oneshot {

// All values in bits. finite == false encodes a failed support condition;
// bits then holds +inf.
struct EntropyValue {
  double bits = 0.0;
  bool finite = true;

  static EntropyValue infinite() { return {std::numeric_limits<double>::infinity(), false}; }
  static EntropyValue negative_infinite() {
    return {-std::numeric_limits<double>::infinity(), false};
  }
};

EntropyValue von_neumann(const HermitianOperator& rho);
EntropyValue varentropy(const HermitianOperator& rho);

// True when supp ρ ⊆ supp σ under the shared kernel cutoff.
bool supported_on(const HermitianOperator& rho, const HermitianOperator& sigma);

EntropyValue relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma);
EntropyValue relative_entropy_variance(const HermitianOperator& rho,
                                       const HermitianOperator& sigma);

EntropyValue sandwiched_renyi(const HermitianOperator& rho, const HermitianOperator& sigma,
                              double alpha);
// (1/(α−1)) log Tr(ρ^α σ^{1−α}).
EntropyValue petz_renyi(const HermitianOperator& rho, const HermitianOperator& sigma,
                        double alpha);
EntropyValue dmax(const HermitianOperator& rho, const HermitianOperator& sigma);
EntropyValue dmin(const HermitianOperator& rho, const HermitianOperator& sigma);

// ρ_A ⊗ ρ_B arranged in ρ's register order; a_labels name the A side.
HermitianOperator product_of_marginals(const HermitianOperator& rho,
                                       const std::vector<std::string>& a_labels);
EntropyValue mutual_information(const HermitianOperator& rho,
                                const std::vector<std::string>& a_labels);
EntropyValue mutual_information_variance(const HermitianOperator& rho,
                                         const std::vector<std::string>& a_labels);

struct ImaxCertificate {
  Matrix x_b;            // primal optimum: τ_A ⊗ X_B ⪰ ρ_AB
  Matrix dual;           // Y ⪰ 0 on the support of τ ⊗ B with Tr_A Y = I_B
  double primal = 0.0;   // Tr X_B
  double dual_value = 0.0;
  double relative_gap = 0.0;
  double feasibility_residual = 0.0;  // min eigenvalue of τ⊗X − ρ
  int iterations = 0;
};

struct ImaxResult {
  EntropyValue value;
  ImaxCertificate certificate;
};

// min over X_B ⪰ 0 of log Tr X_B subject to τ_A ⊗ X_B ⪰ ρ_AB. The A side is the
// set of labels of τ.
ImaxResult imax_certified(const HermitianOperator& rho, const HermitianOperator& tau);
EntropyValue imax(const HermitianOperator& rho, const HermitianOperator& tau);

struct RenyiMIResult {
  EntropyValue value;
  bool exact = true;  // false: sampled σ_B, the value is only an upper bound
  Matrix sigma_b;
  int iterations = 0;
};

// min over states σ_B of D̃_α(ρ_AB ‖ τ_A ⊗ σ_B). α = 1/2 by fixed point, α = ∞
// through the conic program; other α only with allow_sampled (upper bound).
RenyiMIResult renyi_mutual_information(const HermitianOperator& rho,
                                       const HermitianOperator& tau, double alpha,
                                       bool allow_sampled = false, std::uint64_t seed = 1);

}  // namespace oneshot
