#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oneshot/channel.hpp"
#include "oneshot/registers.hpp"

namespace oneshot {

// Convex split: τ_{B_I R} = (1/n) Σᵢ ρ_{BᵢR} ⊗ σ_{B_{I∖i}} against σ_B^{⊗n} ⊗ ρ_R.
struct ConvexSplitInstance {
  HermitianOperator rho_br;
  std::vector<std::string> b_labels;  // the remaining labels of rho_br form R
  HermitianOperator sigma_b;          // on the B labels
  int n = 1;
  double delta = 0.5;
};

struct ConvexSplitCheck {
  double fidelity = 0.0;
  double bound = 0.0;           // √(1 − δ)
  double dmax = 0.0;            // D_max(ρ_BR ‖ σ_B ⊗ ρ_R)
  bool hypothesis = false;      // log n ≥ D_max + log 1/δ
  bool pass = false;            // fidelity ≥ bound − 1e-9, or hypothesis false
};

// Registers B1..Bn (copies of the B labels with suffix i) followed by R.
HermitianOperator convex_split_state(const ConvexSplitInstance& inst);
HermitianOperator convex_split_target(const ConvexSplitInstance& inst);
ConvexSplitCheck convex_split_check(const ConvexSplitInstance& inst);

// Smallest block count meeting the hypothesis with slack: ceil(2^{D_max + log 1/δ²}).
long long convex_split_blocks(double dmax_bits, double delta);
// Communication of the convex-split construction: ½ log n (super-dense coding of the index).
double convex_split_cost(long long n);

struct DeFinettiObjects {
  int n = 1, d = 2;
  std::uint64_t g = 1;         // binom(n + d² − 1, n)
  double g_bound = 1.0;        // (n + 1)^{d² − 1}
  HermitianOperator zeta;      // Π_sym / Tr Π_sym on (C^d)^{⊗n}, registers A1..An
  double sym_dimension = 1.0;  // Tr Π_sym = binom(n + d − 1, n)
};
DeFinettiObjects de_finetti(int n, int d);
std::uint64_t binomial(int n, int k);
// √(2 g_{n,d}) and the looser √2 (n + 1)^{(d² − 1)/2}.
double postselection_factor(int n, int d);
double postselection_factor_bound(int n, int d);
// ‖ζ − mean of σ^{⊗n}‖₁ over Haar pure σ on C^d (no factor 1/2, as trace_distance).
double de_finetti_monte_carlo(const DeFinettiObjects& obj, int samples, std::uint64_t seed);

// T̄ = (1/n!) Σ_π π_out⁻¹ ∘ T ∘ π_in for T on n identical input and output registers.
Channel symmetrize(const Channel& t, int n);
struct SymmetrizeCheck {
  double covariant_residual = 0.0;  // max |Choi(T̄∘π_in) − Choi(π_out∘T̄)| over sampled π
  double p_original = 0.0;          // P(target, T(input))
  double p_symmetrized = 0.0;       // P(target, T̄(input))
};
// input and target must be permutation invariant on the n registers.
SymmetrizeCheck symmetrize_check(const Channel& t, int n, const std::vector<std::vector<int>>& perms,
                                 const HermitianOperator& input, const HermitianOperator& target);

// Worst P(p ψ + (1 − p) ψ⊥, ψ) over sampled pure ψ on C^d ⊗ C^d.
struct TeleportCheck {
  double worst = 0.0;
  double bound = 0.0;  // √(1 − p)
  bool pass = true;
};
TeleportCheck teleport_coding_check(double p_succ, int d, int samples, std::uint64_t seed);

struct StrongConverseCheck {
  double p_succ = 0.0;
  double bound = 0.0;  // 2^{−n(r − log d)}
  bool pass = true;
};
// r in bits per use; the codebook has 2^{nr} entries on (C^d)^{⊗n}.
StrongConverseCheck strong_converse_check(const std::vector<Matrix>& states, const std::vector<Matrix>& povm,
                                          double r, int d, int n);

// (1 − ε)√(1 − ε) + √ε √(1 − (1 − ε)²): the triangle-inequality bound on
// P(T̃, I) when P(T̃, Ñ) ≤ √ε and P(Ñ, I) ≤ 1 − ε.
double coding_converse_chain(double eps);
// First-order slope of the chain at 0: 3/2 − √2.
double coding_converse_slope();

// Prop-level fudge term of the channel simulation achievability bound, with
// ε′ = ε/√2 · (n + 1)^{(1 − |A|²)/2}.
double channel_sim_radius(double eps, int dim_a, long long n);
double channel_sim_fudge(double eps, int dim_a, long long n);

}  // namespace oneshot
