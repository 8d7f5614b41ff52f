#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "oneshot/entropies.hpp"
#include "oneshot/registers.hpp"

namespace oneshot {

// Type-I error ε carried together with 1 − ε so that either side can be tiny
// without cancellation (ε_n = e^{−n a_n²} and its complement both occur).
struct ErrorParam {
  double eps = 0.0;
  double one_minus_eps = 1.0;

  static ErrorParam from_eps(double e) { return {e, 1.0 - e}; }
  static ErrorParam from_complement(double c) { return {1.0 - c, c}; }
};

// Raised when a computation cannot produce a trustworthy number (budget or
// range exhausted). Never swallowed internally.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NPCurvePoint {
  double t = 0.0;
  double alpha = 0.0;  // Tr(Λρ)
  double beta = 0.0;   // Tr(Λσ)
  int boundary_dim = 0;
};

struct DhResult {
  EntropyValue value;
  NPCurvePoint point;
  double log2_beta = 0.0;
  Matrix test;  // optimal Λ; empty on the classical paths
  bool commuting = false;
};

// −log min{Tr Λσ : 0 ⪯ Λ ⪯ I, Tr Λρ ≥ 1 − ε}.
DhResult dh_full(const HermitianOperator& rho, const HermitianOperator& sigma, ErrorParam e);
EntropyValue dh(const HermitianOperator& rho, const HermitianOperator& sigma, double eps);
EntropyValue dh(const HermitianOperator& rho, const HermitianOperator& sigma, ErrorParam e);

// Same optimum for diagonal inputs given as spectra; p may be subnormalized.
EntropyValue dh_diagonal(const RVector& p, const RVector& q, ErrorParam e);

// α_>(t), α_≥(t) and their β counterparts for the projectors {ρ − tσ > 0}
// and {ρ − tσ ≥ 0}.
struct NPTestPair {
  double alpha_strict = 0.0, alpha_weak = 0.0;
  double beta_strict = 0.0, beta_weak = 0.0;
  int kernel_dim = 0;
};
NPTestPair np_tests(const Matrix& rho, const Matrix& sigma, double t);

struct ClassicalIIDSpec {
  std::vector<double> p, q;
  int n = 1;
};

struct IIDResult {
  EntropyValue value;
  double log2_beta = 0.0;
  std::uint64_t type_classes = 0;
};

// Type-class evaluation of D_h^ε(p^{⊗n} ‖ q^{⊗n}). Throws NumericalFailure when
// the composition count exceeds `budget`.
IIDResult dh_classical_iid_full(const ClassicalIIDSpec& spec, ErrorParam e,
                                std::uint64_t budget = 4000000);
EntropyValue dh_classical_iid(const ClassicalIIDSpec& spec, double eps);
EntropyValue dh_classical_iid(const ClassicalIIDSpec& spec, ErrorParam e);

// sup{γ : Tr(ρ − 2^γ σ)_+ ≥ 1 − ε}.
EntropyValue info_spectrum(const HermitianOperator& rho, const HermitianOperator& sigma,
                           double eps);
// −D̲_s^ε(ρ‖I).
EntropyValue info_spectrum_entropy(const HermitianOperator& rho, double eps);

}  // namespace oneshot
