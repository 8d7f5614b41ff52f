#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oneshot/hypotest.hpp"
#include "oneshot/qchannels.hpp"
#include "oneshot/registers.hpp"

namespace oneshot {

// a_n → 0 with n a_n² → ∞. ε_n = exp(−n a_n²) uses the natural exponential;
// entropic quantities stay in bits.
class ModerateSequence {
 public:
  static ModerateSequence power(double alpha);  // a_n = n^{−α}
  // Tabulated values; classification by a tail heuristic.
  static ModerateSequence table(std::vector<long long> n, std::vector<double> a);

  bool is_power() const { return power_; }
  double alpha() const { return alpha_; }
  double a(long long n) const;
  // ε_n and 1 − ε_n without cancellation.
  ErrorParam eps(long long n) const;

  const std::vector<long long>& table_n() const { return tn_; }
  const std::vector<double>& table_a() const { return ta_; }

 private:
  bool power_ = true;
  double alpha_ = 0.0;
  std::vector<long long> tn_;
  std::vector<double> ta_;
};

struct SequenceClass {
  bool moderate = false;
  bool strict = false;
  bool heuristic = false;  // true for tables: decided from the tail only
};
SequenceClass classify(const ModerateSequence& seq);

// b_n = √(a_n² − ln(factor)/n) from factor·ε_n = exp(−n b_n²), factor = k or n^r.
struct RescaleFactor {
  enum class Kind { constant, poly } kind = Kind::constant;
  double value = 1.0;  // k for constant, r for poly
};
struct RescaleResult {
  bool past_threshold = false;  // b_n real and b_n ≤ (1 + η) a_n
  double a_n = 0.0;
  double b_n = 0.0;  // NaN when a_n² < ln(factor)/n
};
RescaleResult error_rescale(const ModerateSequence& seq, const RescaleFactor& f, long long n, double eta);

enum class ExpansionTask { state_splitting, source_low, source_high, channel_sim, channel_coding, imax_partial };

const char* task_name(ExpansionTask t);
std::optional<ExpansionTask> parse_task(const std::string& s);

struct ExpansionTerm {
  ExpansionTask task = ExpansionTask::state_splitting;
  double leading = 0.0;       // bits
  double second_coeff = 0.0;  // bits, multiplies a_n
  std::string provenance;
};

// Inputs per task:
//   state_splitting  state ρ_AB, labels = B (A may be empty); uses a purification R
//   source_low/high  state ρ_B, labels ignored
//   imax_partial     state ρ_BR, labels = R
//   channel_*        channel functionals
struct ExpansionInputs {
  std::optional<HermitianOperator> state;
  std::vector<std::string> labels;
  std::optional<ChannelFunctionals> channel;
};

ExpansionTerm expansion_term(ExpansionTask task, const ExpansionInputs& in);
// leading + second_coeff·a_n, bits per copy. channel_sim needs a strictly
// moderate sequence.
double expansion(const ExpansionTerm& term, const ModerateSequence& seq, long long n);

enum class ResidualTask { dh_iid_low, dh_iid_high, imax_upper, imax_lower };

struct ResidualPoint {
  long long n = 0;
  double a_n = 0.0;
  double eps_n = 0.0;
  double computed = 0.0;   // (1/n)·one-shot quantity
  double predicted = 0.0;  // first plus second order
  double residual_over_an = 0.0;
};

struct ResidualCurve {
  std::vector<ResidualPoint> points;
  double slack = 0.0;  // η, in units of a_n
  // Index of the first point from which computed ≤ predicted + η a_n holds at
  // every later point (an empirical index, not a proven threshold); -1 if none.
  int n_star_index = -1;
  std::string provenance;
};

struct ResidualInstance {
  ClassicalIIDSpec iid;                  // dh tasks: p and q (n ignored)
  std::optional<HermitianOperator> rho;  // imax tasks: ρ_BR
  std::vector<std::string> r_labels;
};

struct ResidualOptions {
  double eta_fraction = 0.05;  // η = eta_fraction·(second coefficient) + eta_abs
  double eta_abs = 0.0;
};

ResidualCurve residual_curve(ResidualTask task, const ResidualInstance& inst, const ModerateSequence& seq,
                             const std::vector<long long>& n_list, const ResidualOptions& opt = {});

// n,a_n,eps_n,computed,predicted,residual_over_an
void write_residual_csv(std::ostream& os, const ResidualCurve& c);
void write_expansion_csv(std::ostream& os, const ExpansionTerm& t, const ModerateSequence& seq,
                         const std::vector<long long>& n_list);

}  // namespace oneshot
