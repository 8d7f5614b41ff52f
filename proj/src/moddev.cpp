#include "oneshot/moddev.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <ostream>

#include "oneshot/entropies.hpp"
#include "oneshot/parallel.hpp"
#include "oneshot/smoothing.hpp"

namespace oneshot {

ModerateSequence ModerateSequence::power(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("power sequence: alpha must be positive");
  ModerateSequence s;
  s.power_ = true;
  s.alpha_ = alpha;
  return s;
}

ModerateSequence ModerateSequence::table(std::vector<long long> n, std::vector<double> a) {
  if (n.size() != a.size() || n.size() < 4) throw DomainError("sequence table: need at least 4 matching entries");
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < 1 || !(a[i] > 0.0)) throw DomainError("sequence table: entries must be positive");
    if (i > 0 && n[i] <= n[i - 1]) throw DomainError("sequence table: n must increase");
  }
  ModerateSequence s;
  s.power_ = false;
  s.tn_ = std::move(n);
  s.ta_ = std::move(a);
  return s;
}

double ModerateSequence::a(long long n) const {
  if (n < 1) throw DomainError("sequence: n must be positive");
  if (power_) return std::pow(static_cast<double>(n), -alpha_);
  const auto it = std::lower_bound(tn_.begin(), tn_.end(), n);
  if (it == tn_.end() || *it != n) throw DomainError("sequence table: no entry for n = " + std::to_string(n));
  return ta_[it - tn_.begin()];
}

ErrorParam ModerateSequence::eps(long long n) const {
  const double x = static_cast<double>(n) * a(n) * a(n);
  return {std::exp(-x), -std::expm1(-x)};
}

SequenceClass classify(const ModerateSequence& seq) {
  SequenceClass c;
  if (seq.is_power()) {
    c.moderate = seq.alpha() > 0.0 && seq.alpha() < 0.5;
    c.strict = c.moderate;  // n^{1−2α}/ln n → ∞ whenever 1 − 2α > 0
    return c;
  }
  // Tail test: a_n falls, and n a_n² (resp. n a_n²/ln n) keeps growing over the
  // second half of the table.
  c.heuristic = true;
  const auto& n = seq.table_n();
  const auto& a = seq.table_a();
  const std::size_t m = n.size(), h = m / 2;
  auto growing = [&](auto f) {
    for (std::size_t i = h + 1; i < m; ++i)
      if (!(f(i) > f(i - 1) * (1.0 + 1e-9))) return false;
    return f(m - 1) > f(h) * 1.01;
  };
  const bool falling = growing([&](std::size_t i) { return 1.0 / a[i]; });
  const bool na2 = growing([&](std::size_t i) { return n[i] * a[i] * a[i]; });
  const bool strict = growing([&](std::size_t i) {
    return n[i] * a[i] * a[i] / std::log(static_cast<double>(std::max(n[i], 2LL)));
  });
  c.moderate = falling && na2;
  c.strict = c.moderate && strict;
  return c;
}

RescaleResult error_rescale(const ModerateSequence& seq, const RescaleFactor& f, long long n, double eta) {
  if (!(eta > 0.0)) throw DomainError("error rescale: eta must be positive");
  double log_factor = 0.0;
  if (f.kind == RescaleFactor::Kind::constant) {
    if (!(f.value > 0.0)) throw DomainError("error rescale: k must be positive");
    log_factor = std::log(f.value);
  } else {
    if (!(f.value >= 0.0)) throw DomainError("error rescale: polynomial degree must be nonnegative");
    if (!classify(seq).strict) throw DomainError("error rescale: polynomial factors need a strictly moderate sequence");
    log_factor = f.value * std::log(static_cast<double>(n));
  }
  RescaleResult r;
  r.a_n = seq.a(n);
  const double b2 = r.a_n * r.a_n - log_factor / static_cast<double>(n);
  if (b2 <= 0.0) {
    r.b_n = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.b_n = std::sqrt(b2);
  r.past_threshold = r.b_n <= (1.0 + eta) * r.a_n;
  return r;
}

const char* task_name(ExpansionTask t) {
  switch (t) {
    case ExpansionTask::state_splitting: return "state_splitting";
    case ExpansionTask::source_low: return "source_low";
    case ExpansionTask::source_high: return "source_high";
    case ExpansionTask::channel_sim: return "channel_sim";
    case ExpansionTask::channel_coding: return "channel_coding";
    case ExpansionTask::imax_partial: return "imax_partial";
  }
  return "?";
}

std::optional<ExpansionTask> parse_task(const std::string& s) {
  for (auto t : {ExpansionTask::state_splitting, ExpansionTask::source_low, ExpansionTask::source_high,
                 ExpansionTask::channel_sim, ExpansionTask::channel_coding, ExpansionTask::imax_partial})
    if (s == task_name(t)) return t;
  return std::nullopt;
}

namespace {

std::string fresh(const RegisterShape& s, const std::string& base) {
  std::string l = base;
  while (s.has(l)) l += "_";
  return l;
}

double sqrt_nonneg(double v) { return std::sqrt(std::max(v, 0.0)); }

}  // namespace

ExpansionTerm expansion_term(ExpansionTask task, const ExpansionInputs& in) {
  ExpansionTerm t;
  t.task = task;
  const bool channel_task = task == ExpansionTask::channel_sim || task == ExpansionTask::channel_coding;
  if (channel_task) {
    if (!in.channel) throw DomainError(std::string(task_name(task)) + ": channel functionals required");
    t.leading = in.channel->capacity_like;
    const double v = sqrt_nonneg(in.channel->vmax);
    t.second_coeff = task == ExpansionTask::channel_sim ? v : v / std::sqrt(2.0);
    t.provenance = task == ExpansionTask::channel_sim ? "C(N) + a_n sqrt(V_max)" : "C(N) + a_n sqrt(V_max/2)";
    t.provenance += " (V_max sampled over the optimizer's capacity-achieving cluster: lower bound)";
    return t;
  }
  if (!in.state) throw DomainError(std::string(task_name(task)) + ": state required");
  const HermitianOperator& rho = *in.state;
  require_state(rho, "rho");
  switch (task) {
    case ExpansionTask::state_splitting: {
      if (in.labels.empty()) throw DomainError("state_splitting: B labels required");
      const std::string r = fresh(rho.shape(), "R");
      const HermitianOperator psi = purify(rho, r).projector();
      std::vector<std::string> keep = in.labels;
      keep.push_back(r);
      const HermitianOperator rb = marginal(psi, keep);
      t.leading = 0.5 * mutual_information(rb, {r}).bits;
      t.second_coeff = sqrt_nonneg(mutual_information_variance(rb, {r}).bits);
      t.provenance = "1/2 I(R:B) + a_n sqrt(V(R:B)), R purifying rho_AB";
      break;
    }
    case ExpansionTask::source_low:
      t.leading = von_neumann(rho).bits;
      t.second_coeff = 2.0 * sqrt_nonneg(varentropy(rho).bits);
      t.provenance = "S(B) + 2 a_n sqrt(V(B))";
      break;
    case ExpansionTask::source_high:
      t.leading = von_neumann(rho).bits;
      t.second_coeff = -sqrt_nonneg(varentropy(rho).bits);
      t.provenance = "S(B) - a_n sqrt(V(B)) (achievability only)";
      break;
    case ExpansionTask::imax_partial:
      if (in.labels.empty()) throw DomainError("imax_partial: R labels required");
      t.leading = mutual_information(rho, in.labels).bits;
      t.second_coeff = sqrt_nonneg(4.0 * mutual_information_variance(rho, in.labels).bits);
      t.provenance = "I(B:R) + a_n sqrt(4 V(B:R))";
      break;
    default:
      break;
  }
  return t;
}

double expansion(const ExpansionTerm& term, const ModerateSequence& seq, long long n) {
  if (term.task == ExpansionTask::channel_sim && !classify(seq).strict)
    throw DomainError("channel_sim: the expansion needs a strictly moderate sequence");
  return term.leading + term.second_coeff * seq.a(n);
}

ResidualCurve residual_curve(ResidualTask task, const ResidualInstance& inst, const ModerateSequence& seq,
                             const std::vector<long long>& n_list, const ResidualOptions& opt) {
  ResidualCurve c;
  double lead = 0.0, coeff = 0.0;
  const bool dh_task = task == ResidualTask::dh_iid_low || task == ResidualTask::dh_iid_high;
  if (dh_task) {
    const auto& p = inst.iid.p;
    const auto& q = inst.iid.q;
    if (p.empty() || p.size() != q.size()) throw DomainError("residual: p and q must match");
    double d = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] <= 0.0) continue;
      if (q[i] <= 0.0) throw DomainError("residual: p must be supported on q");
      const double l = std::log2(p[i] / q[i]);
      d += p[i] * l;
      m2 += p[i] * l * l;
    }
    lead = d;
    coeff = std::sqrt(2.0 * std::max(m2 - d * d, 0.0));
    if (task == ResidualTask::dh_iid_low) {
      coeff = -coeff;
      c.provenance = "(1/n) D_h^{eps_n}(p^n||q^n) vs D - sqrt(2V) a_n";
    } else {
      c.provenance = "(1/n) D_h^{1-eps_n}(p^n||q^n) vs D + sqrt(2V) a_n";
    }
  } else {
    if (!inst.rho) throw DomainError("residual: rho_BR required");
    ExpansionInputs in;
    in.state = inst.rho;
    in.labels = inst.r_labels;
    const ExpansionTerm t = expansion_term(ExpansionTask::imax_partial, in);
    lead = t.leading;
    coeff = t.second_coeff;
    c.provenance = task == ResidualTask::imax_upper ? "(1/n) upper end of the partially smoothed I_max enclosure vs I + sqrt(4V) a_n"
                                                    : "(1/n) lower end of the partially smoothed I_max enclosure vs I + sqrt(4V) a_n";
  }
  c.slack = opt.eta_fraction * std::abs(coeff) + opt.eta_abs;

  c.points.resize(n_list.size());
  parallel_for(static_cast<int>(n_list.size()), [&](int i) {
    const long long n = n_list[i];
    ResidualPoint& pt = c.points[i];
    pt.n = n;
    pt.a_n = seq.a(n);
    const ErrorParam e = seq.eps(n);
    pt.eps_n = e.eps;
    if (dh_task) {
      ClassicalIIDSpec s = inst.iid;
      s.n = static_cast<int>(n);
      const ErrorParam use = task == ResidualTask::dh_iid_low ? e : ErrorParam{e.one_minus_eps, e.eps};
      pt.computed = dh_classical_iid(s, use).bits / static_cast<double>(n);
    } else {
      const BoundInterval b = imax_partially_smoothed_bounds(*inst.rho, inst.r_labels, static_cast<int>(n), e.eps);
      pt.computed = (task == ResidualTask::imax_upper ? b.upper : b.lower) / static_cast<double>(n);
    }
    pt.predicted = lead + coeff * pt.a_n;
    pt.residual_over_an = (pt.computed - pt.predicted) / pt.a_n;
  });

  // The lower end of the I_max enclosure is checked from below, everything else from above.
  auto holds = [&](const ResidualPoint& p) {
    return task == ResidualTask::imax_lower ? p.residual_over_an >= -c.slack : p.residual_over_an <= c.slack;
  };
  for (int i = static_cast<int>(c.points.size()) - 1; i >= 0 && holds(c.points[i]); --i) c.n_star_index = i;
  return c;
}

namespace {

void write_header(std::ostream& os) { os << "n,a_n,eps_n,computed,predicted,residual_over_an\n"; }

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_residual_csv(std::ostream& os, const ResidualCurve& c) {
  write_header(os);
  for (const auto& p : c.points)
    os << p.n << ',' << num(p.a_n) << ',' << num(p.eps_n) << ',' << num(p.computed) << ','
       << num(p.predicted) << ',' << num(p.residual_over_an) << '\n';
}

void write_expansion_csv(std::ostream& os, const ExpansionTerm& t, const ModerateSequence& seq,
                         const std::vector<long long>& n_list) {
  write_header(os);
  for (long long n : n_list)
    os << n << ',' << num(seq.a(n)) << ',' << num(seq.eps(n).eps) << ",," << num(expansion(t, seq, n)) << ",\n";
}

}  // namespace oneshot
