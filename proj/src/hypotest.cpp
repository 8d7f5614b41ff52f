#include "oneshot/hypotest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace oneshot {

namespace {

using ld = long double;
constexpr ld kNegInf = -std::numeric_limits<ld>::infinity();

ld log_add(ld a, ld b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const ld m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// ln(e^a − e^b) for a ≥ b.
ld log_sub(ld a, ld b) {
  if (b == kNegInf) return a;
  if (b >= a) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

// One outcome class of a classical test: ln of its p- and q-mass and its
// log-likelihood ratio (±inf allowed).
struct Group {
  ld lp, lq, llr;
};

// Sum of exponentials in the log domain with Kahan compensation on the scaled terms.
struct LogSum {
  std::vector<ld> terms;
  ld value() const {
    ld m = kNegInf;
    for (ld t : terms) m = std::max(m, t);
    if (m == kNegInf) return kNegInf;
    ld s = 0, c = 0;
    for (ld t : terms) {
      const ld y = std::exp(t - m) - c;
      const ld z = s + y;
      c = (z - s) - y;
      s = z;
    }
    return m + std::log(s);
  }
};

void check_error(ErrorParam e) {
  if (!(e.eps >= 0.0) || !(e.one_minus_eps > 0.0) || e.eps > 1.0)
    throw DomainError("type-I error must lie in [0, 1)");
}

// Optimal randomized Neyman–Pearson test over groups already sorted by
// decreasing likelihood ratio. deficit = 1 − Σp (0 for normalized p).
// Returns ln β; −inf means a zero type-II error is attainable.
ld classical_np(const std::vector<Group>& g, ErrorParam e, ld deficit) {
  const std::size_t m = g.size();
  LogSum beta;
  if (e.eps <= 0.5) {
    // Mass we may leave out: ε − (1 − Σp). Walk up from the bottom.
    const ld slack = static_cast<ld>(e.eps) - deficit;
    if (slack < -1e-15L) throw DomainError("hypothesis test infeasible: Tr rho < 1 - eps");
    const ld lslack = slack > 0 ? std::log(slack) : kNegInf;
    ld lex = kNegInf;
    std::size_t cut = m;  // groups [0, cut) fully included
    ld frac = 0;           // included fraction of group `cut`
    for (std::size_t k = m; k-- > 0;) {
      const ld next = log_add(lex, g[k].lp);
      if (next <= lslack) {
        lex = next;
        cut = k;
        continue;
      }
      const ld lx = log_sub(lslack, lex) - g[k].lp;  // excluded fraction
      frac = 1 - std::exp(lx);
      cut = k;
      break;
    }
    for (std::size_t k = 0; k < cut; ++k) beta.terms.push_back(g[k].lq);
    if (cut < m && frac > 0) beta.terms.push_back(g[cut].lq + std::log(frac));
  } else {
    const ld need = e.one_minus_eps;
    const ld lneed = std::log(need);
    ld lin = kNegInf;
    bool done = false;
    for (std::size_t k = 0; k < m; ++k) {
      const ld next = log_add(lin, g[k].lp);
      if (next < lneed) {
        lin = next;
        beta.terms.push_back(g[k].lq);
        continue;
      }
      const ld lf = log_sub(lneed, lin) - g[k].lp;
      if (lf > kNegInf) beta.terms.push_back(g[k].lq + lf);
      done = true;
      break;
    }
    if (!done && lneed - lin > 1e-13L)
      throw DomainError("hypothesis test infeasible: Tr rho < 1 - eps");
  }
  return beta.value();
}

EntropyValue from_log_beta(ld lb) {
  if (lb == kNegInf) return EntropyValue::infinite();
  return {static_cast<double>(-lb / std::log(2.0L)), true};
}

std::vector<Group> diagonal_groups(const RVector& p, const RVector& q) {
  std::vector<Group> g;
  std::vector<int> idx;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const ld pi = std::max(p(i), 0.0), qi = std::max(q(i), 0.0);
    if (pi == 0 && qi == 0) continue;
    const ld lp = pi > 0 ? std::log(pi) : kNegInf;
    const ld lq = qi > 0 ? std::log(qi) : kNegInf;
    ld llr;
    if (qi == 0) llr = std::numeric_limits<ld>::infinity();
    else if (pi == 0) llr = kNegInf;
    else llr = lp - lq;
    g.push_back({lp, lq, llr});
    idx.push_back(static_cast<int>(i));
  }
  std::vector<int> ord(g.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return g[a].llr > g[b].llr; });
  std::vector<Group> out;
  out.reserve(g.size());
  for (int k : ord) out.push_back(g[k]);
  return out;
}

ld deficit_of(const RVector& p) {
  ld s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += std::max(p(i), 0.0);
  const ld d = 1 - s;
  return std::abs(d) <= 1e-12L ? 0 : std::max<ld>(d, 0);
}

// Joint eigenbasis of commuting ρ, σ, or false when they do not commute.
bool joint_spectra(const Matrix& rho, const Matrix& sigma, RVector& p, RVector& q) {
  const double scale = std::max(rho.cwiseAbs().maxCoeff(), sigma.cwiseAbs().maxCoeff());
  const auto is_diag = [&](const Matrix& m) {
    return (m - Matrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-14 * std::max(scale, 1e-300);
  };
  if (is_diag(rho) && is_diag(sigma)) {
    p = rho.diagonal().real();
    q = sigma.diagonal().real();
    return true;
  }
  if ((rho * sigma - sigma * rho).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale * scale, 1e-300))
    return false;
  // Generic combination splits joint eigenspaces.
  const auto es = eig_hermitian(hermitian_part(rho + 0.6180339887498949 * sigma));
  const Matrix rd = es.vectors.adjoint() * rho * es.vectors;
  const Matrix sd = es.vectors.adjoint() * sigma * es.vectors;
  if (!is_diag(rd) || !is_diag(sd)) return false;
  p = rd.diagonal().real();
  q = sd.diagonal().real();
  return true;
}

double spectral_norm_psd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct NPEval {
  NPTestPair pair;
  Matrix pos;     // projector {ρ − tσ > 0}
  Matrix kernel;  // orthonormal columns spanning ker(ρ − tσ)
};

NPEval np_eval(const Matrix& rho, const Matrix& sigma, double t, double nr, double ns) {
  const auto es = eig_hermitian(hermitian_part(rho - t * sigma));
  const double tol = 1e-11 * (nr + t * ns);
  const int d = static_cast<int>(rho.rows());
  NPEval ev;
  ev.pos = Matrix::Zero(d, d);
  std::vector<int> ker;
  for (int i = 0; i < d; ++i) {
    const auto v = es.vectors.col(i);
    const double a = (v.adjoint() * rho * v)(0, 0).real();
    const double b = (v.adjoint() * sigma * v)(0, 0).real();
    if (es.values(i) > tol) {
      ev.pos += v * v.adjoint();
      ev.pair.alpha_strict += a;
      ev.pair.beta_strict += b;
    } else if (es.values(i) >= -tol) {
      ker.push_back(i);
      ev.pair.alpha_weak += a;
      ev.pair.beta_weak += b;
    }
  }
  ev.pair.alpha_weak += ev.pair.alpha_strict;
  ev.pair.beta_weak += ev.pair.beta_strict;
  ev.pair.kernel_dim = static_cast<int>(ker.size());
  ev.kernel = Matrix(d, ker.size());
  for (std::size_t k = 0; k < ker.size(); ++k) ev.kernel.col(k) = es.vectors.col(ker[k]);
  return ev;
}

// Λ = {ρ − tσ > 0} plus partial weight on the kernel, filled along the
// σ-eigenbasis of the kernel in ascending σ-weight order.
DhResult kernel_fill(const Matrix& rho, const Matrix& sigma, const NPEval& ev, double t, double need) {
  DhResult r;
  r.test = ev.pos;
  double alpha = ev.pair.alpha_strict, beta = ev.pair.beta_strict;
  if (ev.kernel.cols() > 0) {
    const Matrix sk = hermitian_part(ev.kernel.adjoint() * sigma * ev.kernel);
    const auto ek = eig_hermitian(sk);
    for (Eigen::Index j = 0; j < ek.values.size() && alpha < need; ++j) {
      const Vector u = ev.kernel * ek.vectors.col(j);
      const double a = (u.adjoint() * rho * u)(0, 0).real();
      if (a <= 0.0) continue;
      const double w = std::min(1.0, (need - alpha) / a);
      const double b = (u.adjoint() * sigma * u)(0, 0).real();
      r.test += w * u * u.adjoint();
      alpha += w * a;
      beta += w * std::max(b, 0.0);
    }
  }
  r.point = {t, alpha, beta, ev.pair.kernel_dim};
  return r;
}

DhResult finish(DhResult r) {
  if (r.point.beta <= 0.0) {
    r.value = EntropyValue::infinite();
    r.log2_beta = -std::numeric_limits<double>::infinity();
  } else {
    r.log2_beta = std::log2(r.point.beta);
    r.value = {-r.log2_beta, true};
  }
  return r;
}

DhResult dh_general(const Matrix& rho, const Matrix& sigma, double need) {
  const int d = static_cast<int>(rho.rows());
  const double nr = spectral_norm_psd(rho), ns = spectral_norm_psd(sigma);

  // β = 0 is attainable iff ker σ carries enough ρ-mass.
  const Matrix pker = Matrix::Identity(d, d) - support_projector(sigma);
  if ((pker * rho).trace().real() >= need - 1e-14) {
    DhResult r;
    r.test = pker;
    r.point = {std::numeric_limits<double>::infinity(), (pker * rho).trace().real(), 0.0, 0};
    return finish(r);
  }

  auto settles = [&](const NPTestPair& p) {
    return p.alpha_strict <= need && need <= p.alpha_weak + 1e-13;
  };

  // Candidate breakpoints: the t at which ρ − tσ loses rank.
  std::vector<double> crit{0.0};
  const auto es = eig_hermitian(sigma);
  const bool full_rank = es.values.minCoeff() > kKernelCutoff * es.values.cwiseAbs().maxCoeff();
  if (full_rank) {
    const Matrix w = power_psd(sigma, -0.5);
    const auto eg = eig_hermitian(hermitian_part(w * rho * w));
    for (Eigen::Index i = 0; i < eg.values.size(); ++i)
      if (eg.values(i) > 0.0) crit.push_back(eg.values(i));
    std::sort(crit.begin(), crit.end());
  }

  double lo = 0.0, hi = 0.0;
  NPEval elo = np_eval(rho, sigma, 0.0, nr, ns), ehi;
  if (settles(elo.pair)) return finish(kernel_fill(rho, sigma, elo, 0.0, need));
  bool bracketed = false;
  if (full_rank) {
    for (std::size_t k = 1; k < crit.size(); ++k) {
      NPEval ek = np_eval(rho, sigma, crit[k], nr, ns);
      if (settles(ek.pair)) return finish(kernel_fill(rho, sigma, ek, crit[k], need));
      if (ek.pair.alpha_strict < need) {
        hi = crit[k];
        ehi = std::move(ek);
        bracketed = true;
        break;
      }
      lo = crit[k];
      elo = std::move(ek);
    }
  }
  if (!bracketed) {
    hi = std::max(1.0, 2.0 * lo);
    for (int it = 0; it < 2100; ++it) {
      ehi = np_eval(rho, sigma, hi, nr, ns);
      if (settles(ehi.pair)) return finish(kernel_fill(rho, sigma, ehi, hi, need));
      if (ehi.pair.alpha_strict < need) {
        bracketed = true;
        break;
      }
      lo = hi;
      elo = ehi;
      hi *= 2.0;
    }
    if (!bracketed) throw NumericalFailure("dh: no threshold bracket found");
  }

  // α_> is continuous inside the bracket apart from kernel jumps caught above.
  for (int it = 0; it < 200; ++it) {
    if (elo.pair.alpha_strict - ehi.pair.alpha_strict <= 1e-14 || hi - lo <= 4e-16 * hi) break;
    const double mid = 0.5 * (lo + hi);
    NPEval em = np_eval(rho, sigma, mid, nr, ns);
    if (settles(em.pair)) return finish(kernel_fill(rho, sigma, em, mid, need));
    if (em.pair.alpha_strict > need) {
      lo = mid;
      elo = std::move(em);
    } else {
      hi = mid;
      ehi = std::move(em);
    }
  }
  // Close the constraint exactly by mixing the two bracketing tests.
  const double al = elo.pair.alpha_strict, ah = ehi.pair.alpha_strict;
  const double w = al > ah ? std::clamp((need - ah) / (al - ah), 0.0, 1.0) : 1.0;
  DhResult r;
  r.test = w * elo.pos + (1.0 - w) * ehi.pos;
  r.point = {0.5 * (lo + hi), w * al + (1.0 - w) * ah,
             w * elo.pair.beta_strict + (1.0 - w) * ehi.pair.beta_strict, 0};
  return finish(r);
}

}  // namespace

NPTestPair np_tests(const Matrix& rho, const Matrix& sigma, double t) {
  return np_eval(rho, sigma, t, spectral_norm_psd(rho), spectral_norm_psd(sigma)).pair;
}

EntropyValue dh_diagonal(const RVector& p, const RVector& q, ErrorParam e) {
  check_error(e);
  if (p.size() != q.size()) throw DomainError("dh: spectra differ in length");
  return from_log_beta(classical_np(diagonal_groups(p, q), e, deficit_of(p)));
}

DhResult dh_full(const HermitianOperator& rho, const HermitianOperator& sigma, ErrorParam e) {
  check_error(e);
  require_same_shape(rho, sigma);
  require_subnormalized(rho, "rho");
  require_psd(sigma, "sigma");
  if (rho.dim() > 4096) throw DomainError("dh: dimension above the 4096 cutoff");
  const double tr = rho.trace();
  if (tr < e.one_minus_eps - 1e-12) throw DomainError("hypothesis test infeasible: Tr rho < 1 - eps");

  RVector p, q;
  if (joint_spectra(rho.matrix(), sigma.matrix(), p, q)) {
    DhResult r;
    r.commuting = true;
    const ld lb = classical_np(diagonal_groups(p, q), e, deficit_of(p));
    r.value = from_log_beta(lb);
    r.log2_beta = static_cast<double>(lb / std::log(2.0L));
    r.point.alpha = e.one_minus_eps;
    r.point.beta = static_cast<double>(std::exp(lb));
    return r;
  }
  return dh_general(rho.matrix(), sigma.matrix(), e.one_minus_eps);
}

EntropyValue dh(const HermitianOperator& rho, const HermitianOperator& sigma, ErrorParam e) {
  return dh_full(rho, sigma, e).value;
}

EntropyValue dh(const HermitianOperator& rho, const HermitianOperator& sigma, double eps) {
  return dh(rho, sigma, ErrorParam::from_eps(eps));
}

IIDResult dh_classical_iid_full(const ClassicalIIDSpec& spec, ErrorParam e, std::uint64_t budget) {
  check_error(e);
  if (spec.p.size() != spec.q.size() || spec.p.empty())
    throw DomainError("dh_classical_iid: p and q must be nonempty and of equal length");
  if (spec.p.size() > 8) throw DomainError("dh_classical_iid: alphabet larger than 8");
  if (spec.n < 1 || spec.n > 100000) throw DomainError("dh_classical_iid: n must lie in [1, 1e5]");
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < spec.p.size(); ++i) {
    if (spec.p[i] < 0.0 || spec.q[i] < 0.0) throw DomainError("dh_classical_iid: negative probability");
    sp += spec.p[i];
    sq += spec.q[i];
  }
  if (std::abs(sp - 1.0) > 1e-12 || std::abs(sq - 1.0) > 1e-12)
    throw DomainError("dh_classical_iid: p and q must sum to 1");

  // Symbols with p = q = 0 never occur.
  std::vector<ld> lp, lq, lr;
  for (std::size_t i = 0; i < spec.p.size(); ++i) {
    if (spec.p[i] == 0.0 && spec.q[i] == 0.0) continue;
    lp.push_back(spec.p[i] > 0 ? std::log(static_cast<ld>(spec.p[i])) : kNegInf);
    lq.push_back(spec.q[i] > 0 ? std::log(static_cast<ld>(spec.q[i])) : kNegInf);
    if (spec.q[i] == 0.0) lr.push_back(std::numeric_limits<ld>::infinity());
    else if (spec.p[i] == 0.0) lr.push_back(kNegInf);
    else lr.push_back(lp.back() - lq.back());
  }
  const int k = static_cast<int>(lp.size());
  const int n = spec.n;
  const double count = std::exp(std::lgamma(n + k) - std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k)));
  if (count > static_cast<double>(budget))
    throw NumericalFailure("dh_classical_iid: " + std::to_string(static_cast<long double>(count)) +
                           " type classes exceed the budget");

  std::vector<Group> groups;
  groups.reserve(static_cast<std::size_t>(count + 1.5));
  const ld lfn = std::lgamma(static_cast<ld>(n) + 1);
  std::vector<int> c(k, 0);
  // Lexicographically decreasing compositions of n into k parts.
  c[0] = n;
  while (true) {
    ld gp = lfn, gq = lfn, llr = 0;
    bool pos_inf = false, neg_inf = false;
    for (int i = 0; i < k; ++i) {
      if (c[i] == 0) continue;
      const ld lf = std::lgamma(static_cast<ld>(c[i]) + 1);
      gp = lp[i] == kNegInf ? kNegInf : gp + c[i] * lp[i] - lf;
      gq = lq[i] == kNegInf ? kNegInf : gq + c[i] * lq[i] - lf;
      if (std::isinf(lr[i])) (lr[i] > 0 ? pos_inf : neg_inf) = true;
      else llr += c[i] * lr[i];
    }
    if (!(gp == kNegInf && gq == kNegInf)) {
      if (neg_inf) llr = kNegInf;
      else if (pos_inf) llr = std::numeric_limits<ld>::infinity();
      groups.push_back({gp, gq, llr});
    }
    // next composition
    int j = k - 2;
    while (j >= 0 && c[j] == 0) --j;
    if (j < 0) break;
    --c[j];
    const int rest = c[k - 1] + 1;
    c[k - 1] = 0;
    c[j + 1] = rest;
  }
  // Stable sort keeps lexicographic order among equal ratios.
  std::stable_sort(groups.begin(), groups.end(),
                   [](const Group& a, const Group& b) { return a.llr > b.llr; });
  IIDResult out;
  out.type_classes = groups.size();
  const ld lb = classical_np(groups, e, 0);
  out.value = from_log_beta(lb);
  out.log2_beta = static_cast<double>(lb / std::log(2.0L));
  return out;
}

EntropyValue dh_classical_iid(const ClassicalIIDSpec& spec, ErrorParam e) {
  return dh_classical_iid_full(spec, e).value;
}

EntropyValue dh_classical_iid(const ClassicalIIDSpec& spec, double eps) {
  return dh_classical_iid(spec, ErrorParam::from_eps(eps));
}

namespace {

double positive_trace(const Matrix& rho, const Matrix& sigma, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(rho - t * sigma), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::max(es.eigenvalues()(i), 0.0);
  return s;
}

// Commuting case: Σ_i (p_i − t q_i)_+ is piecewise linear in t, solved exactly.
EntropyValue info_spectrum_classical(const RVector& p, const RVector& q, double need) {
  std::vector<int> idx;
  double inf_mass = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    if (q(i) <= 0.0) inf_mass += p(i);
    else idx.push_back(static_cast<int>(i));
  }
  if (inf_mass >= need) return EntropyValue::infinite();
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return p(a) * q(b) > p(b) * q(a); });
  // Active set = first m ratios; on that piece f(t) = A − tB.
  double a = inf_mass, b = 0.0;
  for (std::size_t m = 0; m < idx.size(); ++m) {
    a += p(idx[m]);
    b += q(idx[m]);
    const double t_next = m + 1 < idx.size() ? p(idx[m + 1]) / q(idx[m + 1]) : 0.0;
    const double f_next = a - t_next * b;
    if (f_next >= need) {
      const double t = (a - need) / b;
      return {std::log2(t), true};
    }
  }
  return EntropyValue::negative_infinite();
}

}  // namespace

EntropyValue info_spectrum(const HermitianOperator& rho, const HermitianOperator& sigma, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("info_spectrum: eps must lie in (0, 1)");
  require_same_shape(rho, sigma);
  require_subnormalized(rho, "rho");
  require_psd(sigma, "sigma");
  const double need = 1.0 - eps;
  if (rho.trace() < need) return EntropyValue::negative_infinite();

  RVector p, q;
  if (joint_spectra(rho.matrix(), sigma.matrix(), p, q)) return info_spectrum_classical(p, q, need);

  const Matrix& r = rho.matrix();
  const Matrix& s = sigma.matrix();
  const auto f = [&](double t) { return positive_trace(r, s, t); };

  // Breakpoint sweep, then bisection inside the active smooth piece.
  std::vector<double> crit;
  const auto es = eig_hermitian(s);
  if (es.values.minCoeff() > kKernelCutoff * es.values.cwiseAbs().maxCoeff()) {
    const Matrix w = power_psd(s, -0.5);
    const auto eg = eig_hermitian(hermitian_part(w * r * w));
    for (Eigen::Index i = 0; i < eg.values.size(); ++i)
      if (eg.values(i) > 0.0) crit.push_back(eg.values(i));
    std::sort(crit.begin(), crit.end());
  }
  double lo = 0.0, hi = -1.0, flo = f(0.0);
  for (double t : crit) {
    const double ft = f(t);
    if (ft > flo + 1e-12) throw NumericalFailure("info_spectrum: objective not monotone in gamma");
    if (ft < need) {
      hi = t;
      break;
    }
    lo = t;
    flo = ft;
  }
  if (hi < 0.0) {
    hi = std::max(1.0, 2.0 * lo);
    while (f(hi) >= need) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return EntropyValue::infinite();
    }
  }
  for (int it = 0; it < 300 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= need) lo = mid;
    else hi = mid;
  }
  if (lo <= 0.0) return EntropyValue::negative_infinite();
  return {std::log2(lo), true};
}

EntropyValue info_spectrum_entropy(const HermitianOperator& rho, double eps) {
  const EntropyValue d = info_spectrum(rho, HermitianOperator::identity(rho.shape()), eps);
  return {-d.bits, d.finite};
}

}  // namespace oneshot
