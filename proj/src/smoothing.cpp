#include "oneshot/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "oneshot/entropies.hpp"

namespace oneshot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::string> complement_labels(const RegisterShape& s, const std::vector<std::string>& a) {
  std::vector<std::string> b;
  for (const auto& l : s.labels())
    if (std::find(a.begin(), a.end(), l) == a.end()) b.push_back(l);
  return b;
}

bool is_diagonal(const Matrix& m) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  return (m - Matrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

std::vector<double> diag_of(const HermitianOperator& x) {
  std::vector<double> d(x.dim());
  for (int i = 0; i < x.dim(); ++i) d[i] = x.matrix()(i, i).real();
  return d;
}

}  // namespace

BoundInterval dmax_smoothed_bounds(const HermitianOperator& rho, const HermitianOperator& sigma,
                                   double eps, double delta) {
  require_state(rho, "rho");
  require_psd(sigma, "sigma");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("smoothed D_max: eps must lie in [0, 1)");
  const double e2 = eps * eps;
  if (delta <= 0.0) delta = 0.5 * (1.0 - e2);
  if (delta > 1.0 - e2) throw DomainError("smoothed D_max: delta must lie in (0, 1 - eps^2]");

  BoundInterval b;
  b.upper = dmax(rho, sigma).bits;
  b.upper_provenance = "D_max(rho||sigma): rho lies in every ball";
  if (e2 > 0.0) {
    const double u = dh(rho, sigma, ErrorParam{1.0 - e2, e2}).bits - std::log2(1.0 - e2);
    if (u < b.upper) {
      b.upper = u;
      b.upper_provenance = "D_h^{1-eps^2}(rho||sigma) + log 1/(1-eps^2)";
    }
  }
  const double el = 1.0 - e2 - delta;
  b.lower = dh(rho, sigma, ErrorParam{std::max(el, 0.0), e2 + delta}).bits - std::log2(4.0 / (delta * delta));
  b.lower_provenance = "D_h^{1-eps^2-delta}(rho||sigma) - log 4/delta^2";
  return b;
}

double dmin_hypothesis_penalty(double eps, double k) {
  const double x = std::sqrt(k) * eps;
  if (x > 1.0) throw DomainError("penalty: sqrt(k) eps exceeds 1");
  const double s = std::sin(std::asin(x) - std::asin(eps));
  return s > 0.0 ? -2.0 * std::log2(s) : kInf;
}

double dmin_dmax_penalty(double eps, double eps_prime) {
  if (eps * eps + eps_prime * eps_prime > 1.0 + 1e-15)
    throw DomainError("penalty: eps^2 + eps'^2 must not exceed 1");
  const double c = std::cos(std::asin(std::min(eps, 1.0)) + std::asin(std::min(eps_prime, 1.0)));
  return c > 0.0 ? -2.0 * std::log2(c) : kInf;
}

double dmin_smoothed_upper(const HermitianOperator& rho, const HermitianOperator& sigma, double eps,
                           double k) {
  if (!(k > 1.0)) throw DomainError("smoothed D_min: k must exceed 1");
  if (!(eps > 0.0) || eps > 1.0 / std::sqrt(k) * (1.0 + 1e-15))
    throw DomainError("smoothed D_min: eps must lie in (0, k^{-1/2}]");
  const double ke2 = k * eps * eps;
  if (ke2 >= 1.0) return kInf;
  const double h = dh(rho, sigma, ErrorParam{ke2, 1.0 - ke2}).bits;
  return h + dmin_hypothesis_penalty(eps, k) - std::log2(ke2);
}

double dmin_smoothed_lower(const HermitianOperator& rho, const HermitianOperator& sigma, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("smoothed D_min: eps must lie in [0, 1]");
  return dmin(rho, sigma).bits;
}

BoundInterval dmin_smoothed_bounds(const HermitianOperator& rho, const HermitianOperator& sigma,
                                   double eps, double k, double eps_prime) {
  BoundInterval b;
  b.lower = dmin_smoothed_lower(rho, sigma, eps);
  b.lower_provenance = "D_min(rho||sigma): rho lies in the ball";
  b.upper = dmin_smoothed_upper(rho, sigma, eps, k);
  b.upper_provenance = "D_h^{k eps^2} - log(1-(eps^2 sqrt k + sqrt(1-k eps^2) sqrt(1-eps^2))^2) - log k eps^2";
  if (eps_prime > 0.0) {
    const double u = dmax_smoothed_bounds(rho, sigma, eps_prime).upper + dmin_dmax_penalty(eps, eps_prime);
    if (u < b.upper) {
      b.upper = u;
      b.upper_provenance = "upper(D_max^{eps'}) - log(1-(eps sqrt(1-eps'^2)+eps' sqrt(1-eps^2))^2)";
    }
  }
  return b;
}

// ---------------------------------------------------------------------------
// Dual instance of a classical ρ_BR.
//
// With ρ_BR = Σ p(b,r)|br⟩⟨br| and a purification on R', the pair
// (ρ_RR', ρ_R^{-1} ⊗ ρ_R') restricted to the support of ρ_RR' splits into one
// block per b: a rank-one ρ-part |φ_b⟩, φ_b(r) = √p(b,r), against the diagonal
// σ-part p(b|r). n copies give one block per bⁿ, entries grouped by joint type.
// β* = max_μ μ(1−ε) − Σ_blocks λ_block(μ), λ the positive eigenvalue of
// μ|φ⟩⟨φ| − D, i.e. the root of Σ_i μ|φ_i|²/(λ + d_i) = 1.

namespace {

using ld = long double;

void compositions(int n, int parts, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> c(parts, 0);
  if (parts == 0) {
    if (n == 0) f(c);
    return;
  }
  c[0] = n;
  while (true) {
    f(c);
    int j = parts - 2;
    while (j >= 0 && c[j] == 0) --j;
    if (j < 0) break;
    --c[j];
    const int rest = c[parts - 1] + 1;
    c[parts - 1] = 0;
    c[j + 1] = rest;
  }
}

ld log_multinomial(const std::vector<int>& c) {
  int n = 0;
  ld s = 0;
  for (int x : c) {
    n += x;
    s -= std::lgamma(static_cast<ld>(x) + 1);
  }
  return s + std::lgamma(static_cast<ld>(n) + 1);
}

struct SecularBlock {
  ld count = 0;               // number of bⁿ blocks with this b-type
  std::vector<ld> w, d;       // grouped |φ_i|² with multiplicity, and σ entries
  ld h0 = 0;                  // Σ w/d
};

// Newton on 1/h(λ) = μ with h(λ) = Σ w/(λ + d): 1/h is increasing and concave,
// so iterates from λ = 0 rise monotonically to the root.
ld secular_root(const SecularBlock& blk, ld mu) {
  if (mu * blk.h0 <= 1) return 0;
  ld lam = 0;
  for (int it = 0; it < 200; ++it) {
    ld s = 0, t = 0;
    for (std::size_t j = 0; j < blk.w.size(); ++j) {
      const ld q = blk.w[j] / (lam + blk.d[j]);
      s += q;
      t += q / (lam + blk.d[j]);
    }
    const ld step = (mu - 1 / s) * s * s / t;
    if (!(step > 0)) break;
    lam += step;
    if (step <= lam * 1e-17L) break;
  }
  return lam;
}

}  // namespace

double dual_instance_log2_beta(const std::vector<std::vector<double>>& p_br, int n, ErrorParam e) {
  const int db = static_cast<int>(p_br.size());
  if (db == 0 || n < 1) throw DomainError("dual instance: empty distribution or n < 1");
  const int dr = static_cast<int>(p_br[0].size());
  std::vector<double> pr(dr, 0.0);
  double tot = 0.0;
  for (const auto& row : p_br) {
    if (static_cast<int>(row.size()) != dr) throw DomainError("dual instance: ragged distribution");
    for (int r = 0; r < dr; ++r) {
      if (row[r] < 0.0) throw DomainError("dual instance: negative probability");
      pr[r] += row[r];
      tot += row[r];
    }
  }
  if (std::abs(tot - 1.0) > 1e-12) throw DomainError("dual instance: distribution must sum to 1");

  // Per b: the allowed r's with |φ|² = p(b,r) and σ entry p(b|r).
  std::vector<std::vector<ld>> phi2(db), sig(db);
  for (int b = 0; b < db; ++b)
    for (int r = 0; r < dr; ++r)
      if (p_br[b][r] > 0.0) {
        phi2[b].push_back(p_br[b][r]);
        sig[b].push_back(static_cast<ld>(p_br[b][r]) / pr[r]);
      }
  std::vector<int> active;
  for (int b = 0; b < db; ++b)
    if (!phi2[b].empty()) active.push_back(b);
  const int na = static_cast<int>(active.size());

  if (e.eps == 0.0) {
    // β = Tr(Π_ρ σ) factorizes over copies.
    ld beta1 = 0;
    for (int b : active) {
      ld num = 0, den = 0;
      for (std::size_t i = 0; i < phi2[b].size(); ++i) {
        num += phi2[b][i] * sig[b][i];
        den += phi2[b][i];
      }
      beta1 += num / den;
    }
    return static_cast<double>(n * std::log2(beta1));
  }

  std::vector<SecularBlock> blocks;
  std::size_t terms = 0;
  compositions(n, na, [&](const std::vector<int>& kb) {
    SecularBlock blk;
    blk.count = std::exp(log_multinomial(kb));
    // Cartesian product over b of compositions of k_b over that b's r's.
    std::vector<std::vector<std::pair<ld, ld>>> per_b(na);  // (multiplicity·|φ|², d)
    for (int a = 0; a < na; ++a) {
      const int b = active[a];
      const int m = static_cast<int>(phi2[b].size());
      compositions(kb[a], m, [&](const std::vector<int>& c) {
        ld lw = log_multinomial(c), ld_ = 0;
        for (int i = 0; i < m; ++i) {
          lw += c[i] * std::log(phi2[b][i]);
          ld_ += c[i] * std::log(sig[b][i]);
        }
        per_b[a].push_back({lw, ld_});
      });
    }
    std::vector<std::size_t> idx(na, 0);
    while (true) {
      ld lw = 0, lden = 0;
      for (int a = 0; a < na; ++a) {
        lw += per_b[a][idx[a]].first;
        lden += per_b[a][idx[a]].second;
      }
      blk.w.push_back(std::exp(lw));
      blk.d.push_back(std::exp(lden));
      blk.h0 += std::exp(lw - lden);
      int a = na - 1;
      while (a >= 0 && ++idx[a] == per_b[a].size()) idx[a--] = 0;
      if (a < 0) break;
    }
    terms += blk.w.size();
    if (terms > 20000000) throw NumericalFailure("dual instance: joint type count exceeds the budget");
    blocks.push_back(std::move(blk));
  });

  const ld one_minus = e.one_minus_eps;
  auto g = [&](ld u) {
    const ld mu = std::exp(u);
    ld s = 0;
    for (const auto& blk : blocks) s += blk.count * secular_root(blk, mu);
    return mu * one_minus - s;
  };
  // g is concave in μ, hence unimodal in ln μ; the optimum has μ ≥ 1 and
  // μ ≤ Tr σ / ε.
  ld lo = 0, hi = n * std::log(static_cast<ld>(dr)) - std::log(static_cast<ld>(e.eps)) + 2;
  const ld phi = (std::sqrt(5.0L) - 1) / 2;
  ld x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  ld g1 = g(x1), g2 = g(x2);
  for (int it = 0; it < 200 && hi - lo > 1e-12L; ++it) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + phi * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - phi * (hi - lo);
      g1 = g(x1);
    }
  }
  const ld best = std::max({g1, g2, g(0)});
  if (!(best > 0)) throw NumericalFailure("dual instance: nonpositive dual optimum");
  return static_cast<double>(std::log2(best));
}

BoundInterval imax_partially_smoothed_bounds(const HermitianOperator& rho_br,
                                             const std::vector<std::string>& r_labels, int n,
                                             double eps, const PartialImaxOptions& opt) {
  require_state(rho_br, "rho_BR");
  if (n < 1) throw DomainError("partially smoothed I_max: n must be positive");
  if (!(opt.k > 1.0)) throw DomainError("partially smoothed I_max: k must exceed 1");
  if (!(eps > 0.0) || eps > 1.0 / std::sqrt(opt.k) * (1.0 + 1e-15))
    throw DomainError("partially smoothed I_max: eps must lie in (0, k^{-1/2}]");
  const auto b_labels = complement_labels(rho_br.shape(), r_labels);
  if (b_labels.empty() || r_labels.empty()) throw DomainError("partially smoothed I_max: need B and R registers");
  for (const auto& l : r_labels)
    if (!rho_br.shape().has(l)) throw DomainError("partially smoothed I_max: unknown register '" + l + "'");

  const double e4 = eps / 4.0, half = eps / 2.0, ke2 = opt.k * eps * eps;
  const ErrorParam up_err{1.0 - e4 * e4, e4 * e4};
  const ErrorParam low_err{std::min(ke2, 1.0), std::max(1.0 - ke2, 0.0)};
  const double up_slack = std::log2((8.0 + half * half) / (half * half)) - std::log2(1.0 - e4 * e4);
  const double low_slack = dmin_hypothesis_penalty(eps, opt.k) - std::log2(ke2);

  const int d = rho_br.dim();
  const int dr = marginal(rho_br, r_labels).dim();
  const double up_dim = std::pow(static_cast<double>(d), n);
  const double low_dim = std::pow(static_cast<double>(d) * dr, n);

  double up_dh = 0.0, low_dh = 0.0;
  std::string route;
  const std::vector<std::string> order = [&] {
    std::vector<std::string> o = b_labels;
    o.insert(o.end(), r_labels.begin(), r_labels.end());
    return o;
  }();
  const HermitianOperator ordered = permute(rho_br, order);
  const bool diagonal = is_diagonal(ordered.matrix());

  if (diagonal && !opt.prefer_explicit) {
    const int db = d / dr;
    std::vector<std::vector<double>> p(db, std::vector<double>(dr));
    std::vector<double> pb(db, 0.0), pr(dr, 0.0);
    for (int b = 0; b < db; ++b)
      for (int r = 0; r < dr; ++r) {
        p[b][r] = std::max(ordered.matrix()(b * dr + r, b * dr + r).real(), 0.0);
        pb[b] += p[b][r];
        pr[r] += p[b][r];
      }
    ClassicalIIDSpec spec;
    spec.n = n;
    for (int b = 0; b < db; ++b)
      for (int r = 0; r < dr; ++r) {
        spec.p.push_back(p[b][r]);
        spec.q.push_back(pb[b] * pr[r]);
      }
    const double sp = std::accumulate(spec.p.begin(), spec.p.end(), 0.0);
    for (double& x : spec.p) x /= sp;
    up_dh = dh_classical_iid(spec, up_err).bits;
    low_dh = -dual_instance_log2_beta(p, n, low_err);
    route = " (type classes)";
  } else {
    if (up_dim > opt.explicit_cutoff || low_dim > opt.explicit_cutoff)
      throw DomainError("partially smoothed I_max: explicit tensor cutoff exceeded for non-diagonal input");
    const HermitianOperator prod = product_of_marginals(rho_br, r_labels);
    up_dh = dh(tensor_power(rho_br, n), tensor_power(prod, n), up_err).bits;

    const HermitianOperator psi = purify(rho_br, opt.purifier).projector();
    std::vector<std::string> keep = r_labels;
    keep.push_back(opt.purifier);
    const HermitianOperator rr = marginal(psi, keep);
    const HermitianOperator sig =
        permute(tensor(geninv_op(marginal(rho_br, r_labels)), marginal(psi, {opt.purifier})),
                rr.shape().labels());
    low_dh = dh(tensor_power(rr, n), tensor_power(sig, n), low_err).bits;
    route = " (explicit tensors)";
  }

  BoundInterval out;
  out.upper = up_dh + up_slack;
  out.lower = -(low_dh + low_slack);
  out.upper_provenance = "D_h^{1-(eps/4)^2}(rho^n||rho_B^n x rho_R^n) + log 1/(1-(eps/4)^2) + log (8+(eps/2)^2)/(eps/2)^2" + route;
  out.lower_provenance = "-[D_h^{k eps^2}(rho_RR'^n||rho_R^-n x rho_R'^n) + D_min/D_h penalty - log k eps^2]" + route;
  return out;
}

// ---------------------------------------------------------------------------
// Diagonal smoothing oracles.

namespace {

void check_distribution(const std::vector<double>& p, const char* what) {
  double s = 0.0;
  for (double x : p) {
    if (x < 0.0) throw DomainError(std::string(what) + ": negative entry");
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) throw DomainError(std::string(what) + ": must sum to 1");
}

// max Σ_i √(r_i p_i) over 0 ≤ r_i ≤ u_i, Σ r_i ≤ total: r_i = min(s p_i, u_i).
double water_fill(const std::vector<double>& p, const std::vector<double>& u, double total) {
  std::vector<int> idx;
  double cap = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0 && u[i] > 0.0) {
      idx.push_back(static_cast<int>(i));
      cap += u[i];
    }
  double f = 0.0;
  if (cap <= total) {
    for (int i : idx) f += std::sqrt(u[i] * p[i]);
    return f;
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return u[a] * p[b] < u[b] * p[a]; });
  // Saturated prefix (small u/p) takes u_i, the rest share s·p_i.
  double used = 0.0, prest = 0.0;
  for (int i : idx) prest += p[i];
  std::size_t k = 0;
  for (; k < idx.size(); ++k) {
    const int i = idx[k];
    const double s = (total - used) / prest;
    if (s * p[i] <= u[i]) break;
    used += u[i];
    prest -= p[i];
  }
  const double s = prest > 0.0 ? (total - used) / prest : 0.0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const int i = idx[j];
    const double r = j < k ? u[i] : s * p[i];
    f += std::sqrt(r * p[i]);
  }
  return f;
}

}  // namespace

double oracle_dmax(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  check_distribution(p, "oracle p");
  if (p.size() != q.size() || p.size() > 9) throw DomainError("oracle: at most 9 matching outcomes");
  for (double x : q)
    if (x < 0.0) throw DomainError("oracle q: negative entry");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("oracle: eps must lie in [0, 1)");
  double top = 0.0, on_q = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) top = kInf;
    else {
      top = std::max(top, p[i] / q[i]);
      on_q += p[i];
    }
  }
  if (eps == 0.0) return std::log2(top);
  const double c = std::sqrt(1.0 - eps * eps);
  if (std::sqrt(on_q) < c) return kInf;

  auto fid = [&](double lam) {
    std::vector<double> u(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) u[i] = std::exp2(lam) * q[i];
    return water_fill(p, u, 1.0);
  };
  double hi = std::isinf(top) ? 0.0 : std::log2(top);
  while (fid(hi) < c) hi += 1.0;
  double step = 1.0, lo = hi - step;
  while (fid(lo) >= c) {
    step *= 2.0;
    lo = hi - step;
    if (step > 4096.0) return -kInf;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (fid(mid) >= c ? hi : lo) = mid;
  }
  return hi;
}

double oracle_dmin(const std::vector<double>& p, const std::vector<double>& q, double eps) {
  check_distribution(p, "oracle p");
  if (p.size() != q.size() || p.size() > 9) throw DomainError("oracle: at most 9 matching outcomes");
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("oracle: eps must lie in [0, 1]");
  const std::size_t m = p.size();
  std::vector<double> a(m), b(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (q[i] < 0.0) throw DomainError("oracle q: negative entry");
    a[i] = std::sqrt(q[i]);
    b[i] = std::sqrt(p[i]);
  }
  const double c = std::sqrt(std::max(0.0, 1.0 - eps * eps));
  auto value = [](double f) { return f > 0.0 ? -2.0 * std::log2(f) : kInf; };
  if (eps == 0.0) return value(std::inner_product(a.begin(), a.end(), b.begin(), 0.0));

  // min a·s  s.t.  b·s ≥ c, |s| ≤ 1, s ≥ 0  with s = √r.
  double zero_mass = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (a[i] == 0.0) zero_mass += p[i];
  if (std::sqrt(zero_mass) >= c) return kInf;

  double best = kInf;
  double ratio_min = kInf;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] > 0.0) {
      const double r = a[i] / b[i];
      ratio_min = std::min(ratio_min, r);
      if (c / b[i] <= 1.0) best = std::min(best, a[i] * c / b[i]);
    }
  // Ball active: s(μ) ∝ (μb − a)_+; scan μ for b·s(μ) = c and polish each crossing.
  auto s_of = [&](double mu, double& bs, double& as) {
    std::vector<double> s(m);
    double nn = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      s[i] = std::max(mu * b[i] - a[i], 0.0);
      nn += s[i] * s[i];
    }
    nn = std::sqrt(nn);
    bs = as = 0.0;
    if (nn == 0.0) return false;
    for (std::size_t i = 0; i < m; ++i) {
      bs += b[i] * s[i] / nn;
      as += a[i] * s[i] / nn;
    }
    return true;
  };
  const int grid = 4000;
  double prev_mu = 0.0, prev_gap = 0.0;
  bool have_prev = false;
  for (int g = 0; g <= grid; ++g) {
    const double mu = ratio_min + std::exp(-30.0 + 60.0 * g / grid);
    double bs, as;
    if (!s_of(mu, bs, as)) continue;
    const double gap = bs - c;
    if (have_prev && (gap >= 0.0) != (prev_gap >= 0.0)) {
      double lo = prev_mu, hi = mu;
      const bool rising = gap >= 0.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double bm, am;
        s_of(mid, bm, am);
        ((bm >= c) == rising ? hi : lo) = mid;
      }
      double bh, ah;
      s_of(rising ? hi : lo, bh, ah);
      if (bh >= c - 1e-14) best = std::min(best, ah);
    }
    if (gap >= 0.0) best = std::min(best, as);
    prev_mu = mu;
    prev_gap = gap;
    have_prev = true;
  }
  return value(best);
}

double oracle_imax_partial(const std::vector<std::vector<double>>& p_br, double eps) {
  const int db = static_cast<int>(p_br.size());
  if (db == 0 || db > 3) throw DomainError("oracle: at most 3 outcomes per register");
  const int dr = static_cast<int>(p_br[0].size());
  if (dr == 0 || dr > 3) throw DomainError("oracle: at most 3 outcomes per register");
  std::vector<double> flat;
  for (const auto& row : p_br) {
    if (static_cast<int>(row.size()) != dr) throw DomainError("oracle: ragged distribution");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  check_distribution(flat, "oracle p_BR");
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("oracle: eps must lie in [0, 1)");
  std::vector<double> pr(dr, 0.0);
  for (int b = 0; b < db; ++b)
    for (int r = 0; r < dr; ++r) pr[r] += p_br[b][r];

  if (eps == 0.0) {
    double s = 0.0;
    for (int b = 0; b < db; ++b) {
      double mx = 0.0;
      for (int r = 0; r < dr; ++r)
        if (pr[r] > 0.0) mx = std::max(mx, p_br[b][r] / pr[r]);
      s += mx;
    }
    return std::log2(s);
  }
  const double c = std::sqrt(1.0 - eps * eps);

  // Best fidelity with ρ̄(b,r) ≤ m_b p(r) and Σ_b ρ̄(b,r) = p(r), column by column.
  auto fidelity_at = [&](const std::vector<double>& m) {
    double f = 0.0;
    for (int r = 0; r < dr; ++r) {
      if (pr[r] <= 0.0) continue;
      std::vector<double> col(db), cap(db), colp(db);
      double cap_pos = 0.0, cap_zero = 0.0;
      for (int b = 0; b < db; ++b) {
        col[b] = p_br[b][r];
        cap[b] = m[b] * pr[r];
        (col[b] > 0.0 ? cap_pos : cap_zero) += cap[b];
      }
      if (cap_pos + cap_zero < pr[r] * (1.0 - 1e-15)) return -kInf;
      // Normalize the column so water_fill fills exactly p(r).
      if (cap_pos <= pr[r]) {
        for (int b = 0; b < db; ++b)
          if (col[b] > 0.0) f += std::sqrt(cap[b] * col[b]);
      } else {
        f += water_fill(col, cap, pr[r]);
      }
    }
    return f;
  };
  auto scale_for = [&](const std::vector<double>& w) {
    std::vector<double> m(db);
    auto at = [&](double s) {
      for (int b = 0; b < db; ++b) m[b] = s * w[b];
      return fidelity_at(m);
    };
    double lo = 1.0, hi = 2.0;
    while (at(hi) < c) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) return kInf;
    }
    if (at(lo) >= c) return lo;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (at(mid) >= c ? hi : lo) = mid;
    }
    return hi;
  };

  // Minimize the scale over the simplex of directions w; the level sets are
  // convex, so a coarse-to-fine window search converges.
  std::vector<double> best_w(db, 1.0 / db);
  double best = scale_for(best_w);
  if (db > 1) {
    double step = 1e-3;
    auto visit = [&](const std::vector<double>& w) {
      for (double x : w)
        if (x < -1e-15) return;
      std::vector<double> wc(db);
      for (int b = 0; b < db; ++b) wc[b] = std::max(w[b], 0.0);
      const double v = scale_for(wc);
      if (v < best) {
        best = v;
        best_w = wc;
      }
    };
    if (db == 2) {
      for (int i = 0; i <= 1000; ++i) visit({i * step, 1.0 - i * step});
    } else {
      const int g = 100;  // 1e-2 coarse pass in two dimensions
      for (int i = 0; i <= g; ++i)
        for (int j = 0; i + j <= g; ++j) visit({i / double(g), j / double(g), 1.0 - (i + j) / double(g)});
      step = 1e-2;
    }
    for (double h = step; h >= 1e-7; h *= 0.1) {
      const std::vector<double> c0 = best_w;
      const int span = 10;
      if (db == 2) {
        for (int i = -span; i <= span; ++i) visit({c0[0] + i * h, c0[1] - i * h});
      } else {
        for (int i = -span; i <= span; ++i)
          for (int j = -span; j <= span; ++j) visit({c0[0] + i * h, c0[1] + j * h, c0[2] - (i + j) * h});
      }
    }
  }
  return std::log2(best);
}

double exact_smoothing_oracle(SmoothingKind kind, const HermitianOperator& rho,
                              const HermitianOperator& sigma, double eps) {
  if (kind == SmoothingKind::imax_partial)
    throw DomainError("oracle: imax_partial needs the R registers; use the labelled overload");
  require_same_shape(rho, sigma);
  if (!is_diagonal(rho.matrix()) || !is_diagonal(sigma.matrix()))
    throw DomainError("oracle: inputs must be diagonal");
  if (rho.dim() > 9) throw DomainError("oracle: at most 9 outcomes");
  const auto p = diag_of(rho), q = diag_of(sigma);
  return kind == SmoothingKind::dmax ? oracle_dmax(p, q, eps) : oracle_dmin(p, q, eps);
}

double exact_smoothing_oracle(const HermitianOperator& rho_br, const std::vector<std::string>& r_labels,
                              double eps) {
  const auto b_labels = complement_labels(rho_br.shape(), r_labels);
  std::vector<std::string> order = b_labels;
  order.insert(order.end(), r_labels.begin(), r_labels.end());
  const HermitianOperator x = permute(rho_br, order);
  if (!is_diagonal(x.matrix())) throw DomainError("oracle: input must be diagonal");
  const int dr = marginal(rho_br, r_labels).dim(), db = x.dim() / dr;
  std::vector<std::vector<double>> p(db, std::vector<double>(dr));
  for (int b = 0; b < db; ++b)
    for (int r = 0; r < dr; ++r) p[b][r] = x.matrix()(b * dr + r, b * dr + r).real();
  return oracle_imax_partial(p, eps);
}

}  // namespace oneshot
