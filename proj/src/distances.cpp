#include "oneshot/distances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oneshot/parallel.hpp"

namespace oneshot {

namespace {

// Square root with eigenvalues at the rounding floor set to zero, so kernel
// noise does not surface as sqrt(1e-16) ~ 1e-8.
Matrix sqrt_clipped(const Matrix& x) {
  const Eigensystem es = eig_hermitian(x);
  const double top = es.values.size() ? std::max(es.values.cwiseAbs().maxCoeff(), 0.0) : 0.0;
  const double floor = 8.0 * static_cast<double>(x.rows()) * std::numeric_limits<double>::epsilon() * top;
  return spectral_apply(es, [&](double l) { return l > floor ? std::sqrt(l) : 0.0; });
}

// ‖√ρ √σ‖₁ from singular values: no square root of the product's spectrum.
double fidelity_matrix(const Matrix& rho, const Matrix& sigma) {
  const Matrix m = sqrt_clipped(rho) * sqrt_clipped(sigma);
  return Eigen::BDCSVD<Matrix>(m).singularValues().sum();
}

double purified_from_fidelity(double fbar) { return std::sqrt(std::max(0.0, 1.0 - fbar * fbar)); }

std::string fresh_label(const std::string& base, const RegisterShape& a, const RegisterShape& b) {
  std::string l = base;
  while (a.has(l) || b.has(l)) l += "'";
  return l;
}

}  // namespace

double fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  require_same_shape(rho, sigma);
  require_psd(rho, "rho");
  require_psd(sigma, "sigma");
  return fidelity_matrix(rho.matrix(), sigma.matrix());
}

double generalized_fidelity(const HermitianOperator& rho, const HermitianOperator& sigma) {
  require_same_shape(rho, sigma);
  require_subnormalized(rho, "rho");
  require_subnormalized(sigma, "sigma");
  const double f = fidelity_matrix(rho.matrix(), sigma.matrix());
  const double dr = std::max(0.0, 1.0 - rho.trace()), ds = std::max(0.0, 1.0 - sigma.trace());
  return f + std::sqrt(dr * ds);
}

double purified_distance(const HermitianOperator& rho, const HermitianOperator& sigma) {
  return purified_from_fidelity(generalized_fidelity(rho, sigma));
}

double purified_distance_resolution(int dim) {
  return std::sqrt(16.0 * dim * std::numeric_limits<double>::epsilon());
}

double trace_distance(const HermitianOperator& rho, const HermitianOperator& sigma) {
  require_same_shape(rho, sigma);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

DistanceValue distance(DistanceKind kind, const HermitianOperator& rho,
                       const HermitianOperator& sigma) {
  switch (kind) {
    case DistanceKind::fidelity:
      return {kind, fidelity(rho, sigma)};
    case DistanceKind::generalized_fidelity:
      return {kind, generalized_fidelity(rho, sigma)};
    case DistanceKind::purified:
      return {kind, purified_distance(rho, sigma)};
    case DistanceKind::trace:
      return {kind, trace_distance(rho, sigma)};
  }
  throw DomainError("unknown distance kind");
}

TriangleCheck tight_triangle_check(const HermitianOperator& rho, const HermitianOperator& sigma,
                                   const HermitianOperator& tau) {
  require_state(rho, "rho");
  require_state(sigma, "sigma");
  require_state(tau, "tau");
  const double f_rs = fidelity(rho, sigma), f_st = fidelity(sigma, tau);
  const double p_rs = purified_from_fidelity(f_rs), p_st = purified_from_fidelity(f_st);
  TriangleCheck c;
  c.applicable = p_rs * p_rs + p_st * p_st <= 1.0;
  if (c.applicable) {
    c.lhs = purified_distance(rho, tau);
    c.rhs = p_rs * f_st + p_st * f_rs;
  }
  return c;
}

double channel_distance_at(const Channel& e, const Channel& f, const PureVector& input) {
  const HermitianOperator p = input.projector();
  const double fid = fidelity_matrix(e.apply(p).matrix(), f.apply(p).matrix());
  return purified_from_fidelity(fid);
}

ChannelDistanceResult channel_purified_distance_full(const Channel& e, const Channel& f,
                                                     const OptimizerConfig& opt) {
  if (e.in_shape() != f.in_shape() || e.out_shape().dims() != f.out_shape().dims())
    throw DomainError("channel distance: channels differ in shape");
  const int d = e.in_shape().total();
  const std::string r = fresh_label("R", e.in_shape(), e.out_shape());
  const RegisterShape shape = e.in_shape().concat(RegisterShape({r}, {d}));
  const Channel f2 = f.relabeled(f.in_shape(), e.out_shape());
  const int dim = d * d;

  auto to_vector = [&](const Eigen::VectorXd& x) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = cplx(x(i), x(dim + i));
    const double n = v.norm();
    return n > 0 ? Vector(v / n) : Vector(Vector::Unit(dim, 0));
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    return -channel_distance_at(e, f2, PureVector(shape, to_vector(x)));
  };

  // Start 0 is the maximally entangled input; the rest are Haar draws.
  const int total = opt.starts + 1;
  std::vector<Eigen::VectorXd> xs(total);
  std::vector<double> vals(total);
  std::vector<char> conv(total, 0);
  parallel_for(total, [&](int s) {
    Eigen::VectorXd x0(2 * dim);
    if (s == 0) {
      x0.setZero();
      for (int i = 0; i < d; ++i) x0(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    } else {
      CounterRng rng(opt.seed, static_cast<std::uint64_t>(s));
      const Vector v = haar_vector(rng, dim);
      for (int i = 0; i < dim; ++i) {
        x0(i) = v(i).real();
        x0(dim + i) = v(i).imag();
      }
    }
    const LocalResult lr = nelder_mead(objective, x0, 0.2, opt.max_evals, opt.ftol);
    xs[s] = lr.x;
    vals[s] = -lr.f;
    conv[s] = lr.converged;
  });

  MultiStartReport rep;
  rep.starts = total;
  rep.values = vals;
  rep.best_index = 0;
  for (int s = 1; s < total; ++s)
    if (vals[s] > vals[rep.best_index]) rep.best_index = s;
  rep.best = vals[rep.best_index];
  std::vector<double> sorted = vals;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  rep.spread = rep.best - sorted[std::min<int>(total - 1, std::max(1, total / 4))];
  rep.all_converged = std::all_of(conv.begin(), conv.end(), [](char c) { return c != 0; });

  ChannelDistanceResult out{{}, PureVector(shape, to_vector(xs[rep.best_index])), rep};
  out.interval.lower = rep.best;
  out.interval.upper = std::min(1.0, rep.best + rep.spread);
  out.interval.lower_provenance = "best multi-start value (attained by a feasible input)";
  out.interval.upper_provenance = "best value plus top-quartile start spread (heuristic)";
  return out;
}

BoundInterval channel_purified_distance(const Channel& e, const Channel& f,
                                        const OptimizerConfig& opt) {
  return channel_purified_distance_full(e, f, opt).interval;
}

}  // namespace oneshot
