#include "oneshot/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oneshot {

namespace {

double inner(const Matrix& a, const Matrix& b) {
  // Re Tr(A B) for Hermitian A without forming the product.
  return (a.transpose().cwiseProduct(b)).sum().real();
}

Matrix inverse_pd(const Matrix& s) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    RVector inv = es.eigenvalues().unaryExpr([](double l) { return l > 1e-300 ? 1.0 / l : 1e300; });
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  }
  return llt.solve(Matrix::Identity(s.rows(), s.cols()));
}

// Largest step keeping x + a·dx positive semidefinite (infinity if unbounded).
double max_step(const Matrix& x, const Matrix& dx) {
  Eigen::LLT<Matrix> llt(x);
  Matrix w;
  if (llt.info() == Eigen::Success) {
    const Matrix linv = llt.matrixL().solve(Matrix::Identity(x.rows(), x.cols()));
    w = hermitian_part(linv * dx * linv.adjoint());
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> ex(x);
    const double floor = 1e-300 + 1e-15 * std::abs(ex.eigenvalues().maxCoeff());
    const RVector inv = ex.eigenvalues().unaryExpr([&](double l) { return 1.0 / std::sqrt(std::max(l, floor)); });
    const Matrix r = ex.eigenvectors() * inv.asDiagonal() * ex.eigenvectors().adjoint();
    w = hermitian_part(r * dx * r);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

}  // namespace

std::vector<Matrix> hermitian_basis(int d) {
  std::vector<Matrix> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < d; ++k) {
    Matrix e = Matrix::Zero(d, d);
    e(k, k) = 1.0;
    basis.push_back(e);
  }
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      Matrix e = Matrix::Zero(d, d);
      e(k, l) = r;
      e(l, k) = r;
      basis.push_back(e);
      Matrix f = Matrix::Zero(d, d);
      f(k, l) = cplx(0.0, r);
      f(l, k) = cplx(0.0, -r);
      basis.push_back(f);
    }
  return basis;
}

SdpResult solve_sdp(const SdpProblem& pb, const SdpOptions& opt) {
  const int n = static_cast<int>(pb.c.rows());
  const int m = static_cast<int>(pb.a.size());
  const double dn = n;

  double amax = 0.0, ratio = 0.0;
  for (int i = 0; i < m; ++i) {
    const double an = pb.a[i].norm();
    amax = std::max(amax, an);
    ratio = std::max(ratio, (1.0 + std::abs(pb.b(i))) / (1.0 + an));
  }
  const double cnorm = pb.c.norm(), bnorm = pb.b.norm();
  const double xi = std::max({10.0, std::sqrt(dn), dn * ratio});
  const double eta = std::max({10.0, std::sqrt(dn), 1.0 + std::max(cnorm, amax)});

  Matrix x = xi * Matrix::Identity(n, n);
  Matrix s = eta * Matrix::Identity(n, n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

  auto a_op = [&](const Matrix& z) {
    Eigen::VectorXd v(m);
    for (int i = 0; i < m; ++i) v(i) = inner(pb.a[i], z);
    return v;
  };
  auto at_op = [&](const Eigen::VectorXd& v) {
    Matrix z = Matrix::Zero(n, n);
    for (int i = 0; i < m; ++i) z += v(i) * pb.a[i];
    return z;
  };

  SdpResult res, best;
  double best_score = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::VectorXd rp = pb.b - a_op(x);
    const Matrix rd = pb.c - s - at_op(y);
    const double pobj = inner(pb.c, x), dobj = pb.b.dot(y);
    const double xs = inner(x, s);
    const double denom = 1.0 + std::abs(pobj) + std::abs(dobj);
    res.iterations = it;
    res.primal_infeasibility = rp.norm() / (1.0 + bnorm);
    res.dual_infeasibility = rd.norm() / (1.0 + cnorm);
    res.relative_gap = std::max(std::abs(pobj - dobj), xs) / denom;
    res.primal_objective = pobj;
    res.dual_objective = dobj;
    const double score = std::max({res.relative_gap, res.primal_infeasibility, res.dual_infeasibility});
    if (!std::isfinite(score)) break;
    if (score < 0.5 * best_score) {
      stalled = 0;
    } else if (++stalled >= 6) {
      break;
    }
    if (score < best_score) {
      best_score = score;
      best = res;
      best.x = x;
      best.y = y;
      best.s = s;
    }
    if (res.relative_gap < opt.tolerance && res.primal_infeasibility < opt.tolerance &&
        res.dual_infeasibility < opt.tolerance) {
      res.converged = true;
      break;
    }
    const double mu = xs / dn;
    const Matrix sinv = hermitian_part(inverse_pd(s));

    Eigen::MatrixXd schur(m, m);
    std::vector<Matrix> g(m);
    for (int j = 0; j < m; ++j) g[j] = x * pb.a[j] * sinv;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) schur(i, j) = schur(j, i) = inner(pb.a[i], g[j]);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(schur);

    const Matrix x_rd_sinv = x * rd * sinv;
    auto direction = [&](double sigma, const Matrix* corr, Matrix& dx, Eigen::VectorXd& dy,
                         Matrix& ds) {
      Matrix r1 = sigma * mu * sinv - x - x_rd_sinv;
      if (corr) r1 -= *corr;
      dy = ldlt.solve(rp - a_op(r1));
      ds = hermitian_part(rd - at_op(dy));
      Matrix base = sigma * mu * sinv - x - x * ds * sinv;
      if (corr) base -= *corr;
      dx = hermitian_part(base);
    };

    Matrix dxa, dsa;
    Eigen::VectorXd dya;
    direction(0.0, nullptr, dxa, dya, dsa);
    const double ap_a = std::min(1.0, max_step(x, dxa));
    const double ad_a = std::min(1.0, max_step(s, dsa));
    const double mu_aff = inner(x + ap_a * dxa, s + ad_a * dsa) / dn;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const Matrix corr = dxa * dsa * sinv;
    Matrix dx, ds;
    Eigen::VectorXd dy;
    direction(sigma, &corr, dx, dy, ds);
    const double ap = std::min(1.0, 0.95 * max_step(x, dx));
    const double ad = std::min(1.0, 0.95 * max_step(s, ds));
    x = hermitian_part(x + ap * dx);
    y += ad * dy;
    s = hermitian_part(s + ad * ds);
    res.iterations = it + 1;
  }
  // Stagnation or breakdown near the optimum: hand back the best iterate seen.
  if (!res.converged) {
    const int its = res.iterations;
    res = best;
    res.iterations = its;
    return res;
  }
  res.x = x;
  res.y = y;
  res.s = s;
  return res;
}

}  // namespace oneshot
