#include "oneshot/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oneshot {

namespace {

LocalResult nelder_mead_once(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, double step, int max_evals,
                             double ftol) {
  const int n = static_cast<int>(x0.size());
  const double dn = n;
  const double alpha = 1.0, beta = 1.0 + 2.0 / dn, gamma = 0.75 - 0.5 / dn,
               delta = 1.0 - 1.0 / dn;
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1](i) += step;
  int evals = 0;
  for (int i = 0; i <= n; ++i) {
    vals[i] = f(pts[i]);
    ++evals;
  }
  std::vector<int> idx(n + 1);
  bool converged = false;
  while (evals < max_evals) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = idx[0], worst = idx[n], second = idx[n - 1];
    double size = 0.0;
    for (int i = 1; i <= n; ++i) size = std::max(size, (pts[idx[i]] - pts[best]).cwiseAbs().maxCoeff());
    if (vals[worst] - vals[best] <= ftol * (1.0 + std::abs(vals[best])) && size < 1e-9) {
      converged = true;
      break;
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) c += pts[i];
    c /= dn;
    const Eigen::VectorXd xr = c + alpha * (c - pts[worst]);
    const double fr = f(xr);
    ++evals;
    if (fr < vals[best]) {
      const Eigen::VectorXd xe = c + beta * (xr - c);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(c + gamma * (xr - c))
                                       : Eigen::VectorXd(c - gamma * (c - pts[worst]));
    const double fc = f(xc);
    ++evals;
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + delta * (pts[i] - pts[best]);
      vals[i] = f(pts[i]);
      ++evals;
    }
  }
  const int b = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[b], vals[b], evals, converged};
}

}  // namespace

LocalResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, double step, int max_evals, double ftol) {
  LocalResult r = nelder_mead_once(f, x0, step, max_evals, ftol);
  int total = r.evals;
  for (int restart = 0; restart < 8 && total < max_evals; ++restart) {
    LocalResult again = nelder_mead_once(f, r.x, step * 0.1, max_evals - total, ftol);
    total += again.evals;
    const bool improved = again.f < r.f - ftol * (1.0 + std::abs(r.f));
    if (again.f < r.f) r = again;
    if (!improved) break;
  }
  r.evals = total;
  return r;
}

}  // namespace oneshot
