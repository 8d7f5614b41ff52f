#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace oneshot {

struct OptimizerConfig {
  int starts = 32;
  std::uint64_t seed = 1;
  int max_evals = 40000;
  double ftol = 1e-14;
};

struct LocalResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evals = 0;
  bool converged = false;
};

// Minimizes f with the adaptive-parameter Nelder–Mead simplex, restarting
// from the incumbent until a restart no longer improves the value.
LocalResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, double step, int max_evals, double ftol);

struct MultiStartReport {
  int starts = 0;
  std::vector<double> values;  // per start, in start order
  int best_index = 0;
  double best = 0.0;
  double spread = 0.0;  // best minus the top-quartile boundary value
  bool all_converged = true;
};

}  // namespace oneshot
