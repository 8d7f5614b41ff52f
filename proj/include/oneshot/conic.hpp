#pragma once

#include <vector>

#include "oneshot/registers.hpp"

namespace oneshot {

// Complex Hermitian semidefinite program in standard form, inner product
// <A, B> = Re Tr(AB):
//   primal  min <C, X>   s.t. <A_i, X> = b_i, X ⪰ 0
//   dual    max b·y      s.t. S = C − Σ y_i A_i ⪰ 0
struct SdpProblem {
  Matrix c;
  std::vector<Matrix> a;
  Eigen::VectorXd b;
};

struct SdpOptions {
  int max_iterations = 200;
  double tolerance = 1e-11;
};

struct SdpResult {
  Matrix x;
  Eigen::VectorXd y;
  Matrix s;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Infeasible-start primal–dual path following with the HKM search direction
// and Mehrotra predictor–corrector steps.
SdpResult solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

// Orthonormal basis of d×d Hermitian matrices under <A, B> = Re Tr(AB).
std::vector<Matrix> hermitian_basis(int d);

}  // namespace oneshot
