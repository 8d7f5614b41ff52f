#include "oneshot/qchannels.hpp"

#include <algorithm>
#include <cmath>

#include "oneshot/entropies.hpp"
#include "oneshot/hypotest.hpp"
#include "oneshot/parallel.hpp"
#include "oneshot/random.hpp"

namespace oneshot {

namespace {

double entropy_bits(const Matrix& m) {
  const Eigensystem es = eig_hermitian(m);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double l = es.values(i);
    if (l > 1e-300) s -= l * std::log2(l);
  }
  return s;
}

// I(B:R) = S(N(ρ)) + S(ρ) − S(N^c(ρ)) as a function of the input marginal,
// with its gradient in ρ (constant parts dropped; they vanish on traceless moves).
struct MiObjective {
  const std::vector<Matrix>& k;
  int din, dout;

  Matrix out(const Matrix& rho) const {
    Matrix w = Matrix::Zero(dout, dout);
    for (const auto& x : k) w += x * rho * x.adjoint();
    return hermitian_part(w);
  }
  Matrix env(const Matrix& rho) const {
    const int r = static_cast<int>(k.size());
    Matrix w(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j) {
        w(i, j) = (k[i] * rho * k[j].adjoint()).trace();
        w(j, i) = std::conj(w(i, j));
      }
    return w;
  }
  double value(const Matrix& rho) const {
    return entropy_bits(out(rho)) + entropy_bits(rho) - entropy_bits(env(rho));
  }
  Matrix gradient(const Matrix& rho) const {
    const Matrix lb = log2_psd(out(rho)), le = log2_psd(env(rho));
    Matrix g = -log2_psd(rho);
    for (const auto& x : k) g -= x.adjoint() * lb * x;
    const int r = static_cast<int>(k.size());
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        if (le(j, i) != cplx(0.0)) g += le(j, i) * k[j].adjoint() * k[i];
    return hermitian_part(g);
  }
};

struct AscentResult {
  Matrix x;  // ρ = X X†, ‖X‖_F = 1
  double f = 0.0;
  double stationarity = 0.0;
  bool converged = false;
};

// Ascent on X with ρ = XX†/‖X‖²: the steepest direction is (G − Tr(Gρ)) X.
AscentResult ascend(const MiObjective& obj, Matrix x) {
  x /= x.norm();
  Matrix rho = x * x.adjoint();
  double f = obj.value(rho);
  double eta = 0.5, stat = 0.0;
  int stalls = 0;
  for (int it = 0; it < 20000; ++it) {
    const Matrix g = obj.gradient(rho);
    const double gm = (g * rho).trace().real();
    const Matrix dir = (g - gm * Matrix::Identity(obj.din, obj.din)) * x;
    stat = dir.norm();
    if (stat < 1e-10) break;
    eta = std::min(eta * 2.0, 1e3);
    bool moved = false;
    while (eta > 1e-18) {
      Matrix xn = x + eta * dir;
      xn /= xn.norm();
      const Matrix rn = xn * xn.adjoint();
      const double fn = obj.value(rn);
      if (fn >= f + 1e-4 * eta * stat * stat) {
        stalls = fn - f < 1e-15 ? stalls + 1 : 0;
        x = xn;
        rho = rn;
        f = fn;
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!moved || stalls > 20) break;
  }
  return {x, f, stat, stat < 1e-6};
}

PureVector to_input(const Matrix& x, const RegisterShape& shape) {
  const int d = static_cast<int>(x.rows());
  Vector v(d * d);
  for (int a = 0; a < d; ++a)
    for (int r = 0; r < d; ++r) v(a * d + r) = x(a, r);
  return PureVector(shape, v / v.norm());
}

Matrix from_real(const Eigen::VectorXd& p, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows * cols; ++i) m(i / cols, i % cols) = cplx(p(i), p(rows * cols + i));
  return m;
}

}  // namespace

OptimizerConfig channel_optimizer_defaults() {
  OptimizerConfig c;
  c.starts = 64;
  return c;
}

PureVector maximally_entangled_input(const RegisterShape& in) {
  const int d = in.total();
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureVector(in.concat(in.suffixed("'")), v);
}

HermitianOperator channel_output(const Channel& n, const PureVector& input) {
  return n.apply(input.projector());
}

double channel_mutual_information(const Channel& n, const PureVector& input) {
  return mutual_information(channel_output(n, input), n.out_shape().labels()).bits;
}

double channel_mutual_information_variance(const Channel& n, const PureVector& input) {
  return mutual_information_variance(channel_output(n, input), n.out_shape().labels()).bits;
}

ChannelFunctionals channel_functionals(const Channel& n, const OptimizerConfig& opt, double cluster_tol) {
  const int d = n.in_shape().total();
  if (d > 8) throw DomainError("channel functionals: input dimension above 8");
  const RegisterShape shape = n.in_shape().concat(n.in_shape().suffixed("'"));
  for (const auto& l : n.in_shape().suffixed("'").labels())
    if (n.out_shape().has(l)) throw DomainError("channel functionals: output label collides with '" + l + "'");
  const MiObjective obj{n.kraus(), d, n.out_shape().total()};

  // Start 0 is the maximally entangled input; the rest are Haar draws.
  const int total = std::max(1, opt.starts);
  std::vector<AscentResult> res(total);
  parallel_for(total, [&](int s) {
    Matrix x0;
    if (s == 0) {
      x0 = Matrix::Identity(d, d);
    } else {
      CounterRng rng(opt.seed, static_cast<std::uint64_t>(s));
      x0 = ginibre(rng, d, d);
    }
    res[s] = ascend(obj, x0);
  });

  ChannelFunctionals out;
  MultiStartReport& rep = out.optimizer_report;
  rep.starts = total;
  for (const auto& r : res) rep.values.push_back(r.f);
  rep.best_index = 0;
  for (int s = 1; s < total; ++s)
    if (rep.values[s] > rep.values[rep.best_index]) rep.best_index = s;
  rep.best = rep.values[rep.best_index];
  std::vector<double> sorted = rep.values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  rep.spread = rep.best - sorted[std::min(total - 1, std::max(1, total / 4))];
  rep.all_converged = std::all_of(res.begin(), res.end(), [](const AscentResult& r) { return r.converged; });
  out.converged = rep.all_converged;

  out.capacity_like = 0.5 * rep.best;
  out.vmax = 0.0;
  for (int s = 0; s < total; ++s) {
    if (rep.best - res[s].f > cluster_tol) continue;
    PureVector psi = to_input(res[s].x, shape);
    out.vmax = std::max(out.vmax, channel_mutual_information_variance(n, psi));
    out.capacity_inputs.push_back(std::move(psi));
  }
  return out;
}

MetaConverseResult meta_converse_bound(const Channel& n, double eps, MetaConverseMode mode,
                                       const OptimizerConfig& opt) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("meta-converse: eps must lie in [0, 1)");
  const ErrorParam e{eps * eps, 1.0 - eps * eps};
  const RegisterShape ref = n.in_shape().suffixed("'");
  const int d = n.in_shape().total(), db = n.out_shape().total();

  if (mode == MetaConverseMode::covariant_mes) {
    const HermitianOperator rho = channel_output(n, maximally_entangled_input(n.in_shape()));
    const HermitianOperator sigma =
        tensor(n.apply(HermitianOperator::identity(n.in_shape()).scaled(1.0 / d)),
               HermitianOperator::identity(ref).scaled(1.0 / d));
    return {0.5 * dh(rho, sigma, e).bits,
            "1/2 D_h^{eps^2} at the maximally entangled input against N(I/d) x I/d (covariant channel)"};
  }

  const RegisterShape shape = n.in_shape().concat(ref);
  auto inner = [&](const PureVector& psi) {
    const HermitianOperator rho = channel_output(n, psi);
    const HermitianOperator rr = marginal(rho, ref.labels());
    auto at = [&](const Matrix& y) {
      const Matrix s = y * y.adjoint() / (y.norm() * y.norm());
      return 0.5 * dh(rho, tensor(HermitianOperator(n.out_shape(), hermitian_part(s)), rr), e).bits;
    };
    // Candidates: the output marginal and the maximally mixed state, then a local polish.
    const Matrix out_marg = marginal(rho, n.out_shape().labels()).matrix();
    Matrix y0 = sqrt_psd(out_marg);
    double best = std::min(at(y0), at(Matrix::Identity(db, db)));
    if (at(Matrix::Identity(db, db)) < at(y0)) y0 = Matrix::Identity(db, db);
    Eigen::VectorXd p0(2 * db * db);
    for (int i = 0; i < db * db; ++i) {
      p0(i) = y0(i / db, i % db).real();
      p0(db * db + i) = y0(i / db, i % db).imag();
    }
    const LocalResult lr = nelder_mead([&](const Eigen::VectorXd& p) { return at(from_real(p, db, db)); }, p0,
                                       0.1, 400, 1e-10);
    return std::min(best, lr.f);
  };

  const int starts = std::max(1, std::min(opt.starts, 4));
  std::vector<double> vals(starts);
  parallel_for(starts, [&](int s) {
    Matrix x0 = Matrix::Identity(d, d);
    if (s > 0) {
      CounterRng rng(opt.seed, static_cast<std::uint64_t>(s));
      x0 = ginibre(rng, d, d);
    }
    Eigen::VectorXd p0(2 * d * d);
    for (int i = 0; i < d * d; ++i) {
      p0(i) = x0(i / d, i % d).real();
      p0(d * d + i) = x0(i / d, i % d).imag();
    }
    const LocalResult lr = nelder_mead(
        [&](const Eigen::VectorXd& p) { return -inner(to_input(from_real(p, d, d), shape)); }, p0, 0.2,
        std::min(opt.max_evals, 300), 1e-9);
    vals[s] = -lr.f;
  });
  return {*std::max_element(vals.begin(), vals.end()),
          "heuristic: multi-start max over inputs of a searched min over sigma_B of 1/2 D_h^{eps^2}"};
}

}  // namespace oneshot
