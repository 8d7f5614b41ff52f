#include "oneshot/entropies.hpp"

#include <algorithm>
#include <cmath>

#include "oneshot/conic.hpp"
#include "oneshot/distances.hpp"
#include "oneshot/random.hpp"

namespace oneshot {

namespace {

std::vector<std::string> complement_labels(const RegisterShape& s,
                                           const std::vector<std::string>& a) {
  std::vector<std::string> b;
  for (const auto& l : s.labels())
    if (std::find(a.begin(), a.end(), l) == a.end()) b.push_back(l);
  return b;
}

double trace_of_power(const Matrix& m, double p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  const RVector& v = es.eigenvalues();
  const double cut = support_threshold(v);
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) > cut) s += std::pow(v(i), p);
  return s;
}

// Tr_A of an operator on A ⊗ B with A leading.
Matrix trace_out_first(const Matrix& z, int da, int db) {
  Matrix t = Matrix::Zero(db, db);
  for (int a = 0; a < da; ++a) t += z.block(a * db, a * db, db, db);
  return t;
}

}  // namespace

EntropyValue von_neumann(const HermitianOperator& rho) {
  require_state(rho, "rho");
  const auto es = eig_hermitian(rho);
  const double cut = support_threshold(es.values);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > cut) s -= es.values(i) * std::log2(es.values(i));
  return {s, true};
}

EntropyValue varentropy(const HermitianOperator& rho) {
  require_state(rho, "rho");
  const auto es = eig_hermitian(rho);
  const double cut = support_threshold(es.values);
  double s = 0.0, s2 = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double l = es.values(i);
    if (l > cut) {
      const double lg = std::log2(l);
      s -= l * lg;
      s2 += l * lg * lg;
    }
  }
  return {std::max(0.0, s2 - s * s), true};
}

bool supported_on(const HermitianOperator& rho, const HermitianOperator& sigma) {
  require_same_shape(rho, sigma);
  const Matrix q = Matrix::Identity(rho.dim(), rho.dim()) - support_projector(sigma.matrix());
  const double off = (q * rho.matrix() * q).trace().real();
  const double scale = rho.matrix().cwiseAbs().maxCoeff() * rho.dim();
  return off <= 1e-9 * std::max(scale, 1e-300);
}

EntropyValue relative_entropy(const HermitianOperator& rho, const HermitianOperator& sigma) {
  require_psd(rho, "rho");
  require_psd(sigma, "sigma");
  if (!supported_on(rho, sigma)) return EntropyValue::infinite();
  const Matrix l = log2_psd(rho.matrix()) - log2_psd(sigma.matrix());
  return {(rho.matrix() * l).trace().real(), true};
}

EntropyValue relative_entropy_variance(const HermitianOperator& rho,
                                       const HermitianOperator& sigma) {
  require_psd(rho, "rho");
  require_psd(sigma, "sigma");
  if (!supported_on(rho, sigma)) return EntropyValue::infinite();
  const Matrix l = log2_psd(rho.matrix()) - log2_psd(sigma.matrix());
  const Matrix rl = rho.matrix() * l;
  const double d = rl.trace().real();
  const double v = (rl * l).trace().real() - d * d;
  return {std::max(0.0, v), true};
}

EntropyValue dmax(const HermitianOperator& rho, const HermitianOperator& sigma) {
  require_psd(rho, "rho");
  require_psd(sigma, "sigma");
  if (!supported_on(rho, sigma)) return EntropyValue::infinite();
  const Matrix r = power_psd(sigma.matrix(), -0.5);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(r * rho.matrix() * r),
                                           Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  if (top <= 0.0) return EntropyValue::negative_infinite();
  return {std::log2(top), true};
}

EntropyValue dmin(const HermitianOperator& rho, const HermitianOperator& sigma) {
  const double f = fidelity(rho, sigma);
  if (f <= 0.0) return EntropyValue::infinite();
  return {-2.0 * std::log2(f), true};
}

EntropyValue sandwiched_renyi(const HermitianOperator& rho, const HermitianOperator& sigma,
                              double alpha) {
  if (!(alpha > 0.0)) throw DomainError("sandwiched Renyi order must be positive");
  if (std::isinf(alpha)) return dmax(rho, sigma);
  if (alpha == 0.5) return dmin(rho, sigma);
  if (alpha == 1.0) return relative_entropy(rho, sigma);
  require_psd(rho, "rho");
  require_psd(sigma, "sigma");
  require_same_shape(rho, sigma);
  if (alpha > 1.0 && !supported_on(rho, sigma)) return EntropyValue::infinite();
  const double g = (1.0 - alpha) / (2.0 * alpha);
  const Matrix sg = power_psd(sigma.matrix(), g);
  const double q = trace_of_power(sg * rho.matrix() * sg, alpha);
  if (q <= 0.0) return EntropyValue::infinite();
  return {std::log2(q) / (alpha - 1.0), true};
}

EntropyValue petz_renyi(const HermitianOperator& rho, const HermitianOperator& sigma,
                        double alpha) {
  if (!(alpha > 0.0) || std::isinf(alpha)) throw DomainError("Petz Renyi order must be finite and positive");
  if (alpha == 1.0) return relative_entropy(rho, sigma);
  require_psd(rho, "rho");
  require_psd(sigma, "sigma");
  require_same_shape(rho, sigma);
  if (alpha > 1.0 && !supported_on(rho, sigma)) return EntropyValue::infinite();
  const Matrix a = power_psd(rho.matrix(), alpha);
  const Matrix b = power_psd(sigma.matrix(), 1.0 - alpha);
  const double q = (a * b).trace().real();
  if (q <= 0.0) return EntropyValue::infinite();
  return {std::log2(q) / (alpha - 1.0), true};
}

HermitianOperator product_of_marginals(const HermitianOperator& rho,
                                       const std::vector<std::string>& a_labels) {
  const auto b_labels = complement_labels(rho.shape(), a_labels);
  if (a_labels.empty() || b_labels.empty())
    throw DomainError("bipartition needs nonempty A and B sides");
  const HermitianOperator ra = marginal(rho, a_labels);
  const HermitianOperator rb = marginal(rho, b_labels);
  return permute(tensor(ra, rb), rho.shape().labels());
}

EntropyValue mutual_information(const HermitianOperator& rho,
                                const std::vector<std::string>& a_labels) {
  require_state(rho, "rho");
  return relative_entropy(rho, product_of_marginals(rho, a_labels));
}

EntropyValue mutual_information_variance(const HermitianOperator& rho,
                                         const std::vector<std::string>& a_labels) {
  require_state(rho, "rho");
  return relative_entropy_variance(rho, product_of_marginals(rho, a_labels));
}

ImaxResult imax_certified(const HermitianOperator& rho, const HermitianOperator& tau) {
  require_psd(rho, "rho");
  require_psd(tau, "tau");
  const auto a_labels = tau.shape().labels();
  for (std::size_t i = 0; i < a_labels.size(); ++i)
    if (rho.shape().dim_of(a_labels[i]) != tau.shape().dims()[i])
      throw DomainError("imax: tau does not match the A registers of rho");
  const auto b_labels = complement_labels(rho.shape(), a_labels);
  if (b_labels.empty()) throw DomainError("imax: rho has no B registers");
  std::vector<std::string> order = a_labels;
  order.insert(order.end(), b_labels.begin(), b_labels.end());
  const HermitianOperator rp = permute(rho, order);
  const int da = tau.dim(), db = rp.dim() / da;

  const HermitianOperator ra = marginal(rp, a_labels);
  if (!supported_on(ra, tau)) return {EntropyValue::infinite(), {}};

  // Restrict to supp τ and whiten: minimize Tr X s.t. I ⊗ X ⪰ M.
  const auto et = eig_hermitian(tau);
  const double cut = support_threshold(et.values);
  std::vector<int> keep;
  for (int i = 0; i < da; ++i)
    if (et.values(i) > cut) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  Matrix w = Matrix::Zero(static_cast<Eigen::Index>(da) * db, static_cast<Eigen::Index>(r) * db);
  for (int k = 0; k < r; ++k) {
    const Vector v = et.vectors.col(keep[k]) / std::sqrt(et.values(keep[k]));
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b) w(a * db + b, k * db + b) = v(a);
  }
  const Matrix m = hermitian_part(w.adjoint() * rp.matrix() * w);

  const auto basis = hermitian_basis(db);
  SdpProblem pb;
  pb.c = -m;
  pb.b.resize(static_cast<Eigen::Index>(basis.size()));
  const Matrix id_r = Matrix::Identity(r, r);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    pb.a.push_back(-kron(id_r, basis[k]));
    pb.b(static_cast<Eigen::Index>(k)) = -basis[k].trace().real();
  }
  const SdpResult sr = solve_sdp(pb);

  ImaxCertificate cert;
  cert.iterations = sr.iterations;
  Matrix x = Matrix::Zero(db, db);
  for (std::size_t k = 0; k < basis.size(); ++k) x += sr.y(static_cast<Eigen::Index>(k)) * basis[k];
  x = hermitian_part(x);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(kron(id_r, x) - m), Eigen::EigenvaluesOnly);
    const double e = es.eigenvalues().minCoeff();
    if (e < 0.0) x += (-e) * Matrix::Identity(db, db);
  }
  Matrix z = sr.x;
  {
    const auto ez = eig_hermitian(hermitian_part(z));
    z = spectral_apply(ez, [](double l) { return std::max(l, 0.0); });
    const Matrix t = hermitian_part(trace_out_first(z, r, db));
    const Matrix ti = power_psd(t, -0.5);
    const Matrix k = kron(id_r, ti);
    z = hermitian_part(k * z * k);
  }
  cert.x_b = x;
  cert.dual = z;
  cert.primal = x.trace().real();
  cert.dual_value = (m * z).trace().real();
  cert.relative_gap = (cert.primal - cert.dual_value) / std::max(std::abs(cert.primal), 1e-300);
  {
    const HermitianOperator tx(RegisterShape(order, rp.shape().dims()),
                               hermitian_part(kron(tau.matrix(), x)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(tx.matrix() - rp.matrix(), Eigen::EigenvaluesOnly);
    cert.feasibility_residual = es.eigenvalues().minCoeff();
  }
  if (cert.primal <= 0.0) return {EntropyValue::negative_infinite(), cert};
  return {{std::log2(cert.primal), true}, cert};
}

EntropyValue imax(const HermitianOperator& rho, const HermitianOperator& tau) {
  return imax_certified(rho, tau).value;
}

namespace {

// F(ρ, τ ⊗ σ) with ρ already ordered A then B.
double fidelity_with_product(const Matrix& rho, const Matrix& tau, const Matrix& sigma) {
  const Matrix w = sqrt_psd(kron(tau, sigma));
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(w * rho * w), Eigen::EigenvaluesOnly);
  double f = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    f += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  return f;
}

struct FixedPointRun {
  Matrix sigma;
  double fidelity = 0.0;
  int iterations = 0;
  bool converged = false;
};

// σ ← Tr_A[(ω^{1/2} ρ ω^{1/2})^{1/2}] normalized, ω = τ ⊗ σ: the stationarity
// map of σ ↦ F(ρ, τ ⊗ σ).
FixedPointRun half_fixed_point(const Matrix& rho, const Matrix& tau, Matrix sigma, int da, int db,
                               int max_iter) {
  FixedPointRun run;
  double f = fidelity_with_product(rho, tau, sigma);
  run.sigma = sigma;
  run.fidelity = f;
  for (int it = 1; it <= max_iter; ++it) {
    const Matrix w = sqrt_psd(kron(tau, sigma));
    const Matrix y = sqrt_psd(hermitian_part(w * rho * w));
    Matrix t = hermitian_part(trace_out_first(y, da, db));
    const double tr = t.trace().real();
    if (!(tr > 0.0)) break;
    const Matrix next = t / tr;
    const double fn = fidelity_with_product(rho, tau, next);
    const double step = (next - sigma).norm();
    sigma = next;
    run.iterations = it;
    if (fn > run.fidelity) {
      run.fidelity = fn;
      run.sigma = next;
    }
    if (std::abs(fn - f) <= 1e-9 * 1e-3 * std::max(1.0, fn) && step <= 1e-9) {
      run.converged = true;
      break;
    }
    f = fn;
  }
  return run;
}

// argmax over states σ of F(ρ, τ ⊗ σ), from max Re Tr(Z V) subject to
// [[Λ, Z], [Z†, τ ⊗ σ]] ⪰ 0 where ρ = V Λ V† on its support.
Matrix fidelity_product_sdp(const Matrix& rho, const Matrix& tau, int da, int db) {
  const int n = da * db;
  const auto er = eig_hermitian(rho);
  const double cut = support_threshold(er.values);
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (er.values(i) > cut) keep.push_back(i);
  const int r = static_cast<int>(keep.size());
  Matrix v(n, r);
  RVector lam(r);
  for (int k = 0; k < r; ++k) {
    v.col(k) = er.vectors.col(keep[k]);
    lam(k) = er.values(keep[k]);
  }
  std::vector<Matrix> traceless;
  for (const auto& e : hermitian_basis(db))
    if (std::abs(e.trace()) < 1e-15) traceless.push_back(e);
  for (int k = 0; k + 1 < db; ++k) {
    Matrix e = Matrix::Zero(db, db);
    e(k, k) = 1.0 / std::sqrt(2.0);
    e(k + 1, k + 1) = -1.0 / std::sqrt(2.0);
    traceless.push_back(e);
  }
  const int big = r + n;
  SdpProblem pb;
  pb.c = Matrix::Zero(big, big);
  pb.c.topLeftCorner(r, r) = lam.asDiagonal();
  pb.c.bottomRightCorner(n, n) = kron(tau, Matrix::Identity(db, db) / static_cast<double>(db));
  std::vector<double> b;
  for (int j = 0; j < r; ++j)
    for (int l = 0; l < n; ++l) {
      Matrix re = Matrix::Zero(big, big), im = Matrix::Zero(big, big);
      re(j, r + l) = -1.0;
      re(r + l, j) = -1.0;
      im(j, r + l) = cplx(0.0, -1.0);
      im(r + l, j) = cplx(0.0, 1.0);
      pb.a.push_back(re);
      pb.a.push_back(im);
      b.push_back(v(l, j).real());
      b.push_back(-v(l, j).imag());
    }
  const int nz = static_cast<int>(pb.a.size());
  for (const auto& t : traceless) {
    Matrix a = Matrix::Zero(big, big);
    a.bottomRightCorner(n, n) = -kron(tau, t);
    pb.a.push_back(a);
    b.push_back(0.0);
  }
  pb.b = Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  const SdpResult sr = solve_sdp(pb);
  Matrix sigma = Matrix::Identity(db, db) / static_cast<double>(db);
  for (std::size_t k = 0; k < traceless.size(); ++k) sigma += sr.y(nz + static_cast<Eigen::Index>(k)) * traceless[k];
  const auto es = eig_hermitian(hermitian_part(sigma));
  sigma = spectral_apply(es, [](double l) { return std::max(l, 0.0); });
  return sigma / sigma.trace().real();
}

}  // namespace

RenyiMIResult renyi_mutual_information(const HermitianOperator& rho,
                                       const HermitianOperator& tau, double alpha,
                                       bool allow_sampled, std::uint64_t seed) {
  RenyiMIResult out;
  if (std::isinf(alpha)) {
    const auto r = imax_certified(rho, tau);
    out.value = r.value;
    out.sigma_b = r.certificate.x_b / std::max(r.certificate.primal, 1e-300);
    return out;
  }
  require_psd(rho, "rho");
  require_psd(tau, "tau");
  const auto a_labels = tau.shape().labels();
  const auto b_labels = complement_labels(rho.shape(), a_labels);
  if (b_labels.empty()) throw DomainError("Renyi mutual information: rho has no B registers");
  std::vector<std::string> order = a_labels;
  order.insert(order.end(), b_labels.begin(), b_labels.end());
  const HermitianOperator rp = permute(rho, order);
  const int da = tau.dim(), db = rp.dim() / da;
  const Matrix rb = marginal(rp, b_labels).matrix();
  const RegisterShape shape_b = rp.shape().keep(b_labels);

  if (alpha == 0.5) {
    FixedPointRun best = half_fixed_point(rp.matrix(), tau.matrix(), rb / rb.trace().real(), da, db, 2000);
    out.exact = best.converged;
    if (!best.converged) {
      // The multiplicative map stalls when the optimal σ_B is rank deficient;
      // finish with the fidelity conic program and keep the better point.
      const Matrix polished = fidelity_product_sdp(rp.matrix(), tau.matrix(), da, db);
      const double fp = fidelity_with_product(rp.matrix(), tau.matrix(), polished);
      if (fp > best.fidelity) {
        best.fidelity = fp;
        best.sigma = polished;
      }
      out.exact = true;
    }
    out.sigma_b = best.sigma;
    out.iterations = best.iterations;
    if (best.fidelity <= 0.0) {
      out.value = EntropyValue::infinite();
    } else {
      out.value = {-2.0 * std::log2(best.fidelity), true};
    }
    return out;
  }
  if (alpha == 1.0) {
    const HermitianOperator omega(rp.shape(), kron(tau.matrix(), rb));
    out.value = relative_entropy(rp, omega);
    out.sigma_b = rb;
    return out;
  }
  if (!allow_sampled)
    throw DomainError("Renyi mutual information: order must be 1/2, 1 or infinity unless sampling is allowed");
  CounterRng rng(seed, 0xa1fa);
  out.exact = false;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= 64; ++s) {
    const Matrix sig = s == 0 ? Matrix(rb) : random_density(rng, shape_b).matrix();
    const HermitianOperator omega(rp.shape(), hermitian_part(kron(tau.matrix(), sig)));
    const EntropyValue v = sandwiched_renyi(rp, omega, alpha);
    if (v.bits < best) {
      best = v.bits;
      out.sigma_b = sig;
      out.value = v;
    }
  }
  return out;
}

}  // namespace oneshot
