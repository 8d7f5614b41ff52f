#include "oneshot/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oneshot/distances.hpp"
#include "oneshot/entropies.hpp"
#include "oneshot/parallel.hpp"
#include "oneshot/random.hpp"

namespace oneshot {

namespace {

std::vector<std::string> suffixed(const std::vector<std::string>& labels, int i) {
  std::vector<std::string> out;
  for (const auto& l : labels) out.push_back(l + std::to_string(i));
  return out;
}

// x with each label in `from` renamed to the matching entry of `to`.
HermitianOperator rename(const HermitianOperator& x, const std::vector<std::string>& from,
                         const std::vector<std::string>& to) {
  std::vector<std::string> labels = x.shape().labels();
  for (auto& l : labels) {
    const auto it = std::find(from.begin(), from.end(), l);
    if (it != from.end()) l = to[it - from.begin()];
  }
  return x.relabeled(RegisterShape(labels, x.shape().dims()));
}

struct SplitLayout {
  std::vector<std::string> b, r, order;
};

SplitLayout layout(const ConvexSplitInstance& inst) {
  require_state(inst.rho_br, "rho_BR");
  require_state(inst.sigma_b, "sigma_B");
  if (inst.n < 1) throw DomainError("convex split: n must be positive");
  if (!(inst.delta > 0.0 && inst.delta <= 1.0)) throw DomainError("convex split: delta must lie in (0, 1]");
  SplitLayout s;
  s.b = inst.b_labels;
  for (const auto& l : s.b)
    if (!inst.rho_br.shape().has(l)) throw DomainError("convex split: unknown B register '" + l + "'");
  for (const auto& l : inst.rho_br.shape().labels())
    if (std::find(s.b.begin(), s.b.end(), l) == s.b.end()) s.r.push_back(l);
  if (s.r.empty()) throw DomainError("convex split: rho_BR needs an R register");
  if (inst.sigma_b.shape() != inst.rho_br.shape().keep(s.b))
    throw DomainError("convex split: sigma_B must live on the B registers");
  const double dim = std::pow(static_cast<double>(inst.sigma_b.dim()), inst.n) *
                     (inst.rho_br.dim() / inst.sigma_b.dim());
  if (dim > 4096) throw DomainError("convex split: state dimension above 4096");
  for (int i = 1; i <= inst.n; ++i)
    for (const auto& l : suffixed(s.b, i)) s.order.push_back(l);
  s.order.insert(s.order.end(), s.r.begin(), s.r.end());
  return s;
}

}  // namespace

HermitianOperator convex_split_state(const ConvexSplitInstance& inst) {
  const SplitLayout s = layout(inst);
  const HermitianOperator rho_b_first = permute(inst.rho_br, [&] {
    std::vector<std::string> o = s.b;
    o.insert(o.end(), s.r.begin(), s.r.end());
    return o;
  }());
  Matrix acc;
  for (int i = 1; i <= inst.n; ++i) {
    HermitianOperator term = rename(rho_b_first, s.b, suffixed(s.b, i));
    for (int j = 1; j <= inst.n; ++j)
      if (j != i) term = tensor(term, rename(inst.sigma_b, s.b, suffixed(s.b, j)));
    const Matrix m = permute(term, s.order).matrix();
    acc = i == 1 ? m : Matrix(acc + m);
  }
  const RegisterShape shape = [&] {
    std::vector<int> d;
    for (int i = 1; i <= inst.n; ++i)
      for (const auto& l : s.b) d.push_back(inst.sigma_b.shape().dim_of(l));
    for (const auto& l : s.r) d.push_back(inst.rho_br.shape().dim_of(l));
    return RegisterShape(s.order, d);
  }();
  return HermitianOperator(shape, acc / static_cast<double>(inst.n));
}

HermitianOperator convex_split_target(const ConvexSplitInstance& inst) {
  const SplitLayout s = layout(inst);
  HermitianOperator t = rename(inst.sigma_b, s.b, suffixed(s.b, 1));
  for (int j = 2; j <= inst.n; ++j) t = tensor(t, rename(inst.sigma_b, s.b, suffixed(s.b, j)));
  return permute(tensor(t, marginal(inst.rho_br, s.r)), s.order);
}

ConvexSplitCheck convex_split_check(const ConvexSplitInstance& inst) {
  const SplitLayout s = layout(inst);
  ConvexSplitCheck c;
  const HermitianOperator prod =
      permute(tensor(inst.sigma_b, marginal(inst.rho_br, s.r)), inst.rho_br.shape().labels());
  c.dmax = dmax(inst.rho_br, prod).bits;
  c.bound = std::sqrt(1.0 - inst.delta);
  c.fidelity = fidelity(convex_split_state(inst), convex_split_target(inst));
  c.hypothesis = std::log2(static_cast<double>(inst.n)) >= c.dmax + std::log2(1.0 / inst.delta);
  c.pass = !c.hypothesis || c.fidelity >= c.bound - 1e-9;
  return c;
}

long long convex_split_blocks(double dmax_bits, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("convex split: delta must lie in (0, 1]");
  if (!std::isfinite(dmax_bits) || dmax_bits + 2.0 * std::log2(1.0 / delta) > 62.0)
    throw DomainError("convex split: block count out of range");
  return static_cast<long long>(std::ceil(std::exp2(dmax_bits + 2.0 * std::log2(1.0 / delta)) - 1e-9));
}

double convex_split_cost(long long n) {
  if (n < 1) throw DomainError("convex split: n must be positive");
  return 0.5 * std::log2(static_cast<double>(n));
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > static_cast<unsigned __int128>(UINT64_MAX)) throw DomainError("binomial: overflow");
  }
  return static_cast<std::uint64_t>(r);
}

DeFinettiObjects de_finetti(int n, int d) {
  if (n < 1 || d < 1) throw DomainError("de Finetti: n and d must be positive");
  if (std::pow(static_cast<double>(d), n) > 4096) throw DomainError("de Finetti: d^n above 4096");
  DeFinettiObjects o;
  o.n = n;
  o.d = d;
  o.g = binomial(n + d * d - 1, n);
  o.g_bound = std::pow(static_cast<double>(n + 1), d * d - 1);
  o.sym_dimension = static_cast<double>(binomial(n + d - 1, n));

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const int dim = static_cast<int>(std::lround(std::pow(d, n)));
  Matrix pi = Matrix::Zero(dim, dim);
  double count = 0.0;
  do {
    pi += permutation_operator(d, perm);
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  pi /= count;
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("A" + std::to_string(i));
  o.zeta = HermitianOperator(RegisterShape(labels, std::vector<int>(n, d)), hermitian_part(pi) / o.sym_dimension);
  return o;
}

double postselection_factor(int n, int d) { return std::sqrt(2.0 * static_cast<double>(binomial(n + d * d - 1, n))); }

double postselection_factor_bound(int n, int d) {
  return std::sqrt(2.0) * std::pow(static_cast<double>(n + 1), 0.5 * (d * d - 1));
}

double de_finetti_monte_carlo(const DeFinettiObjects& obj, int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("de Finetti: samples must be positive");
  const int dim = obj.zeta.dim();
  const int chunk = 256, chunks = (samples + chunk - 1) / chunk;
  std::vector<Matrix> part(chunks);
  parallel_for(chunks, [&](int c) {
    Matrix acc = Matrix::Zero(dim, dim);
    for (int s = c * chunk; s < std::min(samples, (c + 1) * chunk); ++s) {
      CounterRng rng(seed, static_cast<std::uint64_t>(s));
      const Vector v = haar_vector(rng, obj.d);
      Vector w = v;
      for (int k = 1; k < obj.n; ++k) w = kron(w, v);
      acc += w * w.adjoint();
    }
    part[c] = acc;
  });
  Matrix mean = Matrix::Zero(dim, dim);
  for (const auto& p : part) mean += p;
  mean /= static_cast<double>(samples);
  return trace_distance(obj.zeta, HermitianOperator(obj.zeta.shape(), hermitian_part(mean)));
}

namespace {

void require_identical_registers(const RegisterShape& s, int n, const char* what) {
  if (static_cast<int>(s.size()) != n) throw DomainError(std::string("symmetrize: ") + what + " needs n registers");
  for (int d : s.dims())
    if (d != s.dims()[0]) throw DomainError(std::string("symmetrize: ") + what + " registers differ in dimension");
}

}  // namespace

Channel symmetrize(const Channel& t, int n) {
  if (n < 1 || n > 5) throw DomainError("symmetrize: n must lie in [1, 5]");
  require_identical_registers(t.in_shape(), n, "input");
  require_identical_registers(t.out_shape(), n, "output");
  const int din = t.in_shape().dims()[0], dout = t.out_shape().dims()[0];
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matrix> kraus;
  int count = 0;
  do {
    const Matrix pin = permutation_operator(din, perm), pout = permutation_operator(dout, perm);
    for (const auto& k : t.kraus()) kraus.push_back(pout.adjoint() * k * pin);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& k : kraus) k /= std::sqrt(static_cast<double>(count));
  return Channel(kraus, t.in_shape(), t.out_shape());
}

SymmetrizeCheck symmetrize_check(const Channel& t, int n, const std::vector<std::vector<int>>& perms,
                                 const HermitianOperator& input, const HermitianOperator& target) {
  const Channel tb = symmetrize(t, n);
  const int din = t.in_shape().dims()[0], dout = t.out_shape().dims()[0];
  SymmetrizeCheck c;
  for (const auto& p : perms) {
    if (static_cast<int>(p.size()) != n) throw DomainError("symmetrize: permutation of wrong length");
    const Channel pin = unitary_channel(permutation_operator(din, p), t.in_shape(), t.in_shape());
    const Channel pout = unitary_channel(permutation_operator(dout, p), t.out_shape(), t.out_shape());
    const Matrix a = pin.then(tb).choi().matrix(), b = tb.then(pout).choi().matrix();
    c.covariant_residual = std::max(c.covariant_residual, (a - b).cwiseAbs().maxCoeff());
  }
  c.p_original = purified_distance(target, t.apply(input));
  c.p_symmetrized = purified_distance(target, tb.apply(input));
  return c;
}

TeleportCheck teleport_coding_check(double p_succ, int d, int samples, std::uint64_t seed) {
  if (!(p_succ >= 0.0 && p_succ <= 1.0)) throw DomainError("teleport check: p_succ must lie in [0, 1]");
  if (d < 2 || samples < 1) throw DomainError("teleport check: need d >= 2 and samples >= 1");
  TeleportCheck c;
  c.bound = std::sqrt(1.0 - p_succ);
  const RegisterShape shape({"A", "R"}, {d, d});
  std::vector<double> worst(samples);
  parallel_for(samples, [&](int s) {
    CounterRng rng(seed, static_cast<std::uint64_t>(s));
    const Vector psi = haar_vector(rng, d * d);
    Vector perp = haar_vector(rng, d * d);
    perp -= psi * psi.dot(perp);
    perp.normalize();
    const Matrix out = p_succ * psi * psi.adjoint() + (1.0 - p_succ) * perp * perp.adjoint();
    worst[s] = purified_distance(HermitianOperator(shape, hermitian_part(out)),
                                 HermitianOperator(shape, psi * psi.adjoint()));
  });
  c.worst = *std::max_element(worst.begin(), worst.end());
  // Where the bound is 0, P cannot resolve below its rounding floor.
  c.pass = c.worst <= c.bound + (p_succ == 1.0 ? purified_distance_resolution(d * d) : 1e-9);
  return c;
}

StrongConverseCheck strong_converse_check(const std::vector<Matrix>& states, const std::vector<Matrix>& povm,
                                          double r, int d, int n) {
  if (states.size() != povm.size() || states.empty())
    throw DomainError("strong converse: need one POVM element per codeword");
  const double m = static_cast<double>(states.size());
  if (std::abs(std::log2(m) - n * r) > 1e-9) throw DomainError("strong converse: codebook size must be 2^{nr}");
  const int dim = static_cast<int>(std::lround(std::pow(d, n)));
  Matrix sum = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < povm.size(); ++i) {
    if (povm[i].rows() != dim || states[i].rows() != dim) throw DomainError("strong converse: dimension mismatch");
    if (!is_psd(povm[i])) throw DomainError("strong converse: POVM element not positive semidefinite");
    sum += povm[i];
  }
  if ((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9)
    throw DomainError("strong converse: POVM elements do not sum to the identity");
  StrongConverseCheck c;
  for (std::size_t i = 0; i < povm.size(); ++i) c.p_succ += (povm[i] * states[i]).trace().real();
  c.p_succ /= m;
  c.bound = std::exp2(-n * (r - std::log2(static_cast<double>(d))));
  c.pass = c.p_succ <= c.bound + 1e-9;
  return c;
}

double coding_converse_chain(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("coding converse: eps must lie in [0, 1]");
  const double a = 1.0 - eps;
  return a * std::sqrt(a) + std::sqrt(eps) * std::sqrt(1.0 - a * a);
}

double coding_converse_slope() { return 1.5 - std::sqrt(2.0); }

double channel_sim_radius(double eps, int dim_a, long long n) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("channel simulation: eps must lie in (0, 1]");
  if (dim_a < 1 || n < 1) throw DomainError("channel simulation: |A| and n must be positive");
  return eps / std::sqrt(2.0) * std::pow(static_cast<double>(n + 1), 0.5 * (1.0 - dim_a * dim_a));
}

double channel_sim_fudge(double eps, int dim_a, long long n) {
  const double e = channel_sim_radius(eps, dim_a, n);
  const double a = e / 72.0, b = e / 24.0, c = e / 4.0;
  return 0.5 * std::log2(2.0 / (a * a) + 2.0) + 2.0 * (dim_a * dim_a - 1) * std::log2(static_cast<double>(n + 1)) +
         0.5 * std::log2(2.0 / (b * b) + 2.0) + 0.5 * std::log2((8.0 + c * c) / (c * c)) + std::log2(4.0 / e);
}

}  // namespace oneshot
