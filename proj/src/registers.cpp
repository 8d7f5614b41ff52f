#include "oneshot/registers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace oneshot {

RegisterShape::RegisterShape(std::vector<std::string> labels, std::vector<int> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  if (labels_.size() != dims_.size())
    throw DomainError("register shape: labels and dims differ in length");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (dims_[i] <= 0) throw DomainError("register shape: dimension must be positive");
    if (!seen.insert(labels_[i]).second)
      throw DomainError("register shape: duplicate label '" + labels_[i] + "'");
  }
}

int RegisterShape::total() const {
  int t = 1;
  for (int d : dims_) t *= d;
  return t;
}

bool RegisterShape::has(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int RegisterShape::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw DomainError("unknown register label '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

RegisterShape RegisterShape::concat(const RegisterShape& other) const {
  auto l = labels_;
  auto d = dims_;
  for (std::size_t i = 0; i < other.size(); ++i) {
    if (has(other.labels_[i]))
      throw DomainError("tensor: label collision on '" + other.labels_[i] + "'");
    l.push_back(other.labels_[i]);
    d.push_back(other.dims_[i]);
  }
  return {l, d};
}

RegisterShape RegisterShape::keep(const std::vector<std::string>& labels) const {
  for (const auto& s : labels) index_of(s);
  std::vector<std::string> l;
  std::vector<int> d;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::find(labels.begin(), labels.end(), labels_[i]) != labels.end()) {
      l.push_back(labels_[i]);
      d.push_back(dims_[i]);
    }
  }
  return {l, d};
}

RegisterShape RegisterShape::drop(const std::vector<std::string>& labels) const {
  for (const auto& s : labels) index_of(s);
  std::vector<std::string> l;
  std::vector<int> d;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::find(labels.begin(), labels.end(), labels_[i]) == labels.end()) {
      l.push_back(labels_[i]);
      d.push_back(dims_[i]);
    }
  }
  return {l, d};
}

RegisterShape RegisterShape::suffixed(const std::string& suffix) const {
  auto l = labels_;
  for (auto& s : l) s += suffix;
  return {l, dims_};
}

HermitianOperator::HermitianOperator(RegisterShape shape, const Matrix& m)
    : shape_(std::move(shape)) {
  if (m.rows() != m.cols() || m.rows() != shape_.total())
    throw DomainError("operator dimension does not match register shape");
  const double norm = m.norm();
  const double defect = (m - m.adjoint()).norm();
  if (defect > kHermitianTol * std::max(norm, 1.0))
    throw DomainError("operator is not Hermitian");
  m_ = hermitian_part(m);
}

HermitianOperator HermitianOperator::identity(const RegisterShape& shape) {
  return {shape, Matrix::Identity(shape.total(), shape.total())};
}

HermitianOperator HermitianOperator::diagonal(const RegisterShape& shape,
                                              const std::vector<double>& diag) {
  if (static_cast<int>(diag.size()) != shape.total())
    throw DomainError("diagonal length does not match register shape");
  Matrix m = Matrix::Zero(shape.total(), shape.total());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return {shape, m};
}

HermitianOperator HermitianOperator::relabeled(const RegisterShape& shape) const {
  if (shape.dims() != shape_.dims()) throw DomainError("relabel: dims differ");
  HermitianOperator r = *this;
  r.shape_ = shape;
  return r;
}

HermitianOperator HermitianOperator::scaled(double c) const {
  HermitianOperator r = *this;
  r.m_ *= c;
  return r;
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_shape(a, b);
  return {a.shape(), a.matrix() + b.matrix()};
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_shape(a, b);
  return {a.shape(), a.matrix() - b.matrix()};
}

bool is_psd(const Matrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const RVector& v = es.eigenvalues();
  const double scale = std::max(v.cwiseAbs().maxCoeff(), 0.0);
  return v.minCoeff() >= -tol * std::max(scale, 1e-300);
}

void require_psd(const HermitianOperator& x, const std::string& name) {
  if (!is_psd(x.matrix())) throw DomainError(name + " must be positive semidefinite");
}

void require_subnormalized(const HermitianOperator& x, const std::string& name) {
  require_psd(x, name);
  const double t = x.trace();
  if (!(t > 0.0) || t > 1.0 + kPsdTol)
    throw DomainError(name + " must have trace in (0, 1]");
}

void require_state(const HermitianOperator& x, const std::string& name) {
  require_psd(x, name);
  if (std::abs(x.trace() - 1.0) > kPsdTol)
    throw DomainError(name + " must have unit trace");
}

void require_same_shape(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.shape().dims() != b.shape().dims()) throw DomainError("operands differ in shape");
}

SubnormalizedState::SubnormalizedState(HermitianOperator op) : op_(std::move(op)) {
  require_subnormalized(op_, "subnormalized state");
}

DensityState::DensityState(HermitianOperator op)
    : SubnormalizedState(std::move(op), Unchecked{}) {
  require_state(op_, "density state");
}

PureVector::PureVector(RegisterShape shape, Vector amplitudes, bool allow_subnormalized)
    : shape_(std::move(shape)), v_(std::move(amplitudes)) {
  if (v_.size() != shape_.total())
    throw DomainError("pure vector length does not match register shape");
  const double n2 = v_.squaredNorm();
  if (allow_subnormalized ? n2 > 1.0 + kPsdTol : std::abs(n2 - 1.0) > kPsdTol)
    throw DomainError("pure vector must have unit norm");
}

HermitianOperator PureVector::projector() const {
  return {shape_, v_ * v_.adjoint()};
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return {a.shape().concat(b.shape()), kron(a.matrix(), b.matrix())};
}

HermitianOperator tensor_power(const HermitianOperator& a, int n) {
  if (n < 1) throw DomainError("tensor power needs n >= 1");
  HermitianOperator r = a.relabeled(a.shape().suffixed("1"));
  for (int k = 2; k <= n; ++k)
    r = tensor(r, a.relabeled(a.shape().suffixed(std::to_string(k))));
  return r;
}

namespace {

std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

// Old linear index for each multi-index over the registers in `regs` (positions
// into the original shape), enumerated row-major over those registers.
std::vector<int> sub_index_table(const std::vector<int>& dims, const std::vector<int>& regs) {
  const auto strides = strides_of(dims);
  int count = 1;
  for (int r : regs) count *= dims[r];
  std::vector<int> table(count, 0);
  std::vector<int> digit(regs.size(), 0);
  for (int i = 0; i < count; ++i) {
    int idx = 0;
    for (std::size_t k = 0; k < regs.size(); ++k) idx += digit[k] * strides[regs[k]];
    table[i] = idx;
    for (int k = static_cast<int>(regs.size()) - 1; k >= 0; --k) {
      if (++digit[k] < dims[regs[k]]) break;
      digit[k] = 0;
    }
  }
  return table;
}

}  // namespace

std::vector<int> permutation_index_map(const RegisterShape& from,
                                       const std::vector<std::string>& order) {
  if (order.size() != from.size()) throw DomainError("permute: order must list every label");
  std::vector<int> regs;
  for (const auto& l : order) regs.push_back(from.index_of(l));
  std::set<int> uniq(regs.begin(), regs.end());
  if (uniq.size() != regs.size()) throw DomainError("permute: repeated label");
  return sub_index_table(from.dims(), regs);
}

HermitianOperator permute(const HermitianOperator& x, const std::vector<std::string>& order) {
  const auto map = permutation_index_map(x.shape(), order);
  std::vector<int> dims;
  for (const auto& l : order) dims.push_back(x.shape().dim_of(l));
  const int n = x.dim();
  Matrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = x.matrix()(map[i], map[j]);
  return {RegisterShape(order, dims), r};
}

HermitianOperator partial_trace(const HermitianOperator& x,
                                const std::vector<std::string>& drop) {
  const RegisterShape& s = x.shape();
  std::vector<int> kept, dropped;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::find(drop.begin(), drop.end(), s.labels()[i]) != drop.end())
      dropped.push_back(static_cast<int>(i));
    else
      kept.push_back(static_cast<int>(i));
  }
  for (const auto& l : drop) s.index_of(l);
  const auto tk = sub_index_table(s.dims(), kept);
  const auto td = sub_index_table(s.dims(), dropped);
  const int nk = static_cast<int>(tk.size());
  Matrix r = Matrix::Zero(nk, nk);
  const Matrix& m = x.matrix();
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < nk; ++b) {
      cplx acc = 0.0;
      for (int c : td) acc += m(tk[a] + c, tk[b] + c);
      r(a, b) = acc;
    }
  return {s.drop(drop), r};
}

HermitianOperator marginal(const HermitianOperator& x, const std::vector<std::string>& keep) {
  std::vector<std::string> drop;
  for (const auto& l : x.shape().labels())
    if (std::find(keep.begin(), keep.end(), l) == keep.end()) drop.push_back(l);
  for (const auto& l : keep) x.shape().index_of(l);
  return partial_trace(x, drop);
}

HermitianOperator embed(const HermitianOperator& op, const RegisterShape& full) {
  for (std::size_t i = 0; i < op.shape().size(); ++i)
    if (full.dim_of(op.shape().labels()[i]) != op.shape().dims()[i])
      throw DomainError("embed: register dimension mismatch");
  const RegisterShape rest = full.drop(op.shape().labels());
  HermitianOperator t = rest.size() ? tensor(op, HermitianOperator::identity(rest)) : op;
  return permute(t, full.labels());
}

Matrix permutation_operator(int local_dim, const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  int total = 1;
  for (int k = 0; k < n; ++k) total *= local_dim;
  Matrix p = Matrix::Zero(total, total);
  std::vector<int> x(n), y(n);
  for (int in = 0; in < total; ++in) {
    int rem = in;
    for (int k = n - 1; k >= 0; --k) {
      x[k] = rem % local_dim;
      rem /= local_dim;
    }
    for (int k = 0; k < n; ++k) y[perm[k]] = x[k];
    int out = 0;
    for (int k = 0; k < n; ++k) out = out * local_dim + y[k];
    p(out, in) = 1.0;
  }
  return p;
}

Eigensystem eig_hermitian(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigensystem eig_hermitian(const HermitianOperator& x) { return eig_hermitian(x.matrix()); }

double support_threshold(const RVector& values) {
  if (values.size() == 0) return 0.0;
  return kKernelCutoff * values.cwiseAbs().maxCoeff();
}

namespace {

void require_psd_spectrum(const RVector& v) {
  const double scale = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (v.size() && v.minCoeff() < -1e-9 * std::max(scale, 1e-300))
    throw DomainError("matrix function: negative eigenvalue outside the cutoff");
}

}  // namespace

Matrix sqrt_psd(const Matrix& x) {
  const auto es = eig_hermitian(x);
  return spectral_apply(es, [](double l) { return l > 0.0 ? std::sqrt(l) : 0.0; });
}

Matrix power_psd(const Matrix& x, double p) {
  const auto es = eig_hermitian(x);
  require_psd_spectrum(es.values);
  const double cut = support_threshold(es.values);
  return spectral_apply(es, [&](double l) { return l > cut ? std::pow(l, p) : 0.0; });
}

Matrix log2_psd(const Matrix& x) {
  const auto es = eig_hermitian(x);
  require_psd_spectrum(es.values);
  const double cut = support_threshold(es.values);
  return spectral_apply(es, [&](double l) { return l > cut ? std::log2(l) : 0.0; });
}

Matrix geninv(const Matrix& x) {
  const auto es = eig_hermitian(x);
  const double cut = support_threshold(es.values);
  return spectral_apply(es, [&](double l) { return std::abs(l) > cut ? 1.0 / l : 0.0; });
}

Matrix support_projector(const Matrix& x) {
  const auto es = eig_hermitian(x);
  const double cut = support_threshold(es.values);
  return spectral_apply(es, [&](double l) { return std::abs(l) > cut ? 1.0 : 0.0; });
}

Matrix positive_projector(const Matrix& x) {
  const auto es = eig_hermitian(x);
  const double cut = support_threshold(es.values);
  return spectral_apply(es, [&](double l) { return l > cut ? 1.0 : 0.0; });
}

HermitianOperator sqrt_op(const HermitianOperator& x) {
  const auto es = eig_hermitian(x);
  require_psd_spectrum(es.values);
  return {x.shape(), hermitian_part(sqrt_psd(x.matrix()))};
}
HermitianOperator log2_op(const HermitianOperator& x) {
  return {x.shape(), hermitian_part(log2_psd(x.matrix()))};
}
HermitianOperator geninv_op(const HermitianOperator& x) {
  return {x.shape(), hermitian_part(geninv(x.matrix()))};
}
HermitianOperator positive_part_projector(const HermitianOperator& x) {
  return {x.shape(), hermitian_part(positive_projector(x.matrix()))};
}

PureVector purify(const HermitianOperator& rho, const std::string& new_label) {
  require_psd(rho, "purify input");
  if (rho.shape().has(new_label)) throw DomainError("purify: label collision on '" + new_label + "'");
  const auto es = eig_hermitian(rho);
  const int d = rho.dim();
  Matrix vecs = es.vectors;
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      if (std::abs(vecs(i, k)) > 1e-12) {
        const cplx ph = std::conj(vecs(i, k)) / std::abs(vecs(i, k));
        vecs.col(k) *= ph;
        break;
      }
    }
  }
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  const double tie = 1e-12 * std::max(es.values.cwiseAbs().maxCoeff(), 1e-300);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(es.values(a) - es.values(b)) > tie) return es.values(a) > es.values(b);
    for (int i = 0; i < d; ++i) {
      const double ma = std::abs(vecs(i, a)), mb = std::abs(vecs(i, b));
      if (std::abs(ma - mb) > 1e-12) return ma > mb;
    }
    return a < b;
  });
  Vector psi = Vector::Zero(d * d);
  for (int j = 0; j < d; ++j) {
    const int k = order[j];
    const double lam = std::max(es.values(k), 0.0);
    for (int i = 0; i < d; ++i) psi(i * d + j) += std::sqrt(lam) * vecs(i, k);
  }
  const RegisterShape shape = rho.shape().concat(RegisterShape({new_label}, {d}));
  const double n2 = psi.squaredNorm();
  return PureVector(shape, psi, n2 <= 1.0 + kPsdTol);
}

}  // namespace oneshot
