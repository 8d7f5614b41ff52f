#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace oneshot {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Eigenvalues at or below this fraction of the largest |eigenvalue| are kernel.
inline constexpr double kKernelCutoff = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

// Raised when an input violates a documented precondition. what() names it.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& precondition)
      : std::invalid_argument(precondition) {}
};

class RegisterShape {
 public:
  RegisterShape() = default;
  RegisterShape(std::vector<std::string> labels, std::vector<int> dims);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return labels_.size(); }
  int total() const;

  bool has(const std::string& label) const;
  int index_of(const std::string& label) const;
  int dim_of(const std::string& label) const { return dims_[index_of(label)]; }

  RegisterShape concat(const RegisterShape& other) const;
  // Keeps the listed labels in this shape's order.
  RegisterShape keep(const std::vector<std::string>& labels) const;
  RegisterShape drop(const std::vector<std::string>& labels) const;
  // Same dims, labels suffixed (used for copies: "B" -> "B1").
  RegisterShape suffixed(const std::string& suffix) const;

  bool operator==(const RegisterShape& o) const {
    return labels_ == o.labels_ && dims_ == o.dims_;
  }
  bool operator!=(const RegisterShape& o) const { return !(*this == o); }

 private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
};

class HermitianOperator {
 public:
  HermitianOperator() = default;
  // Throws DomainError if m is not Hermitian within kHermitianTol (relative
  // Frobenius). The stored matrix is the exact Hermitian part.
  HermitianOperator(RegisterShape shape, const Matrix& m);

  static HermitianOperator identity(const RegisterShape& shape);
  static HermitianOperator diagonal(const RegisterShape& shape,
                                    const std::vector<double>& diag);

  const RegisterShape& shape() const { return shape_; }
  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  double trace() const { return m_.trace().real(); }

  HermitianOperator relabeled(const RegisterShape& shape) const;
  HermitianOperator scaled(double c) const;

 private:
  RegisterShape shape_;
  Matrix m_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);

bool is_psd(const Matrix& m, double tol = kPsdTol);

// Positive semidefinite with 0 < trace <= 1.
class SubnormalizedState {
 public:
  explicit SubnormalizedState(HermitianOperator op);
  const HermitianOperator& op() const { return op_; }
  operator const HermitianOperator&() const { return op_; }

 protected:
  struct Unchecked {};
  SubnormalizedState(HermitianOperator op, Unchecked) : op_(std::move(op)) {}
  HermitianOperator op_;
};

class DensityState : public SubnormalizedState {
 public:
  explicit DensityState(HermitianOperator op);
};

class PureVector {
 public:
  PureVector(RegisterShape shape, Vector amplitudes, bool allow_subnormalized = false);
  const RegisterShape& shape() const { return shape_; }
  const Vector& amplitudes() const { return v_; }
  HermitianOperator projector() const;

 private:
  RegisterShape shape_;
  Vector v_;
};

void require_state(const HermitianOperator& x, const std::string& name);
void require_subnormalized(const HermitianOperator& x, const std::string& name);
void require_psd(const HermitianOperator& x, const std::string& name);
void require_same_shape(const HermitianOperator& a, const HermitianOperator& b);

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
Matrix kron(const Matrix& a, const Matrix& b);
HermitianOperator tensor_power(const HermitianOperator& a, int n);

HermitianOperator partial_trace(const HermitianOperator& x,
                                const std::vector<std::string>& drop);
HermitianOperator marginal(const HermitianOperator& x,
                           const std::vector<std::string>& keep);

// Reorders tensor factors; order lists every label exactly once.
HermitianOperator permute(const HermitianOperator& x,
                          const std::vector<std::string>& order);
// Index map for the reorder above: result(i, j) = x(map[i], map[j]).
std::vector<int> permutation_index_map(const RegisterShape& from,
                                       const std::vector<std::string>& order);
// op ⊗ I on the registers of `full` not in op, arranged in full's order.
HermitianOperator embed(const HermitianOperator& op, const RegisterShape& full);
// Unitary that permutes n identical registers: sends factor k to position perm[k].
Matrix permutation_operator(int local_dim, const std::vector<int>& perm);

PureVector purify(const HermitianOperator& rho, const std::string& new_label);

struct Eigensystem {
  RVector values;  // ascending
  Matrix vectors;  // columns
};
Eigensystem eig_hermitian(const Matrix& x);
Eigensystem eig_hermitian(const HermitianOperator& x);

// Spectral calculus. Functions below act on the support only where noted.
template <class F>
Matrix spectral_apply(const Eigensystem& es, F&& f) {
  RVector fv(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) fv(i) = f(es.values(i));
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

double support_threshold(const RVector& values);
Matrix sqrt_psd(const Matrix& x);
Matrix power_psd(const Matrix& x, double p);  // negative p: on support only
Matrix log2_psd(const Matrix& x);             // zero on kernel
Matrix geninv(const Matrix& x);
Matrix support_projector(const Matrix& x);
Matrix positive_projector(const Matrix& x);  // {x > 0}

HermitianOperator sqrt_op(const HermitianOperator& x);
HermitianOperator log2_op(const HermitianOperator& x);
HermitianOperator geninv_op(const HermitianOperator& x);
HermitianOperator positive_part_projector(const HermitianOperator& x);

inline Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace oneshot
