#include "oneshot/random.hpp"

#include <cmath>
#include <numbers>

namespace oneshot {

namespace {

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

void CounterRng::refill() {
  std::uint32_t c[4] = {static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                        static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  std::uint32_t k0 = key_[0], k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(0xD2511F53u, c[0], hi0, lo0);
    mulhilo(0xCD9E8D57u, c[2], hi1, lo1);
    c[0] = hi1 ^ c[1] ^ k0;
    c[1] = lo1;
    c[2] = hi0 ^ c[3] ^ k1;
    c[3] = lo0;
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  for (int i = 0; i < 4; ++i) buf_[i] = c[i];
  avail_ = 4;
  ++counter_;
}

std::uint64_t CounterRng::next_u64() {
  if (avail_ < 2) refill();
  const std::uint64_t hi = buf_[4 - avail_];
  const std::uint64_t lo = buf_[5 - avail_];
  avail_ -= 2;
  return (hi << 32) | lo;
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  has_spare_ = true;
  return r * std::cos(th);
}

cplx CounterRng::complex_normal() {
  const double a = normal(), b = normal();
  return {a * M_SQRT1_2, b * M_SQRT1_2};
}

Matrix ginibre(CounterRng& rng, int rows, int cols) {
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

Vector haar_vector(CounterRng& rng, int dim) {
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

Matrix haar_unitary(CounterRng& rng, int dim) {
  const Matrix g = ginibre(rng, dim, dim);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const cplx d = r(k, k);
    const double a = std::abs(d);
    if (a > 0) q.col(k) *= d / a;
  }
  return q;
}

HermitianOperator random_density(CounterRng& rng, const RegisterShape& shape, int rank) {
  const int d = shape.total();
  const Matrix g = ginibre(rng, d, rank > 0 ? rank : d);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {shape, hermitian_part(rho)};
}

HermitianOperator random_hermitian(CounterRng& rng, const RegisterShape& shape) {
  const int d = shape.total();
  const Matrix g = ginibre(rng, d, d);
  return {shape, hermitian_part(g)};
}

PureVector random_pure(CounterRng& rng, const RegisterShape& shape) {
  return {shape, haar_vector(rng, shape.total())};
}

std::vector<double> random_probability(CounterRng& rng, int k) {
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& x : p) {
    double u = rng.uniform();
    while (u <= 0.0) u = rng.uniform();
    x = -std::log(u);
    s += x;
  }
  for (auto& x : p) x /= s;
  return p;
}

}  // namespace oneshot
