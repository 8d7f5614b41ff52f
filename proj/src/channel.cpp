#include "oneshot/channel.hpp"

#include <cmath>
#include <numbers>

namespace oneshot {

Channel::Channel(std::vector<Matrix> kraus, RegisterShape in, RegisterShape out)
    : kraus_(std::move(kraus)), in_(std::move(in)), out_(std::move(out)) {
  if (kraus_.empty()) throw DomainError("channel needs at least one Kraus operator");
  const int din = in_.total(), dout = out_.total();
  Matrix sum = Matrix::Zero(din, din);
  for (const auto& k : kraus_) {
    if (k.rows() != dout || k.cols() != din)
      throw DomainError("Kraus operator shape does not match channel registers");
    sum += k.adjoint() * k;
  }
  if ((sum - Matrix::Identity(din, din)).norm() > 1e-10)
    throw DomainError("channel is not trace preserving");
}

HermitianOperator Channel::apply(const HermitianOperator& x) const {
  const RegisterShape& s = x.shape();
  for (std::size_t i = 0; i < in_.size(); ++i)
    if (s.dim_of(in_.labels()[i]) != in_.dims()[i])
      throw DomainError("channel input register dimension mismatch");
  const RegisterShape rest = s.drop(in_.labels());
  for (const auto& l : out_.labels())
    if (rest.has(l)) throw DomainError("channel output label collides with '" + l + "'");

  std::vector<std::string> front = in_.labels();
  for (const auto& l : rest.labels()) front.push_back(l);
  const HermitianOperator xp = permute(x, front);
  const int dr = rest.total();
  const Matrix id = Matrix::Identity(dr, dr);
  Matrix y = Matrix::Zero(static_cast<Eigen::Index>(out_.total()) * dr,
                          static_cast<Eigen::Index>(out_.total()) * dr);
  for (const auto& k : kraus_) {
    const Matrix kk = dr == 1 ? k : kron(k, id);
    y += kk * xp.matrix() * kk.adjoint();
  }
  const HermitianOperator yo(out_.concat(rest), hermitian_part(y));

  std::vector<std::string> order;
  bool placed = false;
  for (const auto& l : s.labels()) {
    if (in_.has(l)) {
      if (!placed) {
        for (const auto& o : out_.labels()) order.push_back(o);
        placed = true;
      }
    } else {
      order.push_back(l);
    }
  }
  return permute(yo, order);
}

RegisterShape Channel::environment_shape() const {
  std::string label = "E";
  while (in_.has(label) || out_.has(label)) label += "'";
  return {{label}, {static_cast<int>(kraus_.size())}};
}

Matrix Channel::stinespring() const {
  const int dout = out_.total(), din = in_.total(), de = static_cast<int>(kraus_.size());
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(dout) * de, din);
  for (int k = 0; k < de; ++k)
    for (int i = 0; i < dout; ++i) v.row(i * de + k) = kraus_[k].row(i);
  return v;
}

Channel Channel::complementary() const {
  const int dout = out_.total(), din = in_.total(), de = static_cast<int>(kraus_.size());
  const Matrix v = stinespring();
  std::vector<Matrix> ks;
  for (int i = 0; i < dout; ++i) {
    Matrix k(de, din);
    for (int e = 0; e < de; ++e) k.row(e) = v.row(i * de + e);
    ks.push_back(k);
  }
  return {ks, in_, environment_shape()};
}

HermitianOperator Channel::choi() const {
  const int d = in_.total();
  const RegisterShape ref = in_.suffixed("'");
  Vector phi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  const HermitianOperator p(in_.concat(ref), phi * phi.adjoint());
  return apply(p);
}

Channel Channel::then(const Channel& after) const {
  if (after.in_.dims() != out_.dims()) throw DomainError("channel composition shape mismatch");
  std::vector<Matrix> ks;
  for (const auto& b : after.kraus_)
    for (const auto& a : kraus_) ks.push_back(b * a);
  return {ks, in_, after.out_};
}

Channel Channel::relabeled(const RegisterShape& in, const RegisterShape& out) const {
  if (in.dims() != in_.dims() || out.dims() != out_.dims())
    throw DomainError("channel relabel: dims differ");
  return {kraus_, in, out};
}

Channel identity_channel(const RegisterShape& in, const RegisterShape& out) {
  if (in.total() != out.total()) throw DomainError("identity channel needs equal dimensions");
  return {{Matrix::Identity(in.total(), in.total())}, in, out};
}

Channel unitary_channel(const Matrix& u, const RegisterShape& in, const RegisterShape& out) {
  return {{u}, in, out};
}

Channel depolarizing_channel(double p, const RegisterShape& in, const RegisterShape& out) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing parameter must lie in [0, 1]");
  const int d = in.total();
  if (out.total() != d) throw DomainError("depolarizing channel needs equal dimensions");
  const double dd = static_cast<double>(d) * d;
  std::vector<Matrix> ks;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Matrix w = Matrix::Zero(d, d);
      for (int j = 0; j < d; ++j) {
        const double ang = 2.0 * std::numbers::pi * b * j / d;
        w((j + a) % d, j) = cplx(std::cos(ang), std::sin(ang));
      }
      const double weight = (a == 0 && b == 0) ? 1.0 - p + p / dd : p / dd;
      if (weight > 0.0) ks.push_back(std::sqrt(weight) * w);
    }
  }
  return {ks, in, out};
}

Channel random_channel(CounterRng& rng, const RegisterShape& in, const RegisterShape& out,
                       int kraus_rank) {
  const int din = in.total(), dout = out.total();
  const int rows = dout * kraus_rank;
  if (rows < din) throw DomainError("random channel: output too small for an isometry");
  const Matrix u = haar_unitary(rng, rows);
  const Matrix v = u.leftCols(din);
  std::vector<Matrix> ks;
  for (int k = 0; k < kraus_rank; ++k) {
    Matrix kk(dout, din);
    for (int i = 0; i < dout; ++i) kk.row(i) = v.row(i * kraus_rank + k);
    ks.push_back(kk);
  }
  return {ks, in, out};
}

HermitianOperator apply_channel(const Channel& channel, const HermitianOperator& x) {
  return channel.apply(x);
}

}  // namespace oneshot
