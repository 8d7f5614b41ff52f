#pragma once

#include <vector>

#include "oneshot/random.hpp"
#include "oneshot/registers.hpp"

namespace oneshot {

// CPTP map in Kraus form. Kraus operators map C^{in.total()} -> C^{out.total()}.
class Channel {
 public:
  Channel(std::vector<Matrix> kraus, RegisterShape in, RegisterShape out);

  const std::vector<Matrix>& kraus() const { return kraus_; }
  const RegisterShape& in_shape() const { return in_; }
  const RegisterShape& out_shape() const { return out_; }

  // x must carry every input label. The input registers are replaced by the
  // output registers, placed where the first input register stood.
  HermitianOperator apply(const HermitianOperator& x) const;

  // V = sum_k K_k ⊗ |k>_E, an isometry from in to out ⊗ E.
  Matrix stinespring() const;
  RegisterShape environment_shape() const;
  // Complementary channel in -> E.
  Channel complementary() const;
  // Normalized Choi state (N ⊗ id)(Φ) on out ⊗ R with R a copy of in
  // labelled with suffix "'"; Tr_out = I/|A|.
  HermitianOperator choi() const;

  // after ∘ this
  Channel then(const Channel& after) const;
  Channel relabeled(const RegisterShape& in, const RegisterShape& out) const;

 private:
  std::vector<Matrix> kraus_;
  RegisterShape in_, out_;
};

Channel identity_channel(const RegisterShape& in, const RegisterShape& out);
Channel unitary_channel(const Matrix& u, const RegisterShape& in, const RegisterShape& out);
// rho -> (1-p) rho + p Tr(rho) I/d, via the d^2 Weyl operators.
Channel depolarizing_channel(double p, const RegisterShape& in, const RegisterShape& out);
// Channel from a Haar isometry into out ⊗ C^{kraus_rank}.
Channel random_channel(CounterRng& rng, const RegisterShape& in, const RegisterShape& out,
                       int kraus_rank);

// Same action as `channel` but on the given labels of a larger register set.
HermitianOperator apply_channel(const Channel& channel, const HermitianOperator& x);

}  // namespace oneshot
