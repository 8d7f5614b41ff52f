#pragma once

#include <cstdint>

#include "oneshot/registers.hpp"

namespace oneshot {

// Philox4x32-10: the stream (seed, stream id, counter) fully determines output,
// so sweeps give identical results regardless of how work is split.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double normal();
  cplx complex_normal();  // E|z|^2 = 1

  std::uint64_t seed() const {
    return static_cast<std::uint64_t>(key_[0]) | (static_cast<std::uint64_t>(key_[1]) << 32);
  }

 private:
  std::uint32_t key_[2];
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint32_t buf_[4] = {0, 0, 0, 0};
  int avail_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;

  void refill();
};

Vector haar_vector(CounterRng& rng, int dim);
Matrix haar_unitary(CounterRng& rng, int dim);
Matrix ginibre(CounterRng& rng, int rows, int cols);
// Induced measure: Tr_E of a Haar pure state on (shape ⊗ C^rank).
HermitianOperator random_density(CounterRng& rng, const RegisterShape& shape, int rank = 0);
HermitianOperator random_hermitian(CounterRng& rng, const RegisterShape& shape);
PureVector random_pure(CounterRng& rng, const RegisterShape& shape);
std::vector<double> random_probability(CounterRng& rng, int k);

}  // namespace oneshot
