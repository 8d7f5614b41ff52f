#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "oneshot/registers.hpp"

namespace oneshot::test {

inline RegisterShape reg(const std::string& label, int d = 2) { return RegisterShape({label}, {d}); }

inline HermitianOperator diag(const std::string& label, const std::vector<double>& d) {
  return HermitianOperator::diagonal(reg(label, static_cast<int>(d.size())), d);
}

inline HermitianOperator ket0(const std::string& label = "A") { return diag(label, {1.0, 0.0}); }
inline HermitianOperator ket1(const std::string& label = "A") { return diag(label, {0.0, 1.0}); }
inline HermitianOperator mixed(const std::string& label = "A", int d = 2) {
  return diag(label, std::vector<double>(d, 1.0 / d));
}

// √a|00⟩ + √(1 − a)|11⟩ on A ⊗ B.
inline PureVector schmidt_qubits(double a) {
  Vector v = Vector::Zero(4);
  v(0) = std::sqrt(a);
  v(3) = std::sqrt(1.0 - a);
  return PureVector(RegisterShape({"A", "B"}, {2, 2}), v);
}
inline HermitianOperator bell() { return schmidt_qubits(0.5).projector(); }

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oneshot::test
