#pragma once

#include <string>

namespace oneshot {

// Two-sided enclosure of a quantity that is not computed exactly.
struct BoundInterval {
  double lower = 0.0;
  double upper = 0.0;
  std::string lower_provenance;
  std::string upper_provenance;

  bool contains(double x, double tol = 1e-9) const {
    return x >= lower - tol && x <= upper + tol;
  }
  double width() const { return upper - lower; }
};

}  // namespace oneshot
