#pragma once

namespace wrs {

// Compensated (Kahan) summation. The accumulated error stays on the order
// of one machine epsilon relative to the running sum, independent of the
// number of terms.
struct KahanAccumulator {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) {
    const double y = x - compensation;
    const double t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
  }

  double value() const { return sum; }
};

}  // namespace wrs
