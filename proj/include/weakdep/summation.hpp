#pragma once

// Neumaier compensated summation; required for sums over 2^16 or more terms.

#include <cmath>
#include <span>

namespace weakdep {

struct NeumaierAcc {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

inline double compensated_sum(std::span<const double> xs) {
  NeumaierAcc acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

}  // namespace weakdep
