#include "hdrelay/entropy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hdrelay {

namespace {
constexpr double kClampSlack = 1e-15;
}

double xlog2(double x) {
  if (x <= 0.0) {
    if (x < -kClampSlack) {
      throw std::invalid_argument("xlog2: negative argument " + std::to_string(x));
    }
    return 0.0;
  }
  return x * std::log2(x);
}

double binary_entropy(double x) {
  if (x < 0.0 || x > 1.0) {
    if (x >= -kClampSlack && x <= 1.0 + kClampSlack) {
      x = (x < 0.5) ? 0.0 : 1.0;
    } else {
      throw std::invalid_argument("binary_entropy: argument outside [0,1]: " +
                                  std::to_string(x));
    }
  }
  return -xlog2(x) - xlog2(1.0 - x);
}

double log2_alphabet(int q) {
  if (q < 1) throw std::invalid_argument("log2_alphabet: q must be at least 1");
  return std::log2(static_cast<double>(q) + 1.0);
}

}  // namespace hdrelay
