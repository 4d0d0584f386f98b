#include "lightwit/analytic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lightwit::analytic {

namespace {

void require_n(int n) {
  if (n < 2) throw std::invalid_argument("threshold formulas need n >= 2");
}

std::string fmt_s(double s) {
  std::ostringstream out;
  out << s;
  return out.str();
}

}  // namespace

ThresholdResult sym_noise_threshold(int n, double s) {
  require_n(n);
  if (s >= n) return {0.0, "no violation: S = " + fmt_s(s) + " >= N"};
  return {(n - s) / ((n - 1.0) + (n - s)), "destructive interference regime S < N"};
}

ThresholdResult asym_noise_threshold(int n, double s) {
  require_n(n);
  if (s <= n) return {0.0, "no violation: S = " + fmt_s(s) + " <= N"};
  return {(s - n) / ((n - 1.0) + (s - n)), "constructive interference regime S > N"};
}

double w_state_violation_bound(int n) {
  const double nn = n;
  return nn * nn / (2.0 * nn - 1.0);
}

double two_qutrit_closed_form(double phase1, double phase2, double phi12, double phi13, int handedness) {
  if (handedness != 1 && handedness != -1) throw std::invalid_argument("handedness must be +1 or -1");
  const double h = handedness;
  return -4.0 / 3.0 * std::cos(phase1 - h * 2.0 * phi12) + std::cos(phase2 - h * 2.0 * phi13) / 9.0 + 5.0 / 9.0;
}

double linear_array_structure_factor(int n, double kz_a) {
  if (n < 1) throw std::invalid_argument("lattice needs n >= 1");
  // |1 - e^{i x}|^2 = 4 sin^2(x / 2)
  const double den = std::sin(kz_a / 2.0);
  if (2.0 * std::abs(den) < kLatticeLimitTol) return static_cast<double>(n) * n;
  const double num = std::sin(n * kz_a / 2.0);
  return num * num / (den * den);
}

}  // namespace lightwit::analytic
