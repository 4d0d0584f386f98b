// Closed-form thresholds and reference values for white-noise-mixed
// permutation states, the W-state condition and the two-qutrit example.
#pragma once

#include <string>

namespace lightwit::analytic {

struct ThresholdResult {
  double p_star = 0.0;  // 0 when no violation window exists
  std::string note;
};

/// Symmetric Dicke state: (n - s) / ((n - 1) + (n - s)) for s < n.
ThresholdResult sym_noise_threshold(int n, double s);

/// Antisymmetric singlet: (s - n) / ((n - 1) + (s - n)) for s > n; n / (n + 1) at s = n^2.
ThresholdResult asym_noise_threshold(int n, double s);

/// Largest structure factor at which the W state violates the inequality: n^2 / (2n - 1).
double w_state_violation_bound(int n);

/// -(4/3) cos(phase1 -+ 2 phi12) + (1/9) cos(phase2 -+ 2 phi13) + 5/9, upper signs for handedness +1.
/// phase1 = k.(r1 + r2), phase2 = 2 k.r2.
double two_qutrit_closed_form(double phase1, double phase2, double phi12, double phi13, int handedness);

/// |1 - e^{i n kz_a}|^2 / |1 - e^{i kz_a}|^2, with the n^2 limit when the denominator vanishes.
double linear_array_structure_factor(int n, double kz_a);

inline constexpr double kLatticeLimitTol = 1e-9;

}  // namespace lightwit::analytic
