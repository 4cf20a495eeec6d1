#pragma once

#include <string>
#include <vector>

#include "asrank/common.hpp"

namespace asrank {

double mean(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);  // unbiased, n-1

// Regularized incomplete beta function I_x(a, b), continued fraction form.
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

enum class TTestVerdict { kWin, kLoss, kTie };

std::string to_string(TTestVerdict v);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
  double p_a_greater = 0.5;  // right-tail p-value of mean(a) > mean(b)
  TTestVerdict verdict = TTestVerdict::kTie;
};

// Welch's unequal-variance two-sample t-test on the side of a. `level` is the
// confidence level; win means mean(a) > mean(b) significant at that level,
// loss the reverse, tie otherwise. Both samples need at least 2 values. When
// both variances are zero the verdict falls back to exact mean comparison.
TTestResult welch_ttest(const std::vector<double>& a,
                        const std::vector<double>& b, double level = 0.95);

}  // namespace asrank
