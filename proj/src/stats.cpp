#include "asrank/stats.hpp"

#include <cmath>

namespace asrank {

double mean(const std::vector<double>& v) {
  if (v.empty()) throw ValidationError("mean of empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) throw ValidationError("variance needs at least 2 samples");
  double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

namespace {

// Continued fraction for the incomplete beta, modified Lentz method.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  // Use the symmetry that keeps the continued fraction fast-converging.
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  double x = df / (df + t * t);
  double half_tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

std::string to_string(TTestVerdict v) {
  switch (v) {
    case TTestVerdict::kWin: return "win";
    case TTestVerdict::kLoss: return "loss";
    case TTestVerdict::kTie: return "tie";
  }
  return "?";
}

TTestResult welch_ttest(const std::vector<double>& a,
                        const std::vector<double>& b, double level) {
  if (a.size() < 2 || b.size() < 2)
    throw ValidationError("t-test needs at least 2 samples per cell");
  if (!(level > 0.0 && level < 1.0))
    throw ValidationError("confidence level must be in (0,1)");
  const double alpha = 1.0 - level;

  double ma = mean(a), mb = mean(b);
  double va = sample_variance(a), vb = sample_variance(b);
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());

  TTestResult r;
  if (va == 0.0 && vb == 0.0) {
    // Separated constants: exact comparison, no distribution involved.
    if (ma == mb) {
      r.verdict = TTestVerdict::kTie;
      r.p_two_sided = 1.0;
      r.p_a_greater = 0.5;
    } else {
      r.verdict = ma > mb ? TTestVerdict::kWin : TTestVerdict::kLoss;
      r.t = ma > mb ? HUGE_VAL : -HUGE_VAL;
      r.df = na + nb - 2.0;
      r.p_two_sided = 0.0;
      r.p_a_greater = ma > mb ? 0.0 : 1.0;
    }
    return r;
  }

  double se2 = va / na + vb / nb;
  r.t = (ma - mb) / std::sqrt(se2);
  r.df = se2 * se2 /
         (va * va / (na * na * (na - 1.0)) + vb * vb / (nb * nb * (nb - 1.0)));
  double cdf = student_t_cdf(r.t, r.df);
  r.p_a_greater = 1.0 - cdf;
  r.p_two_sided = 2.0 * std::min(cdf, 1.0 - cdf);
  if (r.p_a_greater <= alpha)
    r.verdict = TTestVerdict::kWin;
  else if (cdf <= alpha)
    r.verdict = TTestVerdict::kLoss;
  else
    r.verdict = TTestVerdict::kTie;
  return r;
}

}  // namespace asrank
