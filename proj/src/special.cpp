#include "jscc/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace jscc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double binary_entropy_nats(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double binary_entropy(double p) { return binary_entropy_nats(p) / kLn2; }

double inv_binary_entropy(double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw std::domain_error("inv_binary_entropy: h outside [0,1]");
  if (h == 0.0) return 0.0;
  if (h == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < h ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double gaussian_Q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double gaussian_Qinv(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("gaussian_Qinv: eps outside (0,1)");
  // Acklam's rational approximation for the normal quantile, then two Newton
  // steps against erfc to pin the result well below 1e-12.
  double p = 1.0 - eps;  // quantile of the cdf
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= phigh) {
    double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Newton on Q(x) = eps; Q'(x) = -phi(x).
  for (int i = 0; i < 3; ++i) {
    double f = gaussian_Q(x) - eps;
    double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    if (phi <= 0.0) break;
    x += f / phi;
  }
  return x;
}

double lchoose(std::int64_t n, std::int64_t k) {
  if (n < 0) throw std::domain_error("lchoose: n < 0");
  if (k < 0 || k > n) return -kInf;
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_sum_exp(std::span<const double> v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log1mexp(double x) {
  if (x > 0.0) throw std::domain_error("log1mexp: x > 0");
  if (x == 0.0) return -kInf;
  // split at ln 2 for accuracy (Maechler's recipe)
  return x > -kLn2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

double log_binomial_sum(std::int64_t k, std::int64_t l) {
  if (k < 0 || l < 0 || l > k) throw std::domain_error("log_binomial_sum: need 0 <= l <= k");
  // Sum ascending in log domain; terms are unimodal in i with mode near k/2,
  // so for l <= k/2 the last term dominates and accumulation is stable.
  double acc = -kInf;
  for (std::int64_t i = 0; i <= l; ++i) acc = log_sum_exp(acc, lchoose(k, i));
  return acc;
}

double log_binom_pmf(std::int64_t n, std::int64_t t, double p) {
  if (t < 0 || t > n) return -kInf;
  if (p == 0.0) return t == 0 ? 0.0 : -kInf;
  if (p == 1.0) return t == n ? 0.0 : -kInf;
  return lchoose(n, t) + double(t) * std::log(p) + double(n - t) * std::log1p(-p);
}

// ---- incomplete gamma ----
namespace {

// Series for the lower incomplete gamma, log-safe: returns ln P(a,x).
// Valid (and convergent) for x < a + 1.
double log_gamma_p_series(double a, double x) {
  if (x <= 0.0) return -kInf;
  double sum = 1.0, term = 1.0, ap = a;
  for (int i = 0; i < 10000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
}

// Continued fraction (modified Lentz) for Q(a,x); valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  double lg = a * std::log(x) - x - std::lgamma(a) + std::log(h);
  return std::exp(lg);
}

}  // namespace

double log_gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("log_gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return -kInf;
  if (x < a + 1.0) return log_gamma_p_series(a, x);
  double q = gamma_q_cf(a, x);
  return q >= 1.0 ? -kInf : std::log1p(-q);
}

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return std::exp(log_gamma_p_series(a, x));
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::domain_error("gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x >= a + 1.0) return gamma_q_cf(a, x);
  double lp = log_gamma_p_series(a, x);
  return lp >= 0.0 ? 0.0 : -std::expm1(lp);
}

double berry_esseen_ratio(std::span<const double> means, std::span<const double> variances,
                          std::span<const double> third_moments, bool identically_distributed) {
  if (variances.empty() || variances.size() != third_moments.size() ||
      means.size() != variances.size())
    throw std::domain_error("berry_esseen_ratio: moment lists must be nonempty, equal length");
  double vn = 0.0, tn = 0.0;
  for (double v : variances) {
    if (v < 0.0) throw std::domain_error("berry_esseen_ratio: negative variance");
    vn += v;
  }
  for (double t : third_moments) tn += t;
  vn /= double(variances.size());
  tn /= double(third_moments.size());
  if (vn <= 0.0) throw std::domain_error("berry_esseen_ratio: degenerate (zero variance)");
  const double c0 = identically_distributed ? 0.4784 : 0.5600;
  return c0 * tn / std::pow(vn, 1.5);
}

std::int64_t floor_index(double x) {
  return std::int64_t(std::floor(x + 1e-9));
}

}  // namespace jscc
