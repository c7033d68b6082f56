#include "jscc/chi2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "jscc/errors.hpp"
#include "jscc/special.hpp"

namespace jscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPoissonTailTol = 1e-14;

void check_args(double x, double dof, double lambda) {
  if (!(dof > 0.0)) throw std::domain_error("chi2: dof must be positive");
  if (lambda < 0.0) throw std::domain_error("chi2: noncentrality must be >= 0");
  if (std::isnan(x)) throw std::domain_error("chi2: x is NaN");
}

double log_poisson_weight(long j, double mu) {
  return -mu + double(j) * std::log(mu) - std::lgamma(double(j) + 1.0);
}

// Index of the largest term in sum_j pois(j; mu) * P(a+j, y): the stationary
// point of the log-term, j*(a+j*) ~ mu*y.
long peak_term_index(double a, double y, double mu) {
  double j = 0.5 * (-a + std::sqrt(a * a + 4.0 * mu * y));
  return std::max<long>(0, long(j));
}

}  // namespace

double chi2_cdf(double x, double dof) {
  check_args(x, dof, 0.0);
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_sf(double x, double dof) {
  check_args(x, dof, 0.0);
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

double chi2_logpdf(double x, double dof) {
  check_args(x, dof, 0.0);
  if (x <= 0.0) return -kInf;
  double a = 0.5 * dof;
  return (a - 1.0) * std::log(x) - 0.5 * x - a * kLn2 - std::lgamma(a);
}

double chi2_quantile(double p, double dof) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("chi2_quantile: p outside (0,1)");
  double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 10.0;
  while (chi2_cdf(hi, dof) < p) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (chi2_cdf(mid, dof) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Poisson-weighted mixture of central chi-square cdfs. The linear versions
// expand around the Poisson mode with gamma-term recurrences and stop once
// the unaccounted Poisson mass is below 1e-14 (that leftover bounds the
// absolute error). The log version instead expands around the largest term
// of the series, which preserves relative accuracy deep in the joint tail
// where the mode-centered sweep would discard everything.

double noncentral_chi2_cdf(double x, double dof, double lambda) {
  check_args(x, dof, lambda);
  if (x <= 0.0) return 0.0;
  if (lambda == 0.0) return chi2_cdf(x, dof);
  const double a = 0.5 * dof, y = 0.5 * x, mu = 0.5 * lambda;
  const long j0 = std::max<long>(0, long(mu));
  // center values
  double p0 = gamma_p(a + double(j0), y);
  double w0 = std::exp(log_poisson_weight(j0, mu));
  // T(b, y) = y^b e^{-y} / Gamma(b+1), the P-recurrence increment at b = a+j
  double t0 = std::exp((a + double(j0)) * std::log(y) - y - std::lgamma(a + double(j0) + 1.0));
  double acc = w0 * p0, covered = w0;
  // upward: P(a+j+1) = P(a+j) - T(a+j)
  {
    double w = w0, p = p0, t = t0;
    for (long j = j0; covered < 1.0 - kPoissonTailTol; ++j) {
      p = std::max(p - t, 0.0);
      t *= y / (a + double(j) + 1.0);
      w *= mu / (double(j) + 1.0);
      acc += w * p;
      covered += w;
      if (p == 0.0) {
        // remaining upward terms are all zero; the rest of the Poisson mass
        // multiplies an upper-truncated cdf of 0
        break;
      }
      if (j - j0 > 500000) throw numeric_error("noncentral_chi2_cdf: no convergence", 1.0 - covered);
    }
  }
  // downward: P(a+j-1) = P(a+j) + T(a+j-1), T(b-1) = T(b) * (b+1)/y ... careful:
  // T(b-1, y) = y^{b-1} e^{-y}/Gamma(b) = T(b, y) * (b... ) handled inline.
  {
    double w = w0, p = p0, t = t0;
    for (long j = j0; j > 0 && covered < 1.0 - kPoissonTailTol; --j) {
      t *= (a + double(j)) / y;  // now T(a+j-1, y)
      p = std::min(p + t, 1.0);
      w *= double(j) / mu;
      acc += w * p;
      covered += w;
    }
  }
  return std::min(acc, 1.0);
}

double noncentral_chi2_sf(double x, double dof, double lambda) {
  check_args(x, dof, lambda);
  if (x <= 0.0) return 1.0;
  if (lambda == 0.0) return chi2_sf(x, dof);
  const double a = 0.5 * dof, y = 0.5 * x, mu = 0.5 * lambda;
  const long j0 = std::max<long>(0, long(mu));
  double q0 = gamma_q(a + double(j0), y);
  double w0 = std::exp(log_poisson_weight(j0, mu));
  double t0 = std::exp((a + double(j0)) * std::log(y) - y - std::lgamma(a + double(j0) + 1.0));
  double acc = w0 * q0, covered = w0;
  // upward: Q(a+j+1) = Q(a+j) + T(a+j)
  {
    double w = w0, q = q0, t = t0;
    for (long j = j0; covered < 1.0 - kPoissonTailTol; ++j) {
      q = std::min(q + t, 1.0);
      t *= y / (a + double(j) + 1.0);
      w *= mu / (double(j) + 1.0);
      acc += w * q;
      covered += w;
      if (j - j0 > 500000) throw numeric_error("noncentral_chi2_sf: no convergence", 1.0 - covered);
    }
  }
  // downward: Q(a+j-1) = Q(a+j) - T(a+j-1)
  {
    double w = w0, q = q0, t = t0;
    for (long j = j0; j > 0 && covered < 1.0 - kPoissonTailTol; --j) {
      t *= (a + double(j)) / y;
      q = std::max(q - t, 0.0);
      w *= double(j) / mu;
      acc += w * q;
      covered += w;
    }
  }
  return std::min(acc, 1.0);
}

double noncentral_chi2_cdf_log(double x, double dof, double lambda) {
  check_args(x, dof, lambda);
  if (x <= 0.0) return -kInf;
  const double a = 0.5 * dof, y = 0.5 * x, mu = 0.5 * lambda;
  if (mu == 0.0) return log_gamma_p(a, y);
  const long jpk = peak_term_index(a, y, mu);
  auto log_term = [&](long j) { return log_poisson_weight(j, mu) + log_gamma_p(a + double(j), y); };
  const double tpk = log_term(jpk);
  double sum = 1.0;  // exp-shifted by tpk
  for (long j = jpk + 1;; ++j) {
    double t = log_term(j) - tpk;
    sum += std::exp(t);
    if (t < -40.0) break;
    if (j - jpk > 500000) throw numeric_error("noncentral_chi2_cdf_log: no convergence", 0.0);
  }
  for (long j = jpk - 1; j >= 0; --j) {
    double t = log_term(j) - tpk;
    sum += std::exp(t);
    if (t < -40.0) break;
  }
  return tpk + std::log(sum);
}

double noncentral_chi2_logpdf(double x, double dof, double lambda) {
  check_args(x, dof, lambda);
  if (x <= 0.0) return -kInf;
  const double a = 0.5 * dof, mu = 0.5 * lambda;
  if (mu == 0.0) return chi2_logpdf(x, dof);
  // term peak for the pdf mixture: j*(a+j*) ~ mu * x/2 as for the cdf
  const long jpk = peak_term_index(a, 0.5 * x, mu);
  auto log_term = [&](long j) {
    return log_poisson_weight(j, mu) + chi2_logpdf(x, dof + 2.0 * double(j));
  };
  const double tpk = log_term(jpk);
  if (tpk == -kInf) return -kInf;
  double sum = 1.0;
  for (long j = jpk + 1;; ++j) {
    double t = log_term(j) - tpk;
    sum += std::exp(t);
    if (t < -40.0) break;
    if (j - jpk > 500000) throw numeric_error("noncentral_chi2_logpdf: no convergence", 0.0);
  }
  for (long j = jpk - 1; j >= 0; --j) {
    double t = log_term(j) - tpk;
    sum += std::exp(t);
    if (t < -40.0) break;
  }
  return tpk + std::log(sum);
}

double noncentral_chi2_quantile(double p, double dof, double lambda) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("noncentral_chi2_quantile: p outside (0,1)");
  check_args(0.0, dof, lambda);
  double mean = dof + lambda;
  double sd = std::sqrt(2.0 * (dof + 2.0 * lambda));
  double hi = mean + 10.0 * sd + 10.0;
  while (noncentral_chi2_cdf(hi, dof, lambda) < p) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (noncentral_chi2_cdf(mid, dof, lambda) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace jscc
