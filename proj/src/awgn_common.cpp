#include "awgn_common.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "jscc/chi2.hpp"
#include "jscc/special.hpp"
#include "quadrature.hpp"

namespace jscc::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio_log(double t, std::int64_t n, double P) {
  if (t <= 0.0) return -kInf;
  return std::log1p(P) + noncentral_chi2_logpdf(t, double(n), double(n) * P) -
         chi2_logpdf(t / (1.0 + P), double(n));
}

double ratio_sup_at_n(std::int64_t n, double P) {
  // multistart golden-section over t; the ratio is smooth and unimodal in
  // practice but the starts guard against missing the hump
  const double span = double(n) * (1.0 + P) * 8.0 + 64.0;
  double best = -kInf;
  for (int s = 0; s < 8; ++s) {
    double lo = span * std::pow(2.0, -double(s + 1));
    double hi = span * std::pow(2.0, -double(s));
    double t = golden_min([&](double u) { return -ratio_log(u, n, P); }, lo, hi);
    best = std::max(best, ratio_log(t, n, P));
  }
  return best;
}

}  // namespace

double awgn_output_density_ratio_sup(double snr) {
  static std::map<double, double> cache;
  static std::mutex mu;
  {
    std::scoped_lock lock(mu);
    auto it = cache.find(snr);
    if (it != cache.end()) return it->second;
  }
  // dense scan at small n where the maximum sits, geometric afterwards;
  // the per-n suprema decrease in n for every SNR probed
  double best = -kInf;
  for (std::int64_t n = 1; n <= 64; ++n) best = std::max(best, ratio_sup_at_n(n, snr));
  for (double nf = 64.0; nf <= 10000.0; nf *= 1.25)
    best = std::max(best, ratio_sup_at_n(std::int64_t(nf), snr));
  best = std::max(best, ratio_sup_at_n(10000, snr));
  double f = std::exp(best);
  std::scoped_lock lock(mu);
  cache[snr] = f;
  return f;
}

void gms_rho_window(std::int64_t k, double dn, double* lo, double* hi) {
  const double a = std::sqrt(dn), b = std::sqrt(1.0 - dn);
  const double rlo = std::max(b - a, 0.0), rhi = b + a;
  *lo = double(k) * rlo * rlo;
  *hi = double(k) * rhi * rhi;
}

double gms_log_rho(double t, std::int64_t k, double dn) {
  if (!(dn > 0.0 && dn <= 1.0)) throw std::domain_error("gms_log_rho: d/sigma^2 outside (0,1]");
  if (k < 2) throw std::domain_error("gms_log_rho: k >= 2 required");
  if (t < 0.0) return -kInf;
  const double r = std::sqrt(t / double(k));
  const double a = std::sqrt(dn), b = std::sqrt(1.0 - dn);
  double L;
  if (r < a - b) {
    L = 0.0;  // representation sphere entirely inside the ball
  } else if (std::fabs(r - b) > a) {
    return -kInf;  // ball misses the sphere
  } else {
    double num = 1.0 + r * r - 2.0 * dn;
    L = num * num / (4.0 * (1.0 - dn) * r * r);
  }
  if (L >= 1.0) return -kInf;
  const double kk = double(k);
  const double lc = std::lgamma(0.5 * kk + 1.0) - std::lgamma(0.5 * (kk - 1.0) + 1.0) -
                    0.5 * std::log(M_PI) - std::log(kk);
  return lc + 0.5 * (kk - 1.0) * std::log1p(-L);
}

double awgn_min1_kernel(double ln_c, std::int64_t n, double snr) {
  const double P = snr;
  const double s = P / (2.0 * (1.0 + P));
  // w* solves ln_c + B(w) = 0; above it the min saturates at 1
  const double wstar = (0.5 * double(n) - ln_c) / s;
  if (wstar <= 0.0) return 1.0;
  const double nn = double(n);
  // tilted term: exp(ln_c) * (1+P)^{n/2} * F_{n, n(1+1/P)}(wstar/(1+P))
  double lt = ln_c + 0.5 * nn * std::log1p(P) +
              noncentral_chi2_cdf_log(wstar / (1.0 + P), nn, nn * (1.0 + 1.0 / P));
  double term1 = std::exp(lt);
  double term2 = noncentral_chi2_sf(wstar, nn, nn / P);
  return std::min(term1 + term2, 1.0);
}

}  // namespace jscc::detail
