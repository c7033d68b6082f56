#include "jscc/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jscc/errors.hpp"
#include "jscc/special.hpp"

namespace jscc {

double Theta::operator()(double n) const {
  switch (policy) {
    case ThetaPolicy::Zero:
      return 0.0;
    case ThetaPolicy::HalfLogN:
      return 0.5 * std::log2(n);
    case ThetaPolicy::Custom:
      return custom_coefficient * std::log2(n);
  }
  return 0.0;
}

double jscc_approx_k(double n, const Descriptors& desc, double d, double eps,
                     const Theta& theta) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("jscc_approx_k: eps outside (0,1)");
  const double r = desc.rate(d);
  if (!(r > 0.0)) throw std::domain_error("jscc_approx_k: R(d) must be positive");
  const double v = desc.channel_dispersion, vs = desc.source_dispersion(d);
  const double qi = gaussian_Qinv(eps), th = theta(n);
  auto f = [&](double k) {
    return n * desc.capacity - k * r - std::sqrt(std::max(n * v + k * vs, 0.0)) * qi - th;
  };
  double lo = 0.0, hi = 2.0 * n * desc.capacity / r;
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (!(flo > 0.0 && fhi < 0.0)) {
    // scan for a sign change before giving up (f need not be monotone when
    // eps > 1/2 and the source dispersion dominates)
    double prev = lo, fprev = flo;
    bool found = false;
    for (int i = 1; i <= 256; ++i) {
      double k = lo + (hi - lo) * double(i) / 256.0;
      double fk = f(k);
      if ((fprev > 0.0) != (fk > 0.0)) {
        lo = prev;
        hi = k;
        found = true;
        break;
      }
      prev = k;
      fprev = fk;
    }
    if (!found)
      throw numeric_error("jscc_approx_k: no root in [0, 2nC/R(d)]", std::fabs(flo));
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double rate_dispersion(const Descriptors& desc, double d) {
  const double r = desc.rate(d);
  if (!(r > 0.0)) throw std::domain_error("rate_dispersion: R(d) = 0");
  return (r * desc.channel_dispersion + desc.capacity * desc.source_dispersion(d)) / (r * r * r);
}

double distortion_dispersion(const Descriptors& desc, double rate) {
  if (!(rate > 0.0)) throw std::domain_error("distortion_dispersion: rate must be positive");
  const double rr = desc.capacity / rate;  // bits per source symbol
  const double dd = desc.distortion_rate(rr);
  const double dprime = desc.distortion_rate_deriv(rr);
  return dprime * dprime * (desc.channel_dispersion + rate * desc.source_dispersion(dd)) /
         (rate * rate);
}

double sscc_approx_k(double n, const Descriptors& desc, double d, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("sscc_approx_k: eps outside (0,1)");
  const double r = desc.rate(d);
  if (!(r > 0.0)) throw std::domain_error("sscc_approx_k: R(d) must be positive");
  const double v = desc.channel_dispersion, vs = desc.source_dispersion(d);
  auto penalty = [&](double k) {
    // min over eta of sqrt(nV) Qinv(eta) + sqrt(k vs) Qinv(eps - eta)
    if (vs <= 0.0) return std::sqrt(n * v) * gaussian_Qinv(eps);
    if (v <= 0.0) return std::sqrt(k * vs) * gaussian_Qinv(eps);
    double best = std::numeric_limits<double>::infinity();
    const int grid = 2000;
    for (int i = 1; i < grid; ++i) {
      // logit-spaced split of eps between the two tail allocations
      double t = -30.0 + 60.0 * double(i) / double(grid);
      double eta = eps / (1.0 + std::exp(-t));
      double zeta = eps - eta;
      if (eta <= 0.0 || zeta <= 0.0) continue;
      best = std::min(best,
                      std::sqrt(n * v) * gaussian_Qinv(eta) + std::sqrt(k * vs) * gaussian_Qinv(zeta));
    }
    return best;
  };
  double k = std::max(n * desc.capacity / r, 1.0);
  for (int it = 0; it < 100; ++it) {
    double next = (n * desc.capacity - penalty(k)) / r;
    next = std::max(next, 0.0);
    if (std::fabs(next - k) < 1e-9 * std::max(1.0, k)) return next;
    k = next;
  }
  throw numeric_error("sscc_approx_k: fixed point did not converge in 100 iterations", k);
}

double jscc_approx_D(double n, double rate, const Descriptors& desc, double eps,
                     const Theta& theta) {
  if (!(rate > 0.0)) throw std::domain_error("jscc_approx_D: rate must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("jscc_approx_D: eps outside (0,1)");
  const double rr = desc.capacity / rate;
  const double base = desc.distortion_rate(rr);
  const double w = distortion_dispersion(desc, rate);
  const double coef = -desc.distortion_rate_deriv(rr) / rate;  // positive
  return base + std::sqrt(std::max(w, 0.0) / n) * gaussian_Qinv(eps) + coef * theta(n) / n;
}

}  // namespace jscc
