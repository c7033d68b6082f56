#include "jscc/achievability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "awgn_common.hpp"
#include "binary_common.hpp"
#include "jscc/chi2.hpp"
#include "jscc/errors.hpp"
#include "jscc/lattice.hpp"
#include "jscc/special.hpp"
#include "quadrature.hpp"

namespace jscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double bsc_capacity_nats(double delta) { return kLn2 - binary_entropy_nats(delta); }

// E[exp(-|U - ln(gamma)|^+)] evaluated on a sorted atom list with suffix sums
// of m * e^{-u} (only accumulated where it cannot overflow for the gamma
// range) and prefix mass sums.
struct ExpectationKernel {
  std::vector<double> u;
  std::vector<double> prefix_mass;  // mass strictly before index i
  std::vector<double> suffix_scaled;  // sum_{j >= i} m_j e^{-u_j}, clamped below u_floor
  double u_floor;

  ExpectationKernel(const LatticeDistribution& lat, double gamma_lo) {
    u_floor = std::log(gamma_lo) - 2.0;
    const auto& atoms = lat.atoms();
    u.resize(atoms.size());
    prefix_mass.assign(atoms.size() + 1, 0.0);
    suffix_scaled.assign(atoms.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      u[i] = atoms[i].location;
      prefix_mass[i + 1] = prefix_mass[i] + std::exp(atoms[i].log_mass);
    }
    for (std::size_t i = atoms.size(); i-- > 0;) {
      double term = u[i] >= u_floor ? std::exp(atoms[i].log_mass - u[i]) : 0.0;
      suffix_scaled[i] = suffix_scaled[i + 1] + term;
    }
  }

  double value(double gamma) const {
    const double lg = std::log(gamma);
    if (lg < u_floor)
      throw std::domain_error("ExpectationKernel: gamma below the prepared range");
    auto it = std::lower_bound(u.begin(), u.end(), lg);
    std::size_t i = std::size_t(it - u.begin());
    double s = suffix_scaled[i];
    return prefix_mass[i] + (s > 0.0 ? gamma * s : 0.0);
  }
};

LatticeDistribution bsc_information_density_lattice(std::int64_t n, double delta) {
  // locations n C - (t - n delta) ln((1-delta)/delta)
  const double c = double(n) * bsc_capacity_nats(delta);
  const bool degenerate = !(delta > 0.0 && delta < 1.0);
  const double scale = degenerate ? 0.0 : -std::log((1.0 - delta) / delta);
  return binomial_lattice(n, delta, scale, -double(n) * delta)
      .map_locations([c](double x) { return x + c; });
}

LatticeDistribution bms_log_rho_lattice(std::int64_t k, double p, double d) {
  std::vector<double> lrho = detail::bms_log_rho_table(k, p, d);
  std::vector<LatticeAtom> atoms;
  atoms.reserve(lrho.size());
  for (std::int64_t t = 0; t <= k; ++t) {
    double lm = log_binom_pmf(k, t, p);
    if (lm == -kInf) continue;
    atoms.push_back({lrho[std::size_t(t)], lm});
  }
  return LatticeDistribution(std::move(atoms), 0.0);
}

}  // namespace

BoundResult bmsbsc_jscc_achievability(std::int64_t k, std::int64_t n, double p, double delta,
                                      double d, const GammaGrid& grid, const McOptions& mc) {
  if (k < 1 || n < 1) throw std::domain_error("bmsbsc_jscc_achievability: need k, n >= 1");
  if (!(d >= 0.0 && d < p && p <= 0.5))
    throw std::domain_error("bmsbsc_jscc_achievability: need 0 <= d < p <= 1/2");
  if (!(delta >= 0.0 && delta <= 0.5))
    throw std::domain_error("bmsbsc_jscc_achievability: delta outside [0,1/2]");

  LatticeDistribution ch = bsc_information_density_lattice(n, delta);
  LatticeDistribution src = bms_log_rho_lattice(k, p, d);

  BoundResult r;
  r.method = "bmsbsc-jscc-achievability";
  double extra_budget = 0.0;
  LatticeDistribution u;
  if (double(ch.size()) * double(src.size()) <= mc.exact_pair_limit) {
    u = lattice_convolve(ch, src);
  } else {
    // inverse-cdf sampling from both pruned lattices; bit-exact under seed
    std::mt19937_64 rng(mc.seed);
    auto sampler = [&](const LatticeDistribution& lat) {
      std::vector<double> cdf;
      std::vector<double> loc;
      double acc = 0.0;
      for (const auto& a : lat.atoms()) {
        acc += std::exp(a.log_mass);
        cdf.push_back(acc);
        loc.push_back(a.location);
      }
      return [cdf = std::move(cdf), loc = std::move(loc)](double uu) {
        auto it = std::lower_bound(cdf.begin(), cdf.end(), uu);
        std::size_t i = std::min(std::size_t(it - cdf.begin()), loc.size() - 1);
        return loc[i];
      };
    };
    auto sample_ch = sampler(ch), sample_src = sampler(src);
    std::vector<LatticeAtom> atoms;
    atoms.reserve(std::size_t(mc.samples));
    const double lm = -std::log(double(mc.samples));
    for (std::int64_t i = 0; i < mc.samples; ++i) {
      double u1 = double(rng() >> 11) * 0x1.0p-53;
      double u2 = double(rng() >> 11) * 0x1.0p-53;
      atoms.push_back({sample_ch(u1) + sample_src(u2), lm});
    }
    u = LatticeDistribution(std::move(atoms), 0.0);
    r.mc_seed = mc.seed;
    r.mc_stderr = 0.5 / std::sqrt(double(mc.samples));  // conservative for a [0,1] integrand
    r.method += "+mc";
    extra_budget = r.mc_stderr;
  }
  ExpectationKernel kern(u, grid.lo);
  auto bound = [&](double g) { return kern.value(g) + std::exp(1.0 - g); };
  detail::GammaOpt opt = detail::minimize_over_gamma(bound, grid);
  r.gamma_opt = opt.gamma;
  r.error_budget = ch.truncation_mass() + src.truncation_mass() + extra_budget;
  r.clipped = opt.value > 1.0;
  r.value = std::min(opt.value, 1.0);
  return r;
}

BoundResult gmsawgn_jscc_achievability(std::int64_t k, std::int64_t n, double sigma2, double P,
                                       double d, const GammaGrid& grid) {
  if (k < 2 || n < 1) throw std::domain_error("gmsawgn_jscc_achievability: need k >= 2, n >= 1");
  if (!(sigma2 > 0.0) || !(P > 0.0))
    throw std::domain_error("gmsawgn_jscc_achievability: need sigma2, P > 0");
  const double dn = d / sigma2;
  if (!(dn > 0.0 && dn <= 1.0))
    throw std::domain_error("gmsawgn_jscc_achievability: need 0 < d <= sigma2");

  const double f_sup = detail::awgn_output_density_ratio_sup(P);
  const double c_nats = double(n) * 0.5 * std::log1p(P);
  const double kk = double(k);
  double wlo, whi;
  detail::gms_rho_window(k, dn, &wlo, &whi);
  const double outside = chi2_cdf(wlo, kk) + chi2_sf(whi, kk);

  // quadrature over the cap window clipped to the chi-square bulk; the
  // clipped slivers carry < 2e-15 mass and a kernel bounded by 1
  const double qlo = std::max(wlo, chi2_quantile(1e-15, kk));
  const double qhi = std::min(whi, chi2_quantile(1.0 - 1e-15, kk));
  const int panels = 96;
  std::vector<double> wv, weight, lrho;
  if (qhi > qlo) {
    const double h = (qhi - qlo) / panels;
    for (int i = 0; i < panels; ++i) {
      const double a = qlo + i * h, c = a + 0.5 * h, hh = 0.5 * h;
      for (int j = 0; j < 8; ++j) {
        for (double x : {c - hh * detail::kGl16X[j], c + hh * detail::kGl16X[j]}) {
          wv.push_back(x);
          weight.push_back(hh * detail::kGl16W[j] * std::exp(chi2_logpdf(x, kk)));
          lrho.push_back(detail::gms_log_rho(x, k, dn));
        }
      }
    }
  }
  auto bound = [&](double g) {
    const double base = std::log(g) + std::log(f_sup) - c_nats;
    double acc = outside;
    for (std::size_t i = 0; i < wv.size(); ++i) {
      double ln_c = lrho[i] == -kInf ? kInf : base - lrho[i];
      acc += weight[i] * (ln_c == kInf ? 1.0 : detail::awgn_min1_kernel(ln_c, n, P));
    }
    return acc + std::exp(1.0 - g);
  };
  detail::GammaOpt opt = detail::minimize_over_gamma(bound, grid);
  BoundResult r;
  r.method = "gmsawgn-jscc-achievability";
  r.gamma_opt = opt.gamma;
  r.error_budget = 1e-9;  // quadrature allowance; window edges are exact
  r.clipped = opt.value > 1.0;
  r.value = std::min(opt.value, 1.0);
  return r;
}

// ---- SSCC comparator ----

namespace {

std::vector<double> m_grid_values(double log_m_hi, const MGrid& grid) {
  log_m_hi = std::min(log_m_hi, 700.0);  // stay in double range; beyond is flat anyway
  std::vector<double> ms;
  ms.push_back(1.0);
  for (int i = 1; i < grid.points; ++i) {
    double lm = log_m_hi * double(i) / double(grid.points - 1);
    double m = std::round(std::exp(lm));
    if (m > ms.back()) ms.push_back(m);
  }
  return ms;
}

}  // namespace

BoundResult bmsbsc_sscc_bound(std::int64_t k, std::int64_t n, double p, double delta, double d,
                              const MGrid& grid) {
  if (k < 1 || n < 1) throw std::domain_error("bmsbsc_sscc_bound: need k, n >= 1");
  if (!(d >= 0.0 && d < p && p <= 0.5))
    throw std::domain_error("bmsbsc_sscc_bound: need 0 <= d < p <= 1/2");
  LatticeDistribution ch = bsc_information_density_lattice(n, delta);
  ExpectationKernel kern(ch, 0.5);  // channel term threshold M-1 >= 1 handled below
  std::vector<double> lrho = detail::bms_log_rho_table(k, p, d);
  std::vector<double> lpmf(std::size_t(k) + 1);
  for (std::int64_t t = 0; t <= k; ++t) lpmf[std::size_t(t)] = log_binom_pmf(k, t, p);

  auto eval = [&](double m) {
    double e1 = m <= 1.0 ? 0.0 : kern.value(m - 1.0);
    double e2 = 0.0;
    for (std::int64_t t = 0; t <= k; ++t) {
      if (lpmf[std::size_t(t)] == -kInf) continue;
      double rho = std::exp(lrho[std::size_t(t)]);
      double lterm = rho >= 1.0 ? -kInf : m * std::log1p(-rho);
      e2 += std::exp(lpmf[std::size_t(t)] + lterm);
    }
    return e1 + e2;
  };
  const double log_m_hi = double(n) * bsc_capacity_nats(delta) + grid.log2_hi_margin * kLn2;
  double best_v = kInf, best_m = 1.0;
  std::vector<double> ms = m_grid_values(log_m_hi, grid);
  for (double m : ms) {
    double v = eval(m);
    if (v < best_v) {
      best_v = v;
      best_m = m;
    }
  }
  // local refinement between grid neighbours of the best point
  for (int i = 0; i < grid.local_refine; ++i) {
    double lo = std::max(1.0, best_m / 1.6), hi = best_m * 1.6;
    double m1 = std::round(lo + (hi - lo) * double(i) / double(grid.local_refine - 1));
    double v = eval(m1);
    if (v < best_v) {
      best_v = v;
      best_m = m1;
    }
  }
  BoundResult r;
  r.method = "bmsbsc-sscc";
  r.gamma_opt = best_m;  // the optimized code size
  r.error_budget = ch.truncation_mass();
  r.clipped = best_v > 1.0;
  r.value = std::min(best_v, 1.0);
  return r;
}

BoundResult gmsawgn_sscc_bound(std::int64_t k, std::int64_t n, double sigma2, double P, double d,
                               const MGrid& grid) {
  if (k < 2 || n < 1) throw std::domain_error("gmsawgn_sscc_bound: need k >= 2, n >= 1");
  const double dn = d / sigma2;
  if (!(dn > 0.0 && dn <= 1.0))
    throw std::domain_error("gmsawgn_sscc_bound: need 0 < d <= sigma2");
  const double f_sup = detail::awgn_output_density_ratio_sup(P);
  const double c_nats = double(n) * 0.5 * std::log1p(P);
  const double kk = double(k);
  double wlo, whi;
  detail::gms_rho_window(k, dn, &wlo, &whi);
  const double outside = chi2_cdf(wlo, kk) + chi2_sf(whi, kk);
  const double qlo = std::max(wlo, chi2_quantile(1e-15, kk));
  const double qhi = std::min(whi, chi2_quantile(1.0 - 1e-15, kk));
  const int panels = 96;
  std::vector<double> weight, lrho;
  if (qhi > qlo) {
    const double h = (qhi - qlo) / panels;
    for (int i = 0; i < panels; ++i) {
      const double a = qlo + i * h, c = a + 0.5 * h, hh = 0.5 * h;
      for (int j = 0; j < 8; ++j) {
        for (double x : {c - hh * detail::kGl16X[j], c + hh * detail::kGl16X[j]}) {
          weight.push_back(hh * detail::kGl16W[j] * std::exp(chi2_logpdf(x, kk)));
          lrho.push_back(detail::gms_log_rho(x, k, dn));
        }
      }
    }
  }
  auto eval = [&](double m) {
    double e1 = m <= 1.0 ? 0.0
                         : detail::awgn_min1_kernel(std::log(m - 1.0) + std::log(f_sup) - c_nats,
                                                    n, P);
    double e2 = outside;
    for (std::size_t i = 0; i < weight.size(); ++i) {
      double rho = lrho[i] == -kInf ? 0.0 : std::exp(lrho[i]);
      double lterm = rho >= 1.0 ? -kInf : m * std::log1p(-rho);
      e2 += weight[i] * std::exp(lterm);
    }
    return e1 + e2;
  };
  const double log_m_hi = c_nats + grid.log2_hi_margin * kLn2;
  double best_v = kInf, best_m = 1.0;
  for (double m : m_grid_values(log_m_hi, grid)) {
    double v = eval(m);
    if (v < best_v) {
      best_v = v;
      best_m = m;
    }
  }
  for (int i = 0; i < grid.local_refine; ++i) {
    double lo = std::max(1.0, best_m / 1.6), hi = best_m * 1.6;
    double m1 = std::round(lo + (hi - lo) * double(i) / double(grid.local_refine - 1));
    double v = eval(m1);
    if (v < best_v) {
      best_v = v;
      best_m = m1;
    }
  }
  BoundResult r;
  r.method = "gmsawgn-sscc";
  r.gamma_opt = best_m;
  r.error_budget = 1e-9;
  r.clipped = best_v > 1.0;
  r.value = std::min(best_v, 1.0);
  return r;
}

BoundResult bmsbsc_lossless_achievability(std::int64_t k, std::int64_t n, double p,
                                          double delta) {
  if (k < 1 || n < 1) throw std::domain_error("bmsbsc_lossless_achievability: need k, n >= 1");
  LatticeDistribution u = lattice_convolve(detail::centered_binomial_lattice(k, p),
                                           detail::centered_binomial_lattice(n, delta));
  const double c = double(n) * bsc_capacity_nats(delta) - double(k) * binary_entropy_nats(p);
  // bound = P[U > c] + e^{-c} E[e^U 1{U <= c}], all in log domain
  double tail = 0.0;
  double lse = -kInf;
  for (const auto& a : u.atoms()) {
    if (a.location > c + LatticeDistribution::kMergeTol)
      tail += std::exp(a.log_mass);
    else
      lse = log_sum_exp(lse, a.log_mass + a.location);
  }
  BoundResult r;
  r.method = "bmsbsc-lossless-achievability";
  r.error_budget = u.truncation_mass();
  double v = tail + (lse == -kInf ? 0.0 : std::exp(lse - c));
  r.clipped = v > 1.0;
  r.value = std::min(v, 1.0);
  return r;
}

// ---- generic tiny instances ----

namespace {

std::vector<std::vector<int>> all_tuples(int alphabet, int len) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(len, 0);
  while (true) {
    out.push_back(cur);
    int i = len - 1;
    while (i >= 0 && ++cur[i] == alphabet) cur[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

// reproduction marginal P_Z* for a generic source at distortion d
std::vector<double> reproduction_marginal(const SourceModel& s, double d) {
  const std::size_t nz = s.distortion[0].size();
  if (d <= 0.0) {
    std::vector<double> q(nz, 0.0);
    for (std::size_t x = 0; x < s.pmf.size(); ++x) {
      bool placed = false;
      for (std::size_t z = 0; z < nz; ++z)
        if (s.distortion[x][z] == 0.0) {
          q[z] += s.pmf[x];
          placed = true;
          break;
        }
      if (!placed)
        throw std::domain_error("generic achievability: d = 0 needs zero-distortion letters");
    }
    return q;
  }
  return blahut_arimoto_rate_distortion(s.pmf, s.distortion, d).z_marginal;
}

}  // namespace

BoundResult generic_tiny_achievability(const SourceModel& source, const ChannelModel& channel,
                                       int k, int n, double d, WRule rule, double gamma_or_m,
                                       const McOptions& mc) {
  if (source.kind != SourceKind::GenericFinite || channel.kind != ChannelKind::GenericFinite)
    throw std::domain_error("generic_tiny_achievability: GenericFinite models only");
  const int ns = int(source.pmf.size());
  const int nz = int(source.distortion[0].size());
  const int na = int(channel.transition.size());
  const int nb = int(channel.transition[0].size());
  if (std::pow(double(ns), k) * std::pow(double(nz), k) > 1e6 ||
      std::pow(double(na), n) * std::pow(double(nb), n) > 1e6)
    throw size_guard_error("generic_tiny_achievability: instance beyond the 1e6 tiny guard");
  (void)mc;

  auto cap = blahut_arimoto_capacity(channel.transition);
  std::vector<double> qz = reproduction_marginal(source, d);

  // channel information-density lattice under the capacity product law
  LatticeDistribution ch = LatticeDistribution::point_mass(0.0);
  {
    std::vector<LatticeAtom> atoms;
    for (int a = 0; a < na; ++a)
      for (int b = 0; b < nb; ++b) {
        double w = channel.transition[std::size_t(a)][std::size_t(b)];
        double px = cap.input[std::size_t(a)];
        if (w <= 0.0 || px <= 0.0) continue;
        atoms.push_back({std::log(w / cap.output[std::size_t(b)]), std::log(px * w)});
      }
    LatticeDistribution letter(std::move(atoms), 0.0);
    for (int i = 0; i < n; ++i) ch = lattice_convolve(ch, letter);
  }
  ExpectationKernel kern(ch, 1e-9);

  // rho(s^k) by z-enumeration
  std::vector<std::vector<int>> sblocks = all_tuples(ns, k);
  std::vector<std::vector<int>> zblocks = all_tuples(nz, k);
  std::vector<double> sprob(sblocks.size()), rho(sblocks.size());
  for (std::size_t i = 0; i < sblocks.size(); ++i) {
    double lp = 0.0;
    for (int v : sblocks[i]) lp += std::log(source.pmf[std::size_t(v)]);
    sprob[i] = std::exp(lp);
    double acc = 0.0;
    for (const auto& zb : zblocks) {
      double dist = 0.0, lq = 0.0;
      bool ok = true;
      for (int j = 0; j < k; ++j) {
        dist += source.distortion[std::size_t(sblocks[i][std::size_t(j)])]
                                 [std::size_t(zb[std::size_t(j)])];
        if (qz[std::size_t(zb[std::size_t(j)])] <= 0.0) {
          ok = false;
          break;
        }
        lq += std::log(qz[std::size_t(zb[std::size_t(j)])]);
      }
      if (ok && dist <= double(k) * d + 1e-12) acc += std::exp(lq);
    }
    rho[i] = std::min(acc, 1.0);
  }

  auto eval = [&](double param) {
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t i = 0; i < sblocks.size(); ++i) {
      double w;
      if (rule == WRule::ConstantM)
        w = std::floor(param);
      else
        w = rho[i] > 0.0 ? std::floor(param / rho[i]) : kInf;
      if (w < 1.0) {
        e2 += sprob[i];
        continue;
      }
      if (w == kInf) {
        e1 += sprob[i];
        e2 += sprob[i];  // (1 - 0)^inf
        continue;
      }
      e1 += sprob[i] * kern.value(w);
      e2 += sprob[i] * (rho[i] >= 1.0 ? 0.0 : std::exp(w * std::log1p(-rho[i])));
    }
    return e1 + e2;
  };

  BoundResult r;
  r.method = rule == WRule::ConstantM ? "generic-tiny-achievability-M"
                                      : "generic-tiny-achievability-floor";
  if (gamma_or_m > 0.0) {
    r.gamma_opt = gamma_or_m;
    r.value = eval(gamma_or_m);
  } else {
    GammaGrid grid;
    if (rule == WRule::ConstantM) {
      grid.lo = 1.0;
      grid.hi = std::exp(double(n) * cap.capacity_bits * kLn2 + 16.0);
    }
    detail::GammaOpt opt = detail::minimize_over_gamma(eval, grid);
    r.gamma_opt = opt.gamma;
    r.value = opt.value;
  }
  r.error_budget = ch.truncation_mass();
  r.clipped = r.value > 1.0;
  r.value = std::min(r.value, 1.0);
  return r;
}

}  // namespace jscc
