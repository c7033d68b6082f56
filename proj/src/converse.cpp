#include "jscc/converse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
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
// feasibility comparisons in log domain allow this much slack; ambiguous
// calls are resolved as feasible (the conservative direction for a converse)
constexpr double kLogSlack = 1e-11;

void check_bms_bsc(std::int64_t k, std::int64_t n, double p, double delta, double d) {
  if (k < 0 || n < 1) throw std::domain_error("bms-bsc: need k >= 0, n >= 1");
  if (!(p >= 0.0 && p <= 0.5)) throw std::domain_error("bms-bsc: p outside [0, 1/2]");
  if (!(delta >= 0.0 && delta <= 0.5)) throw std::domain_error("bms-bsc: delta outside [0, 1/2]");
  if (!(d >= 0.0 && d <= 1.0)) throw std::domain_error("bms-bsc: d outside [0, 1]");
}

double bsc_capacity_nats(double delta) { return kLn2 - binary_entropy_nats(delta); }

double bms_rate_nats(double p, double d) {
  return d >= p ? 0.0 : binary_entropy_nats(p) - binary_entropy_nats(d);
}

}  // namespace

BoundResult bmsbsc_tilted_converse(std::int64_t k, std::int64_t n, double p, double delta,
                                   double d, const GammaGrid& grid) {
  check_bms_bsc(k, n, p, delta, d);
  LatticeDistribution u = lattice_convolve(detail::centered_binomial_lattice(k, p),
                                           detail::centered_binomial_lattice(n, delta));
  detail::SuffixLattice sl(u);
  const double thr0 = double(n) * bsc_capacity_nats(delta) - double(k) * bms_rate_nats(p, d);
  auto neg_lb = [&](double g) { return -(sl.prob_geq(thr0 + g) - std::exp(-g)); };
  detail::GammaOpt opt = detail::minimize_over_gamma(neg_lb, grid);
  BoundResult r;
  r.method = "bmsbsc-tilted-converse";
  r.gamma_opt = opt.gamma;
  r.error_budget = u.truncation_mass();
  double raw = -opt.value;
  r.clipped = raw < 0.0;
  r.value = std::clamp(raw, 0.0, 1.0);
  return r;
}

namespace {

// Fair-measure side of the binary hypothesis-testing converse. Locations use
// the true-law centering (i - k p) ln((1-p)/p): only the masses switch to
// fair coins. Kept unpruned in log domain; the deep tail is the whole point.
struct FairPairEvaluator {
  std::vector<double> src_loc, src_lmass;        // i = 0..k
  std::vector<double> ch_loc, ch_prefix_lcdf;    // strictly increasing, prefix strict-below
  std::vector<double> ch_lmass;
  double tol = LatticeDistribution::kMergeTol;

  FairPairEvaluator(std::int64_t k, std::int64_t n, double p, double delta) {
    const double sp = (p > 0.0 && p < 1.0) ? std::log((1.0 - p) / p) : 0.0;
    const double sd = (delta > 0.0 && delta < 1.0) ? std::log((1.0 - delta) / delta) : 0.0;
    src_loc.resize(std::size_t(k) + 1);
    src_lmass.resize(std::size_t(k) + 1);
    for (std::int64_t i = 0; i <= k; ++i) {
      src_loc[std::size_t(i)] = sp * (double(i) - double(k) * p);
      src_lmass[std::size_t(i)] = lchoose(k, i) - double(k) * kLn2;
    }
    // merge equal channel locations (sd == 0 collapses everything)
    std::vector<std::pair<double, double>> raw;
    for (std::int64_t j = 0; j <= n; ++j)
      raw.emplace_back(sd * (double(j) - double(n) * delta), lchoose(n, j) - double(n) * kLn2);
    std::sort(raw.begin(), raw.end());
    for (auto& [l, m] : raw) {
      if (!ch_loc.empty() && l - ch_loc.back() <= tol)
        ch_lmass.back() = log_sum_exp(ch_lmass.back(), m);
      else {
        ch_loc.push_back(l);
        ch_lmass.push_back(m);
      }
    }
    ch_prefix_lcdf.assign(ch_loc.size() + 1, -kInf);
    for (std::size_t j = 0; j < ch_loc.size(); ++j)
      ch_prefix_lcdf[j + 1] = log_sum_exp(ch_prefix_lcdf[j], ch_lmass[j]);
  }

  // ln P[U_fair < r] and ln P[U_fair = r]
  void evaluate(double r, double* l_below, double* l_eq) const {
    std::vector<double> below, eq;
    below.reserve(src_loc.size());
    for (std::size_t i = 0; i < src_loc.size(); ++i) {
      const double x = r - src_loc[i];
      auto it = std::lower_bound(ch_loc.begin(), ch_loc.end(), x - tol);
      std::size_t idx = std::size_t(it - ch_loc.begin());
      if (ch_prefix_lcdf[idx] != -kInf) below.push_back(src_lmass[i] + ch_prefix_lcdf[idx]);
      double leq = -kInf;
      for (std::size_t j = idx; j < ch_loc.size() && ch_loc[j] <= x + tol; ++j)
        leq = log_sum_exp(leq, ch_lmass[j]);
      if (leq != -kInf) eq.push_back(src_lmass[i] + leq);
    }
    *l_below = log_sum_exp(below);
    *l_eq = log_sum_exp(eq);
  }
};

}  // namespace

HtVerdict bmsbsc_ht_converse(std::int64_t k, std::int64_t n, double p, double delta, double d,
                             double eps) {
  check_bms_bsc(k, n, p, delta, d);
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("bmsbsc_ht_converse: eps outside (0,1)");
  if (!(p > 0.0) || !(delta > 0.0))
    throw std::domain_error("bmsbsc_ht_converse: degenerate p or delta; use the exact converse");
  LatticeDistribution u = lattice_convolve(detail::centered_binomial_lattice(k, p),
                                           detail::centered_binomial_lattice(n, delta));
  RandomizedThreshold th = neyman_pearson_threshold(u, 1.0 - eps);
  FairPairEvaluator fair(k, n, p, delta);
  double l_below, l_eq;
  fair.evaluate(th.r, &l_below, &l_eq);
  double lhs = l_below;
  if (th.lambda > 0.0) lhs = log_sum_exp(lhs, std::log(th.lambda) + l_eq);
  HtVerdict v;
  v.lhs_log = lhs;
  v.rhs_log = log_binomial_sum(k, floor_index(double(k) * d)) - double(k) * kLn2;
  v.error_budget = u.truncation_mass();
  v.feasible = lhs <= v.rhs_log + kLogSlack;
  return v;
}

double bmsbsc_ht_eps_lower_bound(std::int64_t k, std::int64_t n, double p, double delta,
                                 double d) {
  double lo = 1e-12, hi = 1.0 - 1e-12;
  if (bmsbsc_ht_converse(k, n, p, delta, d, lo).feasible) return 0.0;
  if (!bmsbsc_ht_converse(k, n, p, delta, d, hi).feasible) return hi;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (bmsbsc_ht_converse(k, n, p, delta, d, mid).feasible ? hi : lo) = mid;
  }
  return lo;  // every eps below this is refuted
}

double bmsbsc_ht_min_distortion(std::int64_t k, std::int64_t n, double p, double delta,
                                double eps) {
  // the beta side does not depend on d; only the list size does
  LatticeDistribution u = lattice_convolve(detail::centered_binomial_lattice(k, p),
                                           detail::centered_binomial_lattice(n, delta));
  RandomizedThreshold th = neyman_pearson_threshold(u, 1.0 - eps);
  FairPairEvaluator fair(k, n, p, delta);
  double l_below, l_eq;
  fair.evaluate(th.r, &l_below, &l_eq);
  double lhs = l_below;
  if (th.lambda > 0.0) lhs = log_sum_exp(lhs, std::log(th.lambda) + l_eq);
  for (std::int64_t j = 0; j <= k; ++j) {
    double rhs = log_binomial_sum(k, j) - double(k) * kLn2;
    if (lhs <= rhs + kLogSlack) return double(j) / double(k);
  }
  return 1.0;
}

HtVerdict ebmsbsc_converse(std::int64_t k, std::int64_t n, double delta, double d, double eps) {
  if (k < 1 || n < 1) throw std::domain_error("ebmsbsc: need k, n >= 1");
  if (!(delta >= 0.0 && delta <= 0.5)) throw std::domain_error("ebmsbsc: delta outside [0,1/2]");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("ebmsbsc: eps outside (0,1)");
  // r* = max{r : P[T_delta^n <= r] <= 1-eps}, possibly -1; lambda fills the gap
  std::vector<double> pmf(std::size_t(n) + 1);
  for (std::int64_t t = 0; t <= n; ++t) pmf[std::size_t(t)] = std::exp(log_binom_pmf(n, t, delta));
  std::int64_t rstar = -1;
  double cdf = 0.0;
  while (rstar + 1 <= n && cdf + pmf[std::size_t(rstar + 1)] <= 1.0 - eps) {
    ++rstar;
    cdf += pmf[std::size_t(rstar)];
  }
  double lambda = 0.0;
  if (rstar + 1 <= n && pmf[std::size_t(rstar + 1)] > 0.0)
    lambda = (1.0 - eps - cdf) / pmf[std::size_t(rstar + 1)];
  // lhs = lambda * C(n, r*+1) + binosum(n, r*)
  double lhs = -kInf;
  if (rstar >= 0) lhs = log_binomial_sum(n, rstar);
  if (lambda > 0.0 && rstar + 1 <= n)
    lhs = log_sum_exp(lhs, std::log(lambda) + lchoose(n, rstar + 1));
  HtVerdict v;
  v.lhs_log = lhs;
  v.rhs_log = log_binomial_sum(k, floor_index(double(k) * d)) + double(n - k) * kLn2;
  v.error_budget = 0.0;
  v.feasible = lhs <= v.rhs_log + kLogSlack;
  return v;
}

double ebmsbsc_min_distortion(std::int64_t n, double delta, double eps) {
  for (std::int64_t j = 0; j <= n; ++j) {
    if (ebmsbsc_converse(n, n, delta, double(j) / double(n), eps).feasible)
      return double(j) / double(n);
  }
  return 1.0;
}

// ---- GMS over AWGN ----

namespace {

void check_gms_awgn(std::int64_t k, std::int64_t n, double sigma2, double P, double d) {
  if (k < 0 || n < 1) throw std::domain_error("gms-awgn: need k >= 0, n >= 1");
  if (!(sigma2 > 0.0) || !(P > 0.0)) throw std::domain_error("gms-awgn: need sigma2, P > 0");
  if (!(d > 0.0 && d <= sigma2)) throw std::domain_error("gms-awgn: need 0 < d <= sigma2");
}

// Fixed chi-square_k quadrature nodes (weights fold in the pdf); the 1e-14
// tail masses on either side go into the error budget.
struct ChiSqNodes {
  std::vector<double> w, weight;
  double tail_mass;

  ChiSqNodes(std::int64_t k, int panels) {
    const double kk = double(k);
    double lo = k > 0 ? chi2_quantile(1e-14, kk) : 0.0;
    double hi = chi2_quantile(1.0 - 1e-14, kk);
    tail_mass = 2e-14;
    const double h = (hi - lo) / panels;
    for (int i = 0; i < panels; ++i) {
      const double a = lo + i * h, c = a + 0.5 * h, hh = 0.5 * h;
      for (int j = 0; j < 8; ++j) {
        for (double x : {c - hh * detail::kGl16X[j], c + hh * detail::kGl16X[j]}) {
          w.push_back(x);
          weight.push_back(hh * detail::kGl16W[j] * std::exp(chi2_logpdf(x, kk)));
        }
      }
    }
  }
};

}  // namespace

BoundResult gmsawgn_tilted_converse(std::int64_t k, std::int64_t n, double sigma2, double P,
                                    double d, const GammaGrid& grid) {
  check_gms_awgn(k, n, sigma2, P, d);
  const double c_nats = 0.5 * std::log1p(P);
  const double r_nats = 0.5 * std::log(sigma2 / d);
  const double thr0 = double(n) * c_nats - double(k) * r_nats;
  const double nn = double(n), lam = nn / P;
  auto prob_geq = [&](double u) {
    auto channel_sf = [&](double w) {
      double arg = (1.0 + P) / P * (2.0 * u + nn + double(k) - w);
      return arg <= 0.0 ? 1.0 : noncentral_chi2_sf(arg, nn, lam);
    };
    if (k == 0) return channel_sf(0.0);
    static thread_local std::map<std::int64_t, ChiSqNodes> cache;
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, ChiSqNodes(k, 48)).first;
    const ChiSqNodes& nodes = it->second;
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.w.size(); ++i)
      acc += nodes.weight[i] * channel_sf(nodes.w[i]);
    return acc;
  };
  auto neg_lb = [&](double g) { return -(prob_geq(thr0 + g) - std::exp(-g)); };
  detail::GammaOpt opt = detail::minimize_over_gamma(neg_lb, grid);
  BoundResult r;
  r.method = "gmsawgn-tilted-converse";
  r.gamma_opt = opt.gamma;
  r.error_budget = 3e-14 + 1e-10;  // chi-square tails + quadrature allowance
  double raw = -opt.value;
  r.clipped = raw < 0.0;
  r.value = std::clamp(raw, 0.0, 1.0);
  return r;
}

namespace {

// Solves P[(P/(1+P)) W_{n/P}^n + W_0^k <= n tau] = 1 - eps for tau.
double gmsawgn_ht_tau(std::int64_t k, std::int64_t n, double P, double eps) {
  const double nn = double(n), lam = nn / P;
  ChiSqNodes nodes(k, 48);
  auto cdf = [&](double tau) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.w.size(); ++i) {
      double arg = (nn * tau - nodes.w[i]) * (1.0 + P) / P;
      if (arg > 0.0) acc += nodes.weight[i] * noncentral_chi2_cdf(arg, nn, lam);
    }
    return acc;
  };
  double hi = (nn + nn / P) * P / (1.0 + P) / nn + double(k) / nn + 1.0;  // past the mean
  while (cdf(hi) < 1.0 - eps) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (cdf(mid) < 1.0 - eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ln of k * int_0^rmax r^{k-1} F(...) dr via a Laplace-style window around the
// integrand peak; the integrand vanishes at rmax and explodes nowhere.
double gmsawgn_ht_log_integral(std::int64_t k, std::int64_t n, double P, double dn, double tau) {
  const double nn = double(n), kk = double(k);
  const double lam = nn * (1.0 + 1.0 / P);
  const double rmax = std::sqrt(nn * tau / (kk * dn));
  auto logf = [&](double r) {
    if (r <= 0.0 || r >= rmax) return -kInf;
    double arg = (nn * tau - kk * dn * r * r) / P;
    return std::log(kk) + (kk - 1.0) * std::log(r) + noncentral_chi2_cdf_log(arg, nn, lam);
  };
  // locate the peak: coarse scan first (the sum of an increasing power term
  // and a decreasing cdf term is not guaranteed unimodal), then golden
  double rpk = rmax * 0.5, best = -kInf;
  for (int i = 1; i <= 128; ++i) {
    double r = rmax * double(i) / 129.0;
    double v = logf(r);
    if (v > best) {
      best = v;
      rpk = r;
    }
  }
  double rg = detail::golden_min([&](double r) { return -logf(r); },
                                 std::max(rmax * 1e-9, rpk - rmax / 64.0),
                                 std::min(rmax * (1.0 - 1e-12), rpk + rmax / 64.0));
  if (logf(rg) > best) {
    best = logf(rg);
    rpk = rg;
  }
  const double m = best;
  if (m == -kInf) return -kInf;
  // integration window where the integrand is within e^-45 of the peak
  double lo = rmax * 1e-9, hi = rmax * (1.0 - 1e-12);
  {
    double a = lo, b = rpk;
    for (int i = 0; i < 100; ++i) {
      double mid = 0.5 * (a + b);
      (logf(mid) < m - 45.0 ? a : b) = mid;
    }
    lo = a;
    a = rpk, b = hi;
    for (int i = 0; i < 100; ++i) {
      double mid = 0.5 * (a + b);
      (logf(mid) < m - 45.0 ? b : a) = mid;
    }
    hi = b;
  }
  double integral = detail::integrate_panels([&](double r) { return std::exp(logf(r) - m); }, lo,
                                             hi, 96);
  return m + std::log(std::max(integral, 1e-300));
}

}  // namespace

HtVerdict gmsawgn_ht_converse(std::int64_t k, std::int64_t n, double sigma2, double P, double d,
                              double eps) {
  check_gms_awgn(k, n, sigma2, P, d);
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("gmsawgn_ht_converse: eps outside (0,1)");
  if (k < 1) throw std::domain_error("gmsawgn_ht_converse: k >= 1");
  const double tau = gmsawgn_ht_tau(k, n, P, eps);
  HtVerdict v;
  v.lhs_log = gmsawgn_ht_log_integral(k, n, P, d / sigma2, tau);
  v.rhs_log = 0.0;
  v.error_budget = 1e-9;
  v.feasible = v.lhs_log <= v.rhs_log + 1e-9;
  return v;
}

double gmsawgn_ht_min_distortion(std::int64_t k, std::int64_t n, double sigma2, double P,
                                 double eps) {
  const double tau = gmsawgn_ht_tau(k, n, P, eps);
  auto feasible = [&](double d) {
    return gmsawgn_ht_log_integral(k, n, P, d / sigma2, tau) <= 1e-9;
  };
  double hi = sigma2;
  while (!feasible(hi)) hi *= 2.0;
  double lo = sigma2 * 1e-12;
  if (feasible(lo)) return lo;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

// ---- generic tiny instances ----

namespace {

struct TinyEnumeration {
  std::vector<std::vector<int>> blocks;  // all tuples over an alphabet
};

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

// multiset key of a tuple, for collapsing x^n by composition
std::vector<int> composition_of(const std::vector<int>& x, int alphabet) {
  std::vector<int> c(alphabet, 0);
  for (int v : x) ++c[v];
  return c;
}

}  // namespace

BoundResult generic_tiny_converse(const SourceModel& source, const ChannelModel& channel, int k,
                                  int n, double d, const GammaGrid& grid) {
  if (source.kind != SourceKind::GenericFinite || channel.kind != ChannelKind::GenericFinite)
    throw std::domain_error("generic_tiny_converse: GenericFinite models only");
  const int ns = int(source.pmf.size());
  const int na = int(channel.transition.size());
  const int nb = int(channel.transition[0].size());
  double work = std::pow(double(na), n) * std::pow(double(ns), k);
  if (work > 1e6 || std::pow(double(nb), n) > 1e6)
    throw size_guard_error("generic_tiny_converse: instance beyond the 1e6 tiny guard");

  auto cap = blahut_arimoto_capacity(channel.transition);
  // per-letter tilted information (nats)
  std::vector<double> j1(std::size_t(ns));
  for (int s = 0; s < ns; ++s) j1[std::size_t(s)] = tilted_information_symbol(source, d, s) * kLn2;
  // per-letter information density lattice per input letter
  std::vector<LatticeDistribution> iden(std::size_t(na));
  for (int a = 0; a < na; ++a) {
    std::vector<LatticeAtom> atoms;
    for (int b = 0; b < nb; ++b) {
      double w = channel.transition[std::size_t(a)][std::size_t(b)];
      if (w <= 0.0) continue;
      atoms.push_back({std::log(w / cap.output[std::size_t(b)]), std::log(w)});
    }
    iden[std::size_t(a)] = LatticeDistribution(std::move(atoms), 0.0);
  }
  // one channel lattice per input composition
  std::vector<std::vector<int>> xs = all_tuples(na, n);
  std::map<std::vector<int>, LatticeDistribution> comp_lat;
  for (const auto& x : xs) {
    auto key = composition_of(x, na);
    if (comp_lat.count(key)) continue;
    LatticeDistribution lat = LatticeDistribution::point_mass(0.0);
    for (int v : x) lat = lattice_convolve(lat, iden[std::size_t(v)]);
    comp_lat.emplace(std::move(key), std::move(lat));
  }
  // source blocks: probability and block tilted information
  std::vector<std::vector<int>> ss = all_tuples(ns, k);
  std::vector<double> sblock_p(ss.size()), sblock_j(ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    double lp = 0.0, j = 0.0;
    for (int v : ss[i]) {
      lp += std::log(source.pmf[std::size_t(v)]);
      j += j1[std::size_t(v)];
    }
    sblock_p[i] = std::exp(lp);
    sblock_j[i] = j;
  }
  auto neg_lb = [&](double g) {
    double acc = 0.0;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      // inf over channel input blocks of P[i(x;Y) <= j(s) - gamma]
      double best = 1.0;
      const double thr = sblock_j[i] - g;
      for (const auto& [key, lat] : comp_lat) {
        double pr = lat.cdf_below(thr) + lat.mass_at(thr);
        best = std::min(best, pr);
        if (best == 0.0) break;
      }
      acc += sblock_p[i] * best;
    }
    return -(acc - std::exp(-g));
  };
  detail::GammaOpt opt = detail::minimize_over_gamma(neg_lb, grid);
  BoundResult r;
  r.method = "generic-tiny-converse";
  r.gamma_opt = opt.gamma;
  r.error_budget = 0.0;
  double raw = -opt.value;
  r.clipped = raw < 0.0;
  r.value = std::clamp(raw, 0.0, 1.0);
  return r;
}

std::int64_t max_k_search(const std::function<bool(std::int64_t)>& refuted, std::int64_t seed,
                          std::int64_t k_guard, int patience) {
  seed = std::clamp<std::int64_t>(seed, 1, k_guard);
  std::int64_t k = seed;
  while (k >= 1 && refuted(k)) --k;
  std::int64_t best = k;  // 0 when everything below the seed is refuted
  int misses = 0;
  for (std::int64_t j = k + 1; j <= k_guard && misses < patience; ++j) {
    if (!refuted(j)) {
      best = j;
      misses = 0;
    } else {
      ++misses;
    }
  }
  return best;
}

}  // namespace jscc
