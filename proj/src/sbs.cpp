#include "jscc/sbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "jscc/chi2.hpp"
#include "jscc/lattice.hpp"
#include "jscc/special.hpp"

namespace jscc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double bms_bsc_sbs_excess(std::int64_t n, double p, double delta, double d) {
  if (n < 1) throw std::domain_error("bms_bsc_sbs_excess: n >= 1");
  const double m = std::min(p, delta);
  // distortion count ~ Binomial(n, m); excess iff count > floor(n d)
  const std::int64_t j = floor_index(double(n) * d);
  double cdf = 0.0;
  for (std::int64_t t = 0; t <= std::min(j, n); ++t)
    cdf += std::exp(log_binom_pmf(n, t, m));
  return std::max(0.0, 1.0 - cdf);
}

double bms_bsc_D1(std::int64_t n, double p, double delta, double eps) {
  if (n < 1) throw std::domain_error("bms_bsc_D1: n >= 1");
  if (!(p >= 0.0 && p <= 0.5) || !(delta >= 0.0 && delta <= 0.5))
    throw std::domain_error("bms_bsc_D1: p, delta in [0,1/2]");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("bms_bsc_D1: eps outside (0,1)");
  const double m = std::min(p, delta);
  double cdf = 0.0;
  for (std::int64_t j = 0; j <= n; ++j) {
    cdf += std::exp(log_binom_pmf(n, j, m));
    if (cdf >= 1.0 - eps) return double(j) / double(n);
  }
  return 1.0;
}

double gms_awgn_D1(std::int64_t n, double sigma2, double P, double eps) {
  if (n < 1) throw std::domain_error("gms_awgn_D1: n >= 1");
  if (!(sigma2 > 0.0) || !(P > 0.0)) throw std::domain_error("gms_awgn_D1: sigma2, P > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("gms_awgn_D1: eps outside (0,1)");
  const double dc = sigma2 / (1.0 + P);
  return dc * chi2_quantile(1.0 - eps, double(n)) / double(n);
}

MatchedPair MatchedPair::fair_bms_bsc(double delta) {
  MatchedPair p;
  p.kind = FairBmsBsc;
  p.delta = delta;
  return p;
}
MatchedPair MatchedPair::gms_awgn(double sigma2, double snr) {
  MatchedPair p;
  p.kind = GmsAwgn;
  p.sigma2 = sigma2;
  p.snr = snr;
  return p;
}
MatchedPair MatchedPair::dec_erasure(double delta, int alphabet) {
  MatchedPair p;
  p.kind = DecErasure;
  p.delta = delta;
  p.alphabet = alphabet;
  return p;
}
MatchedPair MatchedPair::dec_log_loss(double delta, int alphabet) {
  MatchedPair p;
  p.kind = DecLogLoss;
  p.delta = delta;
  p.alphabet = alphabet;
  return p;
}

double MatchedPair::asymptote() const {
  switch (kind) {
    case FairBmsBsc:
      return delta;
    case GmsAwgn:
      return sigma2 / (1.0 + snr);
    case DecErasure:
    case DecLogLoss:
      return delta * std::log2(double(alphabet));
  }
  return 0.0;
}

double sbs_dispersion(const MatchedPair& pair) {
  switch (pair.kind) {
    case MatchedPair::FairBmsBsc:
      return pair.delta * (1.0 - pair.delta);
    case MatchedPair::GmsAwgn: {
      double dc = pair.sigma2 / (1.0 + pair.snr);
      return 2.0 * dc * dc;
    }
    case MatchedPair::DecErasure:
    case MatchedPair::DecLogLoss: {
      double lm = std::log2(double(pair.alphabet));
      return pair.delta * (1.0 - pair.delta) * lm * lm;
    }
  }
  return 0.0;
}

double sbs_approx(std::int64_t n, double eps, const MatchedPair& pair) {
  if (n < 1) throw std::domain_error("sbs_approx: n >= 1");
  return pair.asymptote() + std::sqrt(sbs_dispersion(pair) / double(n)) * gaussian_Qinv(eps);
}

// ---- single-letter converse ----

namespace {

// Finite single-letter system: source pmf, per-(s,z) distortion, channel
// capacity ceiling. Candidate = row-stochastic P_{Z|S}.
struct SingleLetterProblem {
  std::vector<double> ps;
  std::vector<std::vector<double>> dist;  // |S| x |Z|
  double capacity_bits;
};

SingleLetterProblem problem_for(const MatchedPair& pair) {
  SingleLetterProblem pr;
  switch (pair.kind) {
    case MatchedPair::FairBmsBsc:
      pr.ps = {0.5, 0.5};
      pr.dist = {{0.0, 1.0}, {1.0, 0.0}};
      pr.capacity_bits = 1.0 - binary_entropy(pair.delta);
      break;
    case MatchedPair::DecErasure: {
      int m = pair.alphabet;
      double h = std::log2(double(m));
      pr.ps.assign(std::size_t(m), 1.0 / double(m));
      pr.dist.assign(std::size_t(m), std::vector<double>(std::size_t(m) + 1, 1e6));
      for (int s = 0; s < m; ++s) {
        pr.dist[std::size_t(s)][std::size_t(s)] = 0.0;
        pr.dist[std::size_t(s)][std::size_t(m)] = h;  // erasure letter
      }
      pr.capacity_bits = (1.0 - pair.delta) * h;
      break;
    }
    default:
      throw std::domain_error("sbs_converse: finite matched pairs only");
  }
  return pr;
}

double log_pow_local(double q, double t) {
  if (t == 0.0) return 0.0;
  if (q <= 0.0) return -kInf;
  return t * std::log(q);
}

// Recursively enumerates count vectors over vals[1..], with the leftover
// count assigned to vals[0] (the smallest value); adds the multinomial
// probability of every vector whose value total stays within budget.
void enumerate_counts(const std::vector<std::pair<double, double>>& vals, double budget,
                      std::size_t idx, double vsum, double lpart, std::int64_t remaining,
                      double* ok) {
  if (vsum > budget + 1e-12) return;
  if (idx == 0) {
    double total = vsum + vals[0].first * double(remaining);
    if (total > budget + 1e-12) return;
    *ok += std::exp(lpart - std::lgamma(double(remaining) + 1.0) +
                    log_pow_local(vals[0].second, double(remaining)));
    return;
  }
  for (std::int64_t c = 0; c <= remaining; ++c) {
    double v = vsum + vals[idx].first * double(c);
    if (v > budget + 1e-12) break;
    enumerate_counts(vals, budget, idx - 1, v,
                     lpart - std::lgamma(double(c) + 1.0) +
                         log_pow_local(vals[idx].second, double(c)),
                     remaining - c, ok);
  }
}

double mutual_information_bits(const std::vector<double>& ps,
                               const std::vector<std::vector<double>>& pzs) {
  const std::size_t nz = pzs[0].size();
  std::vector<double> qz(nz, 0.0);
  for (std::size_t s = 0; s < ps.size(); ++s)
    for (std::size_t z = 0; z < nz; ++z) qz[z] += ps[s] * pzs[s][z];
  double i = 0.0;
  for (std::size_t s = 0; s < ps.size(); ++s)
    for (std::size_t z = 0; z < nz; ++z)
      if (pzs[s][z] > 0.0 && qz[z] > 0.0) i += ps[s] * pzs[s][z] * std::log2(pzs[s][z] / qz[z]);
  return std::max(i, 0.0);
}

// P[sum of n iid per-symbol distortions > n d]. The per-symbol distortion
// takes at most a handful of distinct values, so the sum is a multinomial
// count statistic: any symbol whose distortion alone exceeds n d busts the
// budget outright, and the remaining (at most three) values are enumerated
// over their count vectors.
double excess_probability(const SingleLetterProblem& pr,
                          const std::vector<std::vector<double>>& pzs, std::int64_t n, double d) {
  const double budget = double(n) * d;
  std::vector<std::pair<double, double>> vals;  // (value, prob), merged
  double pbig = 0.0;
  for (std::size_t s = 0; s < pr.ps.size(); ++s)
    for (std::size_t z = 0; z < pr.dist[s].size(); ++z) {
      double m = pr.ps[s] * pzs[s][z];
      if (m <= 0.0) continue;
      double v = pr.dist[s][z];
      if (v > budget + 1e-12) {
        pbig += m;
        continue;
      }
      bool merged = false;
      for (auto& [vv, mm] : vals)
        if (std::fabs(vv - v) <= 1e-12) {
          mm += m;
          merged = true;
          break;
        }
      if (!merged) vals.emplace_back(v, m);
    }
  std::sort(vals.begin(), vals.end());
  // P[no symbol busts the budget and the small values stay within it]
  double ok = 0.0;
  if (vals.size() == 1) {
    ok = vals[0].first * double(n) <= budget + 1e-12 ? std::pow(vals[0].second, double(n)) : 0.0;
  } else if (vals.size() == 2) {
    const auto [v0, p0] = vals[0];
    const auto [v1, p1] = vals[1];
    for (std::int64_t j = 0; j <= n; ++j) {
      if (v1 * double(j) + v0 * double(n - j) > budget + 1e-12) break;
      ok += std::exp(lchoose(n, j) + log_pow_local(p1, double(j)) +
                     log_pow_local(p0, double(n - j)));
    }
  } else if (!vals.empty()) {
    // three or more small values: enumerate count vectors of all but the
    // smallest (alphabets here keep this at O(n^2))
    enumerate_counts(vals, budget, vals.size() - 1, 0.0, std::lgamma(double(n) + 1.0), n, &ok);
  }
  return std::clamp(1.0 - ok, 0.0, 1.0);
}

void project_row_simplex(std::vector<double>& row) {
  // Euclidean projection onto the probability simplex
  std::vector<double> u = row;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    double t = (css - 1.0) / double(i + 1);
    if (u[i] - t > 0.0) {
      rho = int(i + 1);
      theta = t;
    }
  }
  (void)rho;
  for (double& x : row) x = std::max(x - theta, 0.0);
  double s = 0.0;
  for (double x : row) s += x;
  for (double& x : row) x /= s;
}

// Blend toward the independent law until the mutual-information ceiling holds.
void enforce_capacity(const SingleLetterProblem& pr, std::vector<std::vector<double>>& pzs) {
  if (mutual_information_bits(pr.ps, pzs) <= pr.capacity_bits) return;
  const std::size_t nz = pzs[0].size();
  std::vector<double> qz(nz, 0.0);
  for (std::size_t s = 0; s < pr.ps.size(); ++s)
    for (std::size_t z = 0; z < nz; ++z) qz[z] += pr.ps[s] * pzs[s][z];
  double lo = 0.0, hi = 1.0;  // hi = fully independent
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    auto cand = pzs;
    for (std::size_t s = 0; s < cand.size(); ++s)
      for (std::size_t z = 0; z < nz; ++z) cand[s][z] = (1.0 - mid) * pzs[s][z] + mid * qz[z];
    (mutual_information_bits(pr.ps, cand) > pr.capacity_bits ? lo : hi) = mid;
  }
  for (std::size_t s = 0; s < pzs.size(); ++s)
    for (std::size_t z = 0; z < nz; ++z) pzs[s][z] = (1.0 - hi) * pzs[s][z] + hi * qz[z];
}

}  // namespace

SbsConverseResult sbs_converse(std::int64_t n, double d, double eps, const MatchedPair& pair,
                               int multistarts, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("sbs_converse: n >= 1");
  SingleLetterProblem pr = problem_for(pair);
  const std::size_t ns = pr.ps.size(), nz = pr.dist[0].size();
  std::mt19937_64 rng(seed);
  auto uniform = [&]() { return double(rng() >> 11) * 0x1.0p-53; };

  auto objective = [&](std::vector<std::vector<double>> pzs) {
    enforce_capacity(pr, pzs);
    return excess_probability(pr, pzs, n, d);
  };

  double best = kInf;
  // the matched construction is always one of the candidates
  {
    std::vector<std::vector<double>> matched(ns, std::vector<double>(nz, 0.0));
    if (pair.kind == MatchedPair::FairBmsBsc) {
      for (std::size_t s = 0; s < ns; ++s) {
        matched[s][s] = 1.0 - pair.delta;
        matched[s][1 - s] = pair.delta;
      }
    } else {
      for (std::size_t s = 0; s < ns; ++s) {
        matched[s][s] = 1.0 - pair.delta;
        matched[s][nz - 1] = pair.delta;
      }
    }
    best = std::min(best, objective(matched));
  }
  for (int start = 0; start < multistarts; ++start) {
    std::vector<std::vector<double>> pzs(ns, std::vector<double>(nz, 0.0));
    for (std::size_t s = 0; s < ns; ++s) {
      double acc = 0.0;
      for (std::size_t z = 0; z < nz; ++z) {
        pzs[s][z] = -std::log(std::max(uniform(), 1e-300));
        acc += pzs[s][z];
      }
      for (std::size_t z = 0; z < nz; ++z) pzs[s][z] /= acc;
    }
    double cur = objective(pzs);
    // projected finite-difference descent
    double step = 0.25;
    for (int it = 0; it < 120 && step > 1e-6; ++it) {
      std::vector<std::vector<double>> grad(ns, std::vector<double>(nz, 0.0));
      const double h = 1e-4;
      for (std::size_t s = 0; s < ns; ++s)
        for (std::size_t z = 0; z < nz; ++z) {
          auto probe = pzs;
          probe[s][z] += h;
          project_row_simplex(probe[s]);
          grad[s][z] = (objective(probe) - cur) / h;
        }
      auto cand = pzs;
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t z = 0; z < nz; ++z) cand[s][z] -= step * grad[s][z];
        project_row_simplex(cand[s]);
      }
      double v = objective(cand);
      if (v < cur - 1e-15) {
        pzs = cand;
        cur = v;
      } else {
        step *= 0.5;
      }
    }
    best = std::min(best, cur);
  }
  SbsConverseResult r;
  r.eps_lower = best;
  r.best_found = best;
  r.feasible = eps >= best - 1e-12;
  r.multistarts = multistarts;
  r.method = "sbs-converse-heuristic";
  return r;
}

}  // namespace jscc
