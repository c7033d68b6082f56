#ifndef JSCC_CONVERSE_HPP
#define JSCC_CONVERSE_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <string>

#include "jscc/models.hpp"

// Lower bounds on the excess-distortion probability (equivalently, upper
// bounds on the achievable source blocklength k). Two families: tilted-
// information converses optimized over a threshold gamma, and binary
// hypothesis-testing converses that refute (k, n, d, eps) tuples outright.

namespace jscc {

struct BoundResult {
  double value = 0.0;
  double gamma_opt = std::numeric_limits<double>::quiet_NaN();
  double error_budget = 0.0;
  std::string method;
  bool clipped = false;      // value was clipped into [0,1]
  std::uint64_t mc_seed = 0;  // nonzero when Monte-Carlo was used
  double mc_stderr = 0.0;
};

// Shared gamma search: log-spaced grid plus golden-section refinement
// around the best grid point.
struct GammaGrid {
  double lo = 1e-4;
  double hi = 50.0;
  int points = 60;
  bool refine = true;
};

struct HtVerdict {
  bool feasible;       // false = (k, n, d, eps) refuted, no such code exists
  double lhs_log;      // ln of the beta side
  double rhs_log;      // ln of the list-size side
  double error_budget;
};

// BMS(p) over BSC(delta), bit error rate distortion.
BoundResult bmsbsc_tilted_converse(std::int64_t k, std::int64_t n, double p, double delta,
                                   double d, const GammaGrid& grid = {});
HtVerdict bmsbsc_ht_converse(std::int64_t k, std::int64_t n, double p, double delta, double d,
                             double eps);
// sup of refuted eps: a lower bound on the optimal excess probability.
double bmsbsc_ht_eps_lower_bound(std::int64_t k, std::int64_t n, double p, double delta,
                                 double d);
// Smallest d (on the j/k grid) not refuted at (k, n, eps).
double bmsbsc_ht_min_distortion(std::int64_t k, std::int64_t n, double p, double delta,
                                double eps);

// Equiprobable BMS over BSC in exact integer/binomial form. Feasibility of
// (k, n, d, eps) and the exact minimal distortion D(n, n, eps).
HtVerdict ebmsbsc_converse(std::int64_t k, std::int64_t n, double delta, double d, double eps);
double ebmsbsc_min_distortion(std::int64_t n, double delta, double eps);

// GMS(sigma2) over AWGN(P) with equal power constraint.
BoundResult gmsawgn_tilted_converse(std::int64_t k, std::int64_t n, double sigma2, double P,
                                    double d, const GammaGrid& grid = {});
HtVerdict gmsawgn_ht_converse(std::int64_t k, std::int64_t n, double sigma2, double P, double d,
                              double eps);
double gmsawgn_ht_min_distortion(std::int64_t k, std::int64_t n, double sigma2, double P,
                                 double eps);

// Exact enumeration of the generic converse on tiny finite instances;
// throws size_guard_error beyond |A|^n * |S|^k <= 10^6.
BoundResult generic_tiny_converse(const SourceModel& source, const ChannelModel& channel,
                                  int k, int n, double d, const GammaGrid& grid = {});

// Largest k in [0, k_guard] not refuted, scanning from `seed` without
// assuming monotonicity: after the best feasible k, `patience` consecutive
// refutations end the scan.
std::int64_t max_k_search(const std::function<bool(std::int64_t)>& refuted, std::int64_t seed,
                          std::int64_t k_guard, int patience = 24);

}  // namespace jscc

#endif
