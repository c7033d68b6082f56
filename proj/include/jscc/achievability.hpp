#ifndef JSCC_ACHIEVABILITY_HPP
#define JSCC_ACHIEVABILITY_HPP

#include <cstdint>

#include "jscc/converse.hpp"
#include "jscc/models.hpp"

// Upper bounds on the excess-distortion probability: the random-coding JSCC
// bounds, the separate source/channel comparator, the almost-lossless bound,
// and an exact tiny-instance evaluator of the general random-coding bound.

namespace jscc {

struct McOptions {
  std::int64_t samples = 1000000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  // exact double summation is used whenever the pruned atom-pair count stays
  // under this; Monte-Carlo kicks in beyond it
  double exact_pair_limit = 1e7;
};

BoundResult bmsbsc_jscc_achievability(std::int64_t k, std::int64_t n, double p, double delta,
                                      double d, const GammaGrid& grid = {},
                                      const McOptions& mc = {});

BoundResult gmsawgn_jscc_achievability(std::int64_t k, std::int64_t n, double sigma2, double P,
                                       double d, const GammaGrid& grid = {});

// Integer grid over which the SSCC code size M is optimized.
struct MGrid {
  double log2_hi_margin = 24.0;  // scan up to exp(nC) * 2^margin
  int points = 140;
  int local_refine = 24;
};

// Separate source/channel comparator for the binary system.
BoundResult bmsbsc_sscc_bound(std::int64_t k, std::int64_t n, double p, double delta, double d,
                              const MGrid& grid = {});
// ... and for the Gaussian system.
BoundResult gmsawgn_sscc_bound(std::int64_t k, std::int64_t n, double sigma2, double P, double d,
                               const MGrid& grid = {});

// Almost-lossless (d = 0) bound for the binary system.
BoundResult bmsbsc_lossless_achievability(std::int64_t k, std::int64_t n, double p, double delta);

enum class WRule { ConstantM, FloorGammaOverRho };

// Exact enumeration of the general random-coding bound on tiny finite
// instances, with either W rule. mc.samples is used past the tuple guard.
BoundResult generic_tiny_achievability(const SourceModel& source, const ChannelModel& channel,
                                       int k, int n, double d, WRule rule, double gamma_or_m,
                                       const McOptions& mc = {});

}  // namespace jscc

#endif
