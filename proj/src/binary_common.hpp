#ifndef JSCC_SRC_BINARY_COMMON_HPP
#define JSCC_SRC_BINARY_COMMON_HPP

#include <cstdint>
#include <vector>

#include "jscc/converse.hpp"
#include "jscc/lattice.hpp"

// Internal helpers shared by the BMS-BSC converse and achievability kernels.

namespace jscc::detail {

// Lattice of scale*(T - count*bias) with T ~ Binomial(count, bias) and
// scale = ln((1-bias)/bias); degenerate biases collapse to a point mass at 0.
LatticeDistribution centered_binomial_lattice(std::int64_t count, double bias);

// Sorted atom view with suffix mass sums for O(log) upper-tail queries.
struct SuffixLattice {
  std::vector<double> loc;
  std::vector<double> suffix;  // suffix[i] = sum of masses at indices >= i
  double truncation;

  explicit SuffixLattice(const LatticeDistribution& lat);
  double prob_geq(double x) const;
};

struct GammaOpt {
  double gamma;
  double value;
};

// Minimizes f over the log-spaced grid, then golden-section around the best
// grid point when grid.refine is set.
GammaOpt minimize_over_gamma(const std::function<double(double)>& f, const GammaGrid& grid);

// t * ln(q) with the 0 * ln(0) := 0 convention.
double log_pow(double q, double t);

// log rho(T) for T = 0..k: the Hamming-ball mass lower bound of the binary
// achievability kernel, with reproduction bias q = (p-d)/(1-2d).
std::vector<double> bms_log_rho_table(std::int64_t k, double p, double d);

}  // namespace jscc::detail

#endif
