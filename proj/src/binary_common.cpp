#include "binary_common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "jscc/special.hpp"
#include "quadrature.hpp"

namespace jscc::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LatticeDistribution centered_binomial_lattice(std::int64_t count, double bias) {
  const bool degenerate = !(bias > 0.0 && bias < 1.0);
  const double scale = degenerate ? 0.0 : std::log((1.0 - bias) / bias);
  return binomial_lattice(count, bias, scale, -double(count) * bias);
}

SuffixLattice::SuffixLattice(const LatticeDistribution& lat) : truncation(lat.truncation_mass()) {
  const auto& atoms = lat.atoms();
  loc.resize(atoms.size());
  suffix.assign(atoms.size() + 1, 0.0);
  for (std::size_t i = 0; i < atoms.size(); ++i) loc[i] = atoms[i].location;
  for (std::size_t i = atoms.size(); i-- > 0;)
    suffix[i] = suffix[i + 1] + std::exp(atoms[i].log_mass);
}

double SuffixLattice::prob_geq(double x) const {
  auto it = std::lower_bound(loc.begin(), loc.end(), x - LatticeDistribution::kMergeTol);
  return suffix[std::size_t(it - loc.begin())];
}

GammaOpt minimize_over_gamma(const std::function<double(double)>& f, const GammaGrid& grid) {
  if (grid.points < 2 || !(grid.hi > grid.lo) || !(grid.lo > 0.0))
    throw std::domain_error("minimize_over_gamma: bad grid");
  const double llo = std::log(grid.lo), lhi = std::log(grid.hi);
  double best_g = grid.lo, best_v = kInf;
  int best_i = 0;
  for (int i = 0; i < grid.points; ++i) {
    double g = std::exp(llo + (lhi - llo) * double(i) / double(grid.points - 1));
    double v = f(g);
    if (v < best_v) {
      best_v = v;
      best_g = g;
      best_i = i;
    }
  }
  if (grid.refine) {
    double la = llo + (lhi - llo) * double(std::max(best_i - 1, 0)) / double(grid.points - 1);
    double lb = llo + (lhi - llo) * double(std::min(best_i + 1, grid.points - 1)) /
                          double(grid.points - 1);
    double g = std::exp(golden_min([&](double lg) { return f(std::exp(lg)); }, la, lb));
    double v = f(g);
    if (v < best_v) {
      best_v = v;
      best_g = g;
    }
  }
  return {best_g, best_v};
}

double log_pow(double q, double t) {
  if (t == 0.0) return 0.0;
  if (q <= 0.0) return -kInf;
  return t * std::log(q);
}

std::vector<double> bms_log_rho_table(std::int64_t k, double p, double d) {
  if (!(d >= 0.0 && d < p && p <= 0.5))
    throw std::domain_error("bms_log_rho_table: needs 0 <= d < p <= 1/2");
  const double q = (p - d) / (1.0 - 2.0 * d);
  const double kd = double(k) * d;
  std::vector<double> out(std::size_t(k) + 1, -kInf);
  for (std::int64_t T = 0; T <= k; ++T) {
    double acc = -kInf;
    const std::int64_t tlo = std::max<std::int64_t>(0, std::int64_t(std::ceil(double(T) - kd - 1e-9)));
    const std::int64_t thi = std::min<std::int64_t>(k, floor_index(double(T) + kd));
    for (std::int64_t t = tlo; t <= thi; ++t) {
      // smallest admissible overlap count
      std::int64_t t0 = std::max<std::int64_t>(
          0, std::int64_t(std::ceil(0.5 * (double(t) + double(T) - kd) - 1e-9)));
      double lc = lchoose(T, t0) + lchoose(k - T, t - t0);
      if (lc == -kInf) continue;
      acc = log_sum_exp(acc, lc + log_pow(q, double(t)) + log_pow(1.0 - q, double(k - t)));
    }
    out[std::size_t(T)] = std::min(acc, 0.0);
  }
  return out;
}

}  // namespace jscc::detail
