#include "jscc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "jscc/errors.hpp"
#include "jscc/special.hpp"

namespace jscc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LatticeDistribution::LatticeDistribution(std::vector<LatticeAtom> atoms, double truncation_mass)
    : truncation_mass_(truncation_mass) {
  std::sort(atoms.begin(), atoms.end(),
            [](const LatticeAtom& a, const LatticeAtom& b) { return a.location < b.location; });
  atoms_.reserve(atoms.size());
  for (const LatticeAtom& at : atoms) {
    if (at.log_mass == -kInf) continue;
    if (!atoms_.empty() &&
        (at.location - atoms_.back().location <= kMergeTol ||
         (std::isinf(at.location) && at.location == atoms_.back().location))) {
      atoms_.back().log_mass = log_sum_exp(atoms_.back().log_mass, at.log_mass);
    } else {
      atoms_.push_back(at);
    }
  }
  // prune after merging so clusters of small atoms survive when their merged
  // mass is above threshold
  std::vector<LatticeAtom> kept;
  kept.reserve(atoms_.size());
  for (const LatticeAtom& at : atoms_) {
    if (at.log_mass < kPruneLogMass)
      truncation_mass_ += std::exp(at.log_mass);
    else
      kept.push_back(at);
  }
  atoms_ = std::move(kept);
}

LatticeDistribution LatticeDistribution::point_mass(double location) {
  return LatticeDistribution({{location, 0.0}}, 0.0);
}

double LatticeDistribution::total_mass() const {
  double s = 0.0;
  for (const LatticeAtom& a : atoms_) s += std::exp(a.log_mass);
  return s;
}

double LatticeDistribution::cdf_below(double x) const {
  double s = 0.0;
  for (const LatticeAtom& a : atoms_) {
    if (a.location >= x - kMergeTol) break;
    s += std::exp(a.log_mass);
  }
  return s;
}

double LatticeDistribution::mass_at(double x) const {
  double s = 0.0;
  for (const LatticeAtom& a : atoms_) {
    if (a.location > x + kMergeTol) break;
    if (std::fabs(a.location - x) <= kMergeTol || (std::isinf(x) && a.location == x))
      s += std::exp(a.log_mass);
  }
  return s;
}

double LatticeDistribution::prob_geq(double x) const {
  // accumulate from the top so the small upper-tail masses are not absorbed
  double s = 0.0;
  for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
    if (it->location < x - kMergeTol) break;
    s += std::exp(it->log_mass);
  }
  return s;
}

LatticeDistribution LatticeDistribution::map_locations(
    const std::function<double(double)>& f) const {
  std::vector<LatticeAtom> out;
  out.reserve(atoms_.size());
  for (const LatticeAtom& a : atoms_) out.push_back({f(a.location), a.log_mass});
  return LatticeDistribution(std::move(out), truncation_mass_);
}

LatticeDistribution binomial_lattice(std::int64_t count, double bias, double scale, double shift) {
  if (count < 0) throw std::domain_error("binomial_lattice: count < 0");
  if (!(bias >= 0.0 && bias <= 1.0)) throw std::domain_error("binomial_lattice: bias outside [0,1]");
  std::vector<LatticeAtom> atoms;
  atoms.reserve(std::size_t(count) + 1);
  for (std::int64_t i = 0; i <= count; ++i) {
    double lm = log_binom_pmf(count, i, bias);
    if (lm == -kInf) continue;
    atoms.push_back({scale * (double(i) + shift), lm});
  }
  return LatticeDistribution(std::move(atoms), 0.0);
}

LatticeDistribution lattice_convolve(const LatticeDistribution& a, const LatticeDistribution& b) {
  std::vector<LatticeAtom> out;
  out.reserve(a.size() * b.size());
  for (const LatticeAtom& x : a.atoms())
    for (const LatticeAtom& y : b.atoms())
      out.push_back({x.location + y.location, x.log_mass + y.log_mass});
  return LatticeDistribution(std::move(out), a.truncation_mass() + b.truncation_mass());
}

RandomizedThreshold neyman_pearson_threshold(const LatticeDistribution& dist, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("neyman_pearson_threshold: alpha outside (0,1)");
  double below = 0.0;
  for (const LatticeAtom& a : dist.atoms()) {
    double m = std::exp(a.log_mass);
    if (below + m > alpha) {
      return {a.location, (alpha - below) / m};
    }
    below += m;
  }
  std::ostringstream msg;
  msg << "neyman_pearson_threshold: alpha=" << alpha << " beyond retained mass " << below
      << "; truncation budget " << dist.truncation_mass() << " too large by "
      << (alpha - below);
  throw numeric_error(msg.str(), alpha - below);
}

}  // namespace jscc
