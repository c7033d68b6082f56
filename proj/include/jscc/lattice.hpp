#ifndef JSCC_LATTICE_HPP
#define JSCC_LATTICE_HPP

#include <cstdint>
#include <functional>
#include <vector>

// Exact discrete distributions with real-valued support ("lattices").
// These carry the U_{alpha,beta} statistics of the binary bounds: each is a
// finite list of (location, log-mass) atoms in strictly increasing location
// order, plus the total mass pruned away. Pruned atoms (mass < 1e-18) are
// accounted in truncation_mass so every downstream bound can report an
// error budget instead of silently losing probability.

namespace jscc {

struct LatticeAtom {
  double location;  // may be -inf (used for log-transformed zero masses)
  double log_mass;
};

class LatticeDistribution {
 public:
  static constexpr double kPruneLogMass = -41.446531673892822312;  // ln 1e-18
  static constexpr double kMergeTol = 1e-12;                       // location units

  LatticeDistribution() = default;
  // Takes unsorted atoms; sorts, merges within kMergeTol, prunes.
  LatticeDistribution(std::vector<LatticeAtom> atoms, double truncation_mass);

  static LatticeDistribution point_mass(double location);

  const std::vector<LatticeAtom>& atoms() const { return atoms_; }
  double truncation_mass() const { return truncation_mass_; }
  std::size_t size() const { return atoms_.size(); }

  // Linear-domain total of the retained atoms.
  double total_mass() const;

  // P[X < x] (strict), P[X = x] (within kMergeTol), P[X >= x] over the atoms.
  double cdf_below(double x) const;
  double mass_at(double x) const;
  double prob_geq(double x) const;

  // New lattice with locations f(location); masses kept, then re-normalized
  // structurally (sorted/merged). f may return -inf.
  LatticeDistribution map_locations(const std::function<double(double)>& f) const;

 private:
  std::vector<LatticeAtom> atoms_;
  double truncation_mass_ = 0.0;
};

// Distribution of scale*(T + shift) with T ~ Binomial(count, bias).
LatticeDistribution binomial_lattice(std::int64_t count, double bias, double scale, double shift);

// Exact convolution of independent lattice variables; truncation masses add.
LatticeDistribution lattice_convolve(const LatticeDistribution& a, const LatticeDistribution& b);

struct RandomizedThreshold {
  double r;       // an atom location
  double lambda;  // in [0,1)
};

// The unique (r, lambda) with P[X < r] + lambda * P[X = r] = alpha.
// Throws numeric_error when alpha is not reachable within the retained mass
// (the message carries the truncation budget that would be required).
RandomizedThreshold neyman_pearson_threshold(const LatticeDistribution& dist, double alpha);

}  // namespace jscc

#endif
