#ifndef JSCC_SBS_HPP
#define JSCC_SBS_HPP

#include <cstdint>
#include <string>
#include <vector>

// Symbol-by-symbol (blocklength-1 per symbol) transmission: the exact
// distortion laws of the four probabilistically matched constructions, their
// Gaussian approximation, and the single-letter converse.

namespace jscc {

// Exact minimal distortion of the best symbol-by-symbol scheme for a binary
// source over a BSC (uncoded when p >= delta, decode-to-zero otherwise).
double bms_bsc_D1(std::int64_t n, double p, double delta, double eps);

// Excess-distortion probability of that scheme at threshold d.
double bms_bsc_sbs_excess(std::int64_t n, double p, double delta, double d);

// Exact distortion quantile of the amplifier scheme for a GMS over an AWGN
// channel with average power constraint.
double gms_awgn_D1(std::int64_t n, double sigma2, double P, double eps);

// The four matched pairs exposed by the symbol-by-symbol layer.
struct MatchedPair {
  enum Kind { FairBmsBsc, GmsAwgn, DecErasure, DecLogLoss } kind;
  double delta = 0.11;   // channel parameter
  double sigma2 = 1.0;   // GmsAwgn
  double snr = 1.0;      // GmsAwgn
  int alphabet = 2;      // Dec pairs

  static MatchedPair fair_bms_bsc(double delta);
  static MatchedPair gms_awgn(double sigma2, double snr);
  static MatchedPair dec_erasure(double delta, int alphabet);
  static MatchedPair dec_log_loss(double delta, int alphabet);

  double asymptote() const;  // D(C), the large-n distortion
};

// Var[d(S, Z*)], the symbol-by-symbol distortion dispersion.
double sbs_dispersion(const MatchedPair& pair);

// D(C) + sqrt(W1/n) Qinv(eps).
double sbs_approx(std::int64_t n, double eps, const MatchedPair& pair);

struct SbsConverseResult {
  double eps_lower;    // best found value of the inner minimization
  bool feasible;       // eps >= eps_lower under the heuristic inner solution
  double best_found;   // objective at the returned candidate
  int multistarts;
  std::string method;  // labeled heuristic: the inner problem is nonconvex
};

// Single-letter converse for finite matched pairs: minimizes the excess
// probability over conditional laws P_{Z|S} with I(S;Z) <= C by multistart
// projected gradient descent; any candidate upper-bounds the true infimum.
SbsConverseResult sbs_converse(std::int64_t n, double d, double eps, const MatchedPair& pair,
                               int multistarts = 50, std::uint64_t seed = 7);

}  // namespace jscc

#endif
