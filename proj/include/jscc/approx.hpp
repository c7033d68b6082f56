#ifndef JSCC_APPROX_HPP
#define JSCC_APPROX_HPP

#include "jscc/models.hpp"

// Gaussian (dispersion) approximations: the second-order blocklength laws in
// k, rate and distortion form, the separated-coding counterpart, and the
// composite dispersions they are built from. All rates in bits.

namespace jscc {

enum class ThetaPolicy { Zero, HalfLogN, Custom };

struct Theta {
  ThetaPolicy policy = ThetaPolicy::Zero;
  double custom_coefficient = 0.0;  // multiplies ln n under Custom

  double operator()(double n) const;
};

// Solves n C - k R(d) = sqrt(n V + k scriptV(d)) Qinv(eps) + theta(n) for
// real k by bracketed bisection on [0, 2 n C / R(d)]. Throws numeric_error
// when the bracket holds no root (tiny n, extreme eps).
double jscc_approx_k(double n, const Descriptors& desc, double d, double eps,
                     const Theta& theta = {});

// Rate-dispersion of the joint problem: (R(d) V + C scriptV(d)) / R(d)^3.
double rate_dispersion(const Descriptors& desc, double d);

// Distortion-dispersion at rate R = k/n source symbols per channel use:
// (D'(C/R))^2 (V + R scriptV(D(C/R))) / R^2, the variance coefficient that
// makes the distortion law consistent with the k-form law above.
double distortion_dispersion(const Descriptors& desc, double rate);

// Separated-coding counterpart: the largest k with
// n C - k R(d) = min over eta + zeta <= eps of
// sqrt(n V) Qinv(eta) + sqrt(k scriptV(d)) Qinv(zeta), solved by a logit grid
// in eta and fixed-point iteration in k.
double sscc_approx_k(double n, const Descriptors& desc, double d, double eps);

// Distortion form of the second-order law at rate R.
double jscc_approx_D(double n, double rate, const Descriptors& desc, double eps,
                     const Theta& theta = {});

}  // namespace jscc

#endif
