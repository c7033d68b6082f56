#ifndef JSCC_SRC_AWGN_COMMON_HPP
#define JSCC_SRC_AWGN_COMMON_HPP

#include <cstdint>

// Internal helpers shared by the GMS-AWGN converse and achievability kernels.
// Everything is expressed through the chi-square laws of the normalized
// channel output norm: under the true (power-sphere input) law it is
// noncentral chi-square with n dof and noncentrality n*P; under the
// capacity-achieving Gaussian output law it is (1+P) times a central one.

namespace jscc::detail {

// max over y of dP_{Y^n}/dP_{Y^n*}(y), maximized over n in [1, 1e4] once per
// SNR and cached. Includes the (1+P) change-of-variable factor that makes the
// ratio a genuine Radon-Nikodym derivative (it averages to 1 under P_{Y*}).
double awgn_output_density_ratio_sup(double snr);

// ln of the sphere-cap lower bound on P_Z(B_d(s^k)) as a function of
// t = |s^k|^2 / sigma^2 (a chi-square_k realization); dn = d / sigma^2.
double gms_log_rho(double t, std::int64_t k, double dn);

// Support of the cap bound in t = |s|^2/sigma^2: rho > 0 iff t in (lo, hi).
void gms_rho_window(std::int64_t k, double dn, double* lo, double* hi);

// E over W ~ ncx2(n, n/P) of min(1, exp(ln_c) * e^{B(W)}) with
// B(w) = (P/(2(1+P))) * w - n/2, in closed form via the exponential tilt:
//   = exp(ln_c + (n/2) ln(1+P)) * F_{n, n(1+1/P)}(w*/(1+P)) + Q_{n, n/P}(w*)
// where w* solves ln_c + B(w*) = 0. This is the channel-side kernel of every
// AWGN achievability expectation.
double awgn_min1_kernel(double ln_c, std::int64_t n, double snr);

}  // namespace jscc::detail

#endif
