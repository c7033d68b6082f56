#ifndef JSCC_CHI2_HPP
#define JSCC_CHI2_HPP

// Central and noncentral chi-square distributions. The noncentral cdf is the
// Poisson-weighted mixture of central chi-square cdfs, truncated when the
// unaccounted Poisson mass drops below 1e-14; that leftover is a rigorous
// bound on the absolute error. Log variants stay usable far into the tails
// where the linear values underflow.

namespace jscc {

double chi2_cdf(double x, double dof);
double chi2_sf(double x, double dof);
double chi2_logpdf(double x, double dof);
double chi2_quantile(double p, double dof);

// lambda is the noncentrality (sum of squared means); lambda = 0 falls back
// to the central case.
double noncentral_chi2_cdf(double x, double dof, double lambda);
double noncentral_chi2_sf(double x, double dof, double lambda);
double noncentral_chi2_cdf_log(double x, double dof, double lambda);
double noncentral_chi2_logpdf(double x, double dof, double lambda);

// Bracketing + bisection on the cdf; p in (0,1).
double noncentral_chi2_quantile(double p, double dof, double lambda);

}  // namespace jscc

#endif
