#ifndef JSCC_SPECIAL_HPP
#define JSCC_SPECIAL_HPP

#include <cstdint>
#include <span>

// Scalar special functions used throughout: entropies, Gaussian tail,
// log-domain binomials and incomplete gamma. All probabilities that can
// underflow are handled in the natural-log domain; entropies and rates
// are in bits unless the name says otherwise.

namespace jscc {

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

// Binary entropy in bits, h(0) = h(1) = 0. Throws std::domain_error outside [0,1].
double binary_entropy(double p);
// Same in nats.
double binary_entropy_nats(double p);
// Inverse of binary_entropy restricted to [0, 1/2]; h in bits.
double inv_binary_entropy(double h);

// Standard Gaussian complementary cdf and its inverse.
double gaussian_Q(double x);
// Requires eps in (0,1); |Q(Qinv(eps)) - eps| <= 1e-12 over the usable range.
double gaussian_Qinv(double eps);

// log C(n,k); returns -inf for k < 0 or k > n, throws for n < 0.
double lchoose(std::int64_t n, std::int64_t k);

// ln sum_{i=0}^{l} C(k,i); requires 0 <= l <= k.
double log_binomial_sum(std::int64_t k, std::int64_t l);

// ln Binomial(n,p) pmf at t; exact limits for p in {0,1}.
double log_binom_pmf(std::int64_t n, std::int64_t t, double p);

// Numerically careful helpers on log-domain values.
double log_sum_exp(double a, double b);
double log_sum_exp(std::span<const double> v);
// ln(1 - e^x) for x <= 0.
double log1mexp(double x);

// Regularized incomplete gamma P(a,x) (lower) and Q(a,x) (upper), a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);
// ln P(a,x), usable far below double underflow of P itself.
double log_gamma_p(double a, double x);

// Berry-Esseen ratio B_n = c0 * T_n / V_n^{3/2} from per-summand moment lists:
// means are accepted for interface symmetry but only variances and third
// absolute central moments enter. c0 = 0.5600, or 0.4784 when the summands
// are flagged as identically distributed. Throws if the average variance is 0.
double berry_esseen_ratio(std::span<const double> means,
                          std::span<const double> variances,
                          std::span<const double> third_moments,
                          bool identically_distributed = false);

// floor(x) guarded against values like 28.999999999999996 that are meant
// to be integers; used wherever the bounds take floor(k*d).
std::int64_t floor_index(double x);

}  // namespace jscc

#endif
