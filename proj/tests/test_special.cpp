#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "jscc/special.hpp"

using namespace jscc;

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  // frozen from a 40-digit evaluation of the defining formula
  CHECK(binary_entropy(0.11) == doctest::Approx(0.4999159581645280).epsilon(1e-13));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
}

TEST_CASE("inverse binary entropy round trip") {
  for (double d : {1e-4, 0.01, 0.11, 0.3, 0.49, 0.5}) {
    CHECK(inv_binary_entropy(binary_entropy(d)) == doctest::Approx(d).epsilon(1e-10));
  }
}

TEST_CASE("gaussian Q and Qinv") {
  CHECK(gaussian_Q(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gaussian_Qinv(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  // frozen from bisection against a high-precision erfc oracle
  CHECK(gaussian_Qinv(0.01) == doctest::Approx(2.3263478740408411).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_Qinv(0.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_Qinv(1.0), std::domain_error);
  // Qinv o Q = identity on [-6, 6] within 1e-9
  for (double x = -6.0; x <= 6.0; x += 0.25) {
    CHECK(gaussian_Qinv(gaussian_Q(x)) == doctest::Approx(x).epsilon(1e-9));
  }
  // Q(Qinv(eps)) = eps within 1e-12
  for (double eps : {1e-6, 1e-3, 0.01, 0.1, 0.5, 0.9, 0.999}) {
    CHECK(gaussian_Q(gaussian_Qinv(eps)) == doctest::Approx(eps).epsilon(1e-12));
  }
}

TEST_CASE("log binomial sum") {
  CHECK(log_binomial_sum(1, 0) == doctest::Approx(std::log(1.0)).epsilon(1e-15));
  CHECK(log_binomial_sum(3, 1) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  // frozen from exact big-integer summation of sum_{i<=110} C(1000,i)
  CHECK(log_binomial_sum(1000, 110) ==
        doctest::Approx(343.43522488120788).epsilon(1e-12));
  CHECK_THROWS_AS(log_binomial_sum(3, 4), std::domain_error);
  CHECK_THROWS_AS(log_binomial_sum(-1, 0), std::domain_error);
}

TEST_CASE("lchoose against exact values") {
  CHECK(lchoose(10, 3) == doctest::Approx(std::log(120.0)).epsilon(1e-13));
  CHECK(lchoose(52, 5) == doctest::Approx(std::log(2598960.0)).epsilon(1e-13));
  CHECK(lchoose(5, 6) == -std::numeric_limits<double>::infinity());
  CHECK(lchoose(5, -1) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("log_sum_exp basics") {
  CHECK(log_sum_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(ninf, 1.0) == 1.0);
  std::vector<double> v{-1000.0, -1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)));
}

TEST_CASE("incomplete gamma sanity") {
  // P(1, x) = 1 - e^{-x}
  for (double x : {0.1, 1.0, 5.0, 30.0}) {
    CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-13));
    CHECK(gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
  }
  // log form stays accurate deep in the lower tail: P(50, 1) ~ 1^{50} e^{-1}/50!
  double lp = log_gamma_p(50.0, 1.0);
  CHECK(lp < -140.0);
  // against the first series term bound: ln(x^a e^-x / Gamma(a+1)) <= lp
  double t0 = 50.0 * std::log(1.0) - 1.0 - std::lgamma(51.0);
  CHECK(lp >= t0);
  CHECK(lp <= t0 + 0.05);
}

TEST_CASE("berry-esseen ratio") {
  // iid symmetric Bernoulli: V = 1/4, T = 1/8 so T/V^{3/2} = 1
  std::vector<double> mu(10, 0.5), va(10, 0.25), th(10, 0.125);
  CHECK(berry_esseen_ratio(mu, va, th, false) == doctest::Approx(0.5600).epsilon(1e-15));
  CHECK(berry_esseen_ratio(mu, va, th, true) == doctest::Approx(0.4784).epsilon(1e-15));
  // single triple: c0 * T / V^{3/2}
  std::vector<double> m1{0.0}, v1{2.0}, t1{1.7};
  CHECK(berry_esseen_ratio(m1, v1, t1) ==
        doctest::Approx(0.5600 * 1.7 / std::pow(2.0, 1.5)).epsilon(1e-15));
  // mixed source+channel moment lists, k = n = 100: direct recomputation
  std::vector<double> mm, vv, tt;
  for (int i = 0; i < 100; ++i) {
    mm.push_back(0.2135);
    vv.push_back(0.4080);
    tt.push_back(0.5113);
  }
  for (int i = 0; i < 100; ++i) {
    mm.push_back(0.5001);
    vv.push_back(0.8974);
    tt.push_back(1.9901);
  }
  double vbar = (0.4080 + 0.8974) / 2.0, tbar = (0.5113 + 1.9901) / 2.0;
  CHECK(berry_esseen_ratio(mm, vv, tt) ==
        doctest::Approx(0.5600 * tbar / std::pow(vbar, 1.5)).epsilon(1e-14));
  std::vector<double> z{0.0}, zv{0.0}, zt{0.0};
  CHECK_THROWS_AS(berry_esseen_ratio(z, zv, zt), std::domain_error);
}

TEST_CASE("floor_index nudges near-integers up") {
  CHECK(floor_index(28.999999999999996) == 29);
  CHECK(floor_index(2.0 * 0.5) == 1);
  CHECK(floor_index(0.9999) == 0);
  CHECK(floor_index(11.000000000000002) == 11);
}
