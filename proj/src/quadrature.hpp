#ifndef JSCC_SRC_QUADRATURE_HPP
#define JSCC_SRC_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <functional>

// Internal fixed-order Gauss-Legendre panels. The integrands here are smooth
// within a panel (kinks land on panel edges chosen by the callers), so
// composite GL-16 at a few hundred panels reaches ~1e-12 relative accuracy.

namespace jscc::detail {

inline constexpr std::array<double, 8> kGl16X = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> kGl16W = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

template <typename F>
double gl16(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) {
    s += kGl16W[i] * (f(c - h * kGl16X[i]) + f(c + h * kGl16X[i]));
  }
  return s * h;
}

template <typename F>
double integrate_panels(F&& f, double a, double b, int panels) {
  if (!(b > a)) return 0.0;
  double s = 0.0;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) s += gl16(f, a + i * h, a + (i + 1) * h);
  return s;
}

// Golden-section minimization of a unimodal-ish f on [a,b].
template <typename F>
double golden_min(F&& f, double a, double b, int iters = 80) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? x1 : x2;
}

}  // namespace jscc::detail

#endif
