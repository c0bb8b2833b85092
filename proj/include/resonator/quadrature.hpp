#pragma once

// Panel quadrature with an embedded 16/8-point Gauss-Legendre pair. Panels are
// uniform across [a, b]; the panel count doubles until the sum of per-panel
// |GL16 - GL8| differences meets an absolute tolerance. Geared to smooth or
// moderately oscillatory integrands whose cost is one exp + one sincos per
// evaluation.

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "resonator/errors.hpp"

namespace resonator::quad {

template <int N>
struct GaussRule {
  std::array<double, N> node;    // interior points of (-1, 1)
  std::array<double, N> weight;  // positive, sums to 2
};

// Newton iteration on the Legendre three-term recurrence. Deterministic and
// accurate to the last bit or two; computed once per rule size.
template <int N>
inline GaussRule<N> make_gauss_rule() {
  GaussRule<N> rule{};
  constexpr double pi = 3.14159265358979323846;
  for (int i = 0; i < N; ++i) {
    double x = std::cos(pi * (i + 0.75) / (N + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 64; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= N; ++j) {
        double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = N * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 4e-16 * std::abs(x) + 1e-300) {
        // one clean pass at the converged node for the weight
        p0 = 1.0;
        p1 = x;
        for (int j = 2; j <= N; ++j) {
          double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    rule.node[i] = x;
    rule.weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

inline const GaussRule<16>& rule16() {
  static const GaussRule<16> r = make_gauss_rule<16>();
  return r;
}

inline const GaussRule<8>& rule8() {
  static const GaussRule<8> r = make_gauss_rule<8>();
  return r;
}

struct Integral {
  std::complex<double> value;
  double err_est = 0.0;  // sum over panels of |GL16 - GL8|
  long panels = 0;
};

inline constexpr long kDefaultMaxPanels = 1L << 21;

// f maps double -> std::complex<double>. tol is absolute. Accumulation is
// Kahan-compensated in fixed panel order, so results are reproducible.
template <class F>
Integral integrate(F&& f, double a, double b, double tol, long initial_panels,
                   long max_panels = kDefaultMaxPanels) {
  const auto& g16 = rule16();
  const auto& g8 = rule8();
  long m = initial_panels < 1 ? 1 : initial_panels;
  if (m > max_panels)
    throw QuadratureNoConvergence("initial panel estimate " + std::to_string(m) +
                                  " already exceeds the panel budget " +
                                  std::to_string(max_panels));
  for (;; m *= 2) {
    std::complex<double> sum = 0.0, comp = 0.0;
    double err = 0.0;
    double h = (b - a) / static_cast<double>(m);
    for (long p = 0; p < m; ++p) {
      double mid = a + (static_cast<double>(p) + 0.5) * h;
      double half = 0.5 * h;
      std::complex<double> s16 = 0.0;
      for (int i = 0; i < 16; ++i) s16 += g16.weight[i] * f(mid + half * g16.node[i]);
      std::complex<double> s8 = 0.0;
      for (int i = 0; i < 8; ++i) s8 += g8.weight[i] * f(mid + half * g8.node[i]);
      s16 *= half;
      s8 *= half;
      err += std::abs(s16 - s8);
      std::complex<double> y = s16 - comp;
      std::complex<double> t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    if (err <= tol) return {sum, err, m};
    if (2 * m > max_panels)
      throw QuadratureNoConvergence("error estimate " + std::to_string(err) +
                                    " still above tol " + std::to_string(tol) + " at " +
                                    std::to_string(m) + " panels");
  }
}

}  // namespace resonator::quad
