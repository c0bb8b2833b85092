#pragma once

// The oscillatory building block: P^{s}(w, k) = int_1^sqrt2 t^{s/2 - 2k}
// phi(t^2) e(alpha X^beta t^{2 beta} + w t) dt with s = +-1, plus the
// phase-slope floor and the derived upper bound used to predict when the
// integral is negligible.

#include <cmath>
#include <complex>
#include <string>

#include "resonator/cutoff.hpp"
#include "resonator/dd.hpp"
#include "resonator/errors.hpp"
#include "resonator/quadrature.hpp"

namespace resonator::osc {

// Phase e(psi(t)) with psi in cycles: psi(t) = alpha X^beta t^{2 beta} + w t.
struct PhaseSpec {
  double alpha = 0.0;
  double beta = 0.5;
  double X = 0.0;
  double w = 0.0;
};

// Minimum over [1, sqrt 2] of |alpha beta X^beta t^{2 beta - 1} + w/2| (half
// of psi' in cycle units). The derivative of that inner expression keeps one
// sign for any beta > 0, so the minimum sits at an endpoint unless the
// expression changes sign across the interval, in which case it is 0 at the
// interior root. No search needed.
inline double phase_floor(const PhaseSpec& s) {
  double lead = s.alpha * s.beta * std::pow(s.X, s.beta);
  auto h = [&](double t) { return lead * std::pow(t, 2.0 * s.beta - 1.0) + 0.5 * s.w; };
  double h1 = h(1.0);
  double h2 = h(std::sqrt(2.0));
  if (h1 == 0.0 || h2 == 0.0 || (h1 < 0.0) != (h2 < 0.0)) return 0.0;
  return std::min(std::abs(h1), std::abs(h2));
}

// Phase floor for the dual-sum term n with w tied to the opposite branch,
// w = -sgn(alpha) 2 sqrt(nX/D). At beta = 1/2, alpha = 2 sqrt(q/D) this is
// |sqrt q - sqrt n| sqrt(X/D) exactly, the quantity separating the resonant
// term n = q from its neighbors.
inline double q_floor(const PhaseSpec& base, long n, long D) {
  if (base.alpha == 0.0) throw DegenerateQ("q_floor needs alpha != 0");
  double sgn = base.alpha > 0.0 ? 1.0 : -1.0;
  double w = -sgn * 2.0 * std::sqrt(static_cast<double>(n) * base.X / static_cast<double>(D));
  PhaseSpec s{base.alpha, base.beta, base.X, w};
  return phase_floor(s);
}

// First-derivative-test bound: |P| <= |alpha| X^beta / Q^3 + 1/Q^2 up to
// phi-dependent constants. Only meaningful off resonance (Q > 0).
inline double p_bound(const PhaseSpec& s, double floor_q) {
  if (!(floor_q > 0.0))
    throw DegenerateQ("phase floor is zero: the stationary point sits inside [1, sqrt 2]");
  double q2 = floor_q * floor_q;
  return std::abs(s.alpha) * std::pow(s.X, s.beta) / (q2 * floor_q) + 1.0 / q2;
}

struct PIntegral {
  std::complex<double> value;
  double err_est = 0.0;
  long panels = 0;
  double floor_q = 0.0;  // phase_floor of the evaluated PhaseSpec, for diagnostics
};

// The phase inside the integrand is evaluated in plain double: any input whose
// phase is large enough for that to matter (~2^26 cycles) needs more panels
// than the budget allows and throws QuadratureNoConvergence first.
inline PIntegral p_integral(const PhaseSpec& s, int sign, int k, const cutoff::CutoffFunction& phi,
                            double tol = 1e-10) {
  if (sign != 1 && sign != -1)
    throw DegenerateQ("p_integral sign must be +1 or -1, got " + std::to_string(sign));
  double e = 0.5 * sign - 2.0 * k;
  double xb = std::pow(s.X, s.beta);
  auto f = [&](double t) -> std::complex<double> {
    double amp = std::pow(t, e) * phi.eval(t * t);
    if (amp == 0.0) return {0.0, 0.0};
    double cycles = s.alpha * xb * std::pow(t, 2.0 * s.beta) + s.w * t;
    return amp * dd::cis_cycles(dd::frac01(cycles));
  };
  constexpr double sqrt2 = 1.41421356237309504880;
  double span_cycles =
      std::abs(s.alpha) * xb * (std::pow(2.0, s.beta) - 1.0) + std::abs(s.w) * (sqrt2 - 1.0);
  long initial = static_cast<long>(std::ceil(span_cycles / 2.0));
  if (initial < 4) initial = 4;
  quad::Integral base = quad::integrate(f, 1.0, sqrt2, tol, initial);
  return {base.value, base.err_est, base.panels, phase_floor(s)};
}

}  // namespace resonator::osc
