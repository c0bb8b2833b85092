#pragma once

// The smooth cutoff weight and its half-integer moments. Every oscillatory
// integral in the library is taken against phi(t^2) on [1, sqrt 2], so the
// resonant values reduce to the real moments computed here.

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "resonator/quadrature.hpp"

namespace resonator::cutoff {

// phi(x) = exp(1 - 1/(1 - (2x-3)^2)) on (1, 2), zero elsewhere; peak 1 at
// x = 3/2. C-infinity with compact support but not analytic at the edges, so
// integrals against rapidly oscillating phases decay like exp(-c sqrt(phase)),
// not faster; growth classifiers must tolerate that tail.
inline double standard_bump(double x) {
  double u = 2.0 * x - 3.0;
  double om = 1.0 - u * u;
  if (om <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / om);
}

// A weight plus a stable identity string used as the moment-cache key. Custom
// weights must keep support inside (1, 2) and range inside [0, 1].
struct CutoffFunction {
  std::string id;
  std::function<double(double)> eval;
};

inline CutoffFunction standard_cutoff() { return {"standard_bump", &standard_bump}; }

// m^+_k = int_1^sqrt2 t^{ 1/2-2k} phi(t^2) dt   (sign = +1)
// m^-_k = int_1^sqrt2 t^{-1/2-2k} phi(t^2) dt   (sign = -1)
inline double moment(const CutoffFunction& phi, int sign, int k, double tol = 1e-12) {
  double e = 0.5 * sign - 2.0 * k;
  auto f = [&](double t) -> std::complex<double> {
    return std::pow(t, e) * phi.eval(t * t);
  };
  return quad::integrate(f, 1.0, std::sqrt(2.0), tol, 4).value.real();
}

struct MomentSet {
  std::vector<double> plus;   // m^+_k, k = 0 .. k_max-1
  std::vector<double> minus;  // m^-_k
  std::complex<double> c_plus;
  std::complex<double> c_minus;
};

// c_plus multiplies the X^{3/4} resonant main term, c_minus the X^{1/4} one.
// The phases come from the e^{-iz} branch of the Bessel-kernel expansion,
// whose leading coefficient is (1-i): using (i-1) here would break the
// identity S(-alpha) = conj(S(alpha)) for real coefficient tables at main-term
// order. So arg(c_plus) = -pi/4 and arg(c_minus) = -3pi/4.
inline MomentSet compute_moments(const CutoffFunction& phi, int k_max, double tol = 1e-12) {
  MomentSet ms;
  int n = k_max < 1 ? 1 : k_max;
  ms.plus.reserve(n);
  ms.minus.reserve(n);
  for (int k = 0; k < n; ++k) {
    ms.plus.push_back(moment(phi, +1, k, tol));
    ms.minus.push_back(moment(phi, -1, k, tol));
  }
  constexpr double pi = 3.14159265358979323846;
  ms.c_plus = std::complex<double>{1.0, -1.0} * (ms.plus[0] / (2.0 * pi));
  ms.c_minus = std::complex<double>{-1.0, -1.0} * (ms.minus[0] / (8.0 * pi * pi));
  return ms;
}

// Memoized by (weight id, k_max, tol). Returns a stable reference; the cache
// only grows, so references stay valid for the process lifetime.
inline const MomentSet& cached_moments(const CutoffFunction& phi, int k_max, double tol = 1e-12) {
  static std::map<std::tuple<std::string, int, double>, MomentSet> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(phi.id, k_max, tol);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_moments(phi, k_max, tol)).first;
  return it->second;
}

}  // namespace resonator::cutoff
