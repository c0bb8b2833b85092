#pragma once

// The direct side: S(alpha, beta, X) = sum over X < n < 2X of
// lambda(n) phi(n/X) e(alpha n^beta), plus curve evaluation over an X grid.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "resonator/cutoff.hpp"
#include "resonator/dd.hpp"
#include "resonator/errors.hpp"
#include "resonator/ingest.hpp"
#include "resonator/parallel.hpp"

namespace resonator::resonance {

// Kahan-compensated, ascending n, so the result is independent of thread
// count and reproducible bit for bit.
inline std::complex<double> resonance_sum(const ingest::FourierCoefficientTable& table,
                                          const cutoff::CutoffFunction& phi, double alpha,
                                          double beta, double X) {
  if (!(X > 0.0)) throw std::invalid_argument("resonance_sum: X must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("resonance_sum: beta must be positive");
  long lo = static_cast<long>(std::floor(X)) + 1;       // X < n
  long hi = static_cast<long>(std::ceil(2.0 * X)) - 1;  // n < 2X
  if (hi > table.n_max())
    throw OutOfRange("resonance_sum at X = " + fmtio::num(X) + " needs lambda(n) up to n = " +
                     std::to_string(hi) + " but the table ends at " +
                     std::to_string(table.n_max()));
  std::complex<double> sum = 0.0, comp = 0.0;
  for (long n = lo; n <= hi; ++n) {
    double weight = phi.eval(static_cast<double>(n) / X);
    if (weight == 0.0) continue;
    std::complex<double> term = table.coefficient(n) * weight *
                                dd::cis_cycles(dd::reduced_phase(alpha, static_cast<double>(n), beta));
    std::complex<double> y = term - comp;
    std::complex<double> t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

struct CurvePoint {
  double X = 0.0;
  std::complex<double> S;
};

struct ResonanceCurve {
  std::vector<CurvePoint> points;  // in grid order
};

// alpha may depend on nothing here; curves over c-dependent alpha are built by
// the analysis layer. Points are computed in parallel (independent work) and
// written to index-addressed slots, so ordering and values are deterministic.
inline ResonanceCurve resonance_curve(const ingest::FourierCoefficientTable& table,
                                      const cutoff::CutoffFunction& phi, double alpha, double beta,
                                      const std::vector<double>& x_grid) {
  ResonanceCurve curve;
  curve.points.resize(x_grid.size());
  par::parallel_for(static_cast<long>(x_grid.size()), [&](long i) {
    double x = x_grid[static_cast<size_t>(i)];
    curve.points[static_cast<size_t>(i)] = {x, resonance_sum(table, phi, alpha, beta, x)};
  });
  return curve;
}

inline std::vector<double> geometric_grid(double x_min, double x_max, int steps) {
  if (!(x_min > 0.0) || !(x_max >= x_min) || steps < 1)
    throw std::invalid_argument("geometric_grid: need 0 < x_min <= x_max and steps >= 1");
  std::vector<double> g;
  g.reserve(static_cast<size_t>(steps));
  if (steps == 1) {
    g.push_back(x_min);
    return g;
  }
  double ratio = std::log(x_max / x_min) / (steps - 1);
  for (int i = 0; i < steps; ++i) g.push_back(x_min * std::exp(ratio * i));
  g.front() = x_min;
  g.back() = x_max;
  return g;
}

inline std::vector<double> arithmetic_grid(double x_min, double x_max, int steps) {
  if (!(x_min > 0.0) || !(x_max >= x_min) || steps < 1)
    throw std::invalid_argument("arithmetic_grid: need 0 < x_min <= x_max and steps >= 1");
  std::vector<double> g;
  g.reserve(static_cast<size_t>(steps));
  if (steps == 1) {
    g.push_back(x_min);
    return g;
  }
  double h = (x_max - x_min) / (steps - 1);
  for (int i = 0; i < steps; ++i) g.push_back(x_min + h * i);
  g.front() = x_min;
  g.back() = x_max;
  return g;
}

}  // namespace resonator::resonance
