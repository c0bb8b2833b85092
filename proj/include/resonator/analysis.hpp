#pragma once

// Inversion layer: growth classification of |S| curves, the closed-form
// main-term prediction at a planted resonance, spectral-parameter recovery,
// and level detection by scanning candidate levels with a resonating and a
// decaying test frequency.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "resonator/cutoff.hpp"
#include "resonator/ingest.hpp"
#include "resonator/resonance.hpp"
#include "resonator/voronoi.hpp"

namespace resonator::analysis {

// True when every dual term falls outside the summation range (4 b* < 1), so
// the sum inherits the full rapid decay of the error budget:
// |alpha| beta X^beta min(1, 2^{1/2-beta}) < (1/2) sqrt(X/D).
inline bool rapid_decay_condition(double alpha, double beta, double X, long D) {
  double lhs = std::abs(alpha) * beta * std::pow(X, beta) * std::min(1.0, std::pow(2.0, 0.5 - beta));
  return lhs < 0.5 * std::sqrt(X / static_cast<double>(D));
}

// Two-term prediction of S at alpha = 2 sqrt(q/D), beta = 1/2:
// c+ / (q^{1/4} lambda(D)) (X/D)^{3/4} lambda_dual(q)
//   + c- d_{r,0} / (q^{3/4} lambda(D)) (X/D)^{1/4} lambda_dual(q).
inline std::complex<double> main_term_prediction(long q, long D, double X,
                                                 std::complex<double> lambda_dual_q,
                                                 std::complex<double> lambda_d, double r,
                                                 const cutoff::MomentSet& moments) {
  if (std::abs(lambda_d) == 0.0)
    throw ZeroLevelCoefficient("lambda(" + std::to_string(D) + ") = 0 in main_term_prediction");
  double xd = X / static_cast<double>(D);
  double d0 = voronoi::coeff_d(r, 0);
  return moments.c_plus / (std::pow(q, 0.25) * lambda_d) * std::pow(xd, 0.75) * lambda_dual_q +
         moments.c_minus * d0 / (std::pow(q, 0.75) * lambda_d) * std::pow(xd, 0.25) * lambda_dual_q;
}

enum class GrowthClass { main_term, rapid_decay, inconclusive };

inline const char* growth_class_name(GrowthClass g) {
  switch (g) {
    case GrowthClass::main_term: return "main_term";
    case GrowthClass::rapid_decay: return "rapid_decay";
    default: return "inconclusive";
  }
}

struct GrowthThresholds {
  double main_term_tol = 0.25;    // |slope - 3/4| tolerance
  double decay_slope_max = -1.5;  // slope must be at most this
  double decay_floor = 0.1;       // and |S| must shrink to this fraction
};

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of log-log residuals
  GrowthClass cls = GrowthClass::inconclusive;
};

// Least squares on (log X, log |S|). Any exact zero of |S| short-circuits to
// rapid_decay with slope -inf: log is undefined and only an identically tiny
// tail produces exact zeros.
inline GrowthFit classify_growth(const resonance::ResonanceCurve& curve,
                                 const GrowthThresholds& th = {}) {
  auto pts = curve.points;
  if (pts.size() < 8)
    throw std::invalid_argument("classify_growth: need at least 8 curve points, got " +
                                std::to_string(pts.size()));
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.X < b.X; });
  if (!(pts.back().X >= 2.0 * pts.front().X))
    throw std::invalid_argument("classify_growth: X grid must span at least a factor of 2");
  GrowthFit fit;
  for (const auto& p : pts) {
    if (std::abs(p.S) == 0.0) {
      fit.slope = -std::numeric_limits<double>::infinity();
      fit.intercept = std::numeric_limits<double>::quiet_NaN();
      fit.residual = 0.0;
      fit.cls = GrowthClass::rapid_decay;
      return fit;
    }
  }
  size_t n = pts.size();
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += std::log(p.X);
    my += std::log(std::abs(p.S));
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    double dx = std::log(p.X) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(std::abs(p.S)) - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& p : pts) {
    double resid = std::log(std::abs(p.S)) - (fit.intercept + fit.slope * std::log(p.X));
    ss += resid * resid;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  double first = std::abs(pts.front().S), last = std::abs(pts.back().S);
  if (std::abs(fit.slope - 0.75) <= th.main_term_tol) {
    fit.cls = GrowthClass::main_term;
  } else if (fit.slope <= th.decay_slope_max && last <= th.decay_floor * first) {
    fit.cls = GrowthClass::rapid_decay;
  } else {
    fit.cls = GrowthClass::inconclusive;
  }
  return fit;
}

enum class RVariant { literal, corrected };

struct REstimatePoint {
  double X = 0.0;
  double r_literal = 0.0;
  double r_corrected = 0.0;
  double guard = 0.0;  // r_corrected^4 D / X
};

struct SpectralEstimate {
  std::vector<REstimatePoint> per_x;  // ascending X
  double r_literal = 0.0;             // headline values at the largest X
  double r_corrected = 0.0;
  double guard = 0.0;
  bool guard_violated = false;
  RVariant preferred = RVariant::corrected;
  std::complex<double> c_plus, c_minus;

  double r() const { return preferred == RVariant::corrected ? r_corrected : r_literal; }
};

// Inverts the two-term main-term form of S at alpha = 2/sqrt(D), beta = 1/2:
//   inner = lambda(D) / (2 c-) (X/D)^{-1/4} (S - c+/lambda(D) (X/D)^{3/4})
// On exact data inner = d_{r,0}/2 = -r^2 - 1/16, so
//   literal   r = sqrt(|inner - 1/16|)        (biased: sqrt(r^2 + 1/8))
//   corrected r = sqrt(|Re(inner) + 1/16|)    (exact on exact data)
// The guard r^4 D / X > 1 flags X too small for the asymptotic error to have
// kicked in; recovery on synthetic data still works, so it is a warning, not
// an error.
inline SpectralEstimate estimate_r(const ingest::FourierCoefficientTable& table, long D,
                                   const cutoff::CutoffFunction& phi, std::vector<double> x_grid,
                                   RVariant preferred = RVariant::corrected, double tol = 1e-12) {
  if (x_grid.empty()) throw std::invalid_argument("estimate_r: empty X grid");
  if (D < 1) throw std::invalid_argument("estimate_r: D must be >= 1");
  std::complex<double> lam_d = table.coefficient(D);
  if (std::abs(lam_d) == 0.0)
    throw ZeroLevelCoefficient("lambda(" + std::to_string(D) + ") = 0; estimate_r needs it");
  std::sort(x_grid.begin(), x_grid.end());
  const auto& ms = cutoff::cached_moments(phi, 1, tol);
  double alpha = 2.0 / std::sqrt(static_cast<double>(D));
  SpectralEstimate est;
  est.preferred = preferred;
  est.c_plus = ms.c_plus;
  est.c_minus = ms.c_minus;
  est.per_x.reserve(x_grid.size());
  for (double X : x_grid) {
    std::complex<double> S = resonance::resonance_sum(table, phi, alpha, 0.5, X);
    double xd = X / static_cast<double>(D);
    std::complex<double> inner =
        lam_d / (2.0 * ms.c_minus) * std::pow(xd, -0.25) * (S - ms.c_plus / lam_d * std::pow(xd, 0.75));
    REstimatePoint p;
    p.X = X;
    p.r_literal = std::sqrt(std::abs(inner - 1.0 / 16.0));
    p.r_corrected = std::sqrt(std::abs(inner.real() + 1.0 / 16.0));
    p.guard = std::pow(p.r_corrected, 4) * static_cast<double>(D) / X;
    est.per_x.push_back(p);
  }
  const auto& head = est.per_x.back();
  est.r_literal = head.r_literal;
  est.r_corrected = head.r_corrected;
  est.guard = head.guard;
  est.guard_violated = est.guard > 1.0;
  return est;
}

struct LevelBracket {
  long c = 0;          // candidate level that produced the bracket
  double lower = 0.0;  // c / (sqrt q + sqrt(c / 4X))^2 < D
  double upper = 0.0;  // D < c / epsilon^2
  std::vector<long> integer_candidates;  // integers strictly inside
  std::optional<long> resolved;          // set when exactly one candidate
};

inline LevelBracket level_bracket(long c, long q, double epsilon, double X) {
  if (c < 1 || q < 1) throw std::invalid_argument("level_bracket: c and q must be >= 1");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("level_bracket: epsilon must lie in (0, 1)");
  if (!(X > 0.0)) throw std::invalid_argument("level_bracket: X must be positive");
  LevelBracket b;
  b.c = c;
  double root = std::sqrt(static_cast<double>(q)) + std::sqrt(static_cast<double>(c) / (4.0 * X));
  b.lower = static_cast<double>(c) / (root * root);
  b.upper = static_cast<double>(c) / (epsilon * epsilon);
  long lo = static_cast<long>(std::floor(b.lower)) + 1;  // strict inequalities
  long hi = static_cast<long>(std::ceil(b.upper)) - 1;
  for (long d = lo; d <= hi; ++d) b.integer_candidates.push_back(d);
  if (b.integer_candidates.size() == 1) b.resolved = b.integer_candidates.front();
  return b;
}

struct LevelScanRow {
  long c = 0;
  GrowthFit fit_a;                 // resonance probe alpha_q(c) = 2 sqrt(q/c)
  std::optional<GrowthFit> fit_b;  // decay probe alpha_eps(c) = eps/sqrt(c); only if A resonates
  bool admitted = false;
  std::optional<LevelBracket> bracket;  // at the largest grid X, when admitted
  std::optional<std::string> error;     // per-candidate failure, scan continues
};

// Candidate c is admitted when the resonance probe grows like the main term
// AND the decay probe actually decays. Errors on one candidate (table too
// short, degenerate data) are recorded on its row without aborting the scan.
inline std::vector<LevelScanRow> scan_levels(const ingest::FourierCoefficientTable& table,
                                             const cutoff::CutoffFunction& phi, long c_min,
                                             long c_max, long q, double epsilon,
                                             const std::vector<double>& x_grid,
                                             const GrowthThresholds& th = {}) {
  if (c_min < 1 || c_max < c_min)
    throw std::invalid_argument("scan_levels: need 1 <= c_min <= c_max");
  if (q < 1) throw std::invalid_argument("scan_levels: q must be >= 1");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("scan_levels: epsilon must lie in (0, 1)");
  double x_top = *std::max_element(x_grid.begin(), x_grid.end());
  std::vector<LevelScanRow> rows;
  for (long c = c_min; c <= c_max; ++c) {
    LevelScanRow row;
    row.c = c;
    try {
      double alpha_q = 2.0 * std::sqrt(static_cast<double>(q) / static_cast<double>(c));
      row.fit_a = classify_growth(resonance::resonance_curve(table, phi, alpha_q, 0.5, x_grid), th);
      if (row.fit_a.cls == GrowthClass::main_term) {
        double alpha_eps = epsilon / std::sqrt(static_cast<double>(c));
        row.fit_b =
            classify_growth(resonance::resonance_curve(table, phi, alpha_eps, 0.5, x_grid), th);
        row.admitted = row.fit_b->cls == GrowthClass::rapid_decay;
        if (row.admitted) row.bracket = level_bracket(c, q, epsilon, x_top);
      }
    } catch (const Error& e) {
      row.error = std::string(e.name()) + ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<LevelBracket> detect_level(const ingest::FourierCoefficientTable& table,
                                              const cutoff::CutoffFunction& phi, long c_min,
                                              long c_max, long q, double epsilon,
                                              const std::vector<double>& x_grid,
                                              const GrowthThresholds& th = {}) {
  std::vector<LevelBracket> found;
  for (auto& row : scan_levels(table, phi, c_min, c_max, q, epsilon, x_grid, th))
    if (row.admitted && row.bracket) found.push_back(*row.bracket);
  return found;
}

}  // namespace resonator::analysis
