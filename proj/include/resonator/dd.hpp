#pragma once

// Double-double arithmetic, just enough to reduce alpha * n^beta mod 1 without
// losing the fractional part when the product is large. Not a general
// extended-precision type: only the operations the phase reduction needs.

#include <cmath>
#include <complex>

namespace resonator::dd {

struct Real2 {
  double hi = 0.0;
  double lo = 0.0;
};

// Error-free transforms (Knuth / Dekker). two_sum needs no magnitude ordering;
// quick_two_sum requires |a| >= |b|.
inline Real2 two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline Real2 quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline Real2 two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline Real2 renorm(double hi, double lo) { return quick_two_sum(hi, lo); }

inline Real2 add(Real2 a, Real2 b) {
  Real2 s = two_sum(a.hi, b.hi);
  return renorm(s.hi, s.lo + (a.lo + b.lo));
}

inline Real2 add(Real2 a, double b) {
  Real2 s = two_sum(a.hi, b);
  return renorm(s.hi, s.lo + a.lo);
}

inline Real2 neg(Real2 a) { return {-a.hi, -a.lo}; }

inline Real2 sub(Real2 a, Real2 b) { return add(a, neg(b)); }

inline Real2 mul(Real2 a, Real2 b) {
  Real2 p = two_prod(a.hi, b.hi);
  return renorm(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

inline Real2 mul(Real2 a, double b) {
  Real2 p = two_prod(a.hi, b);
  return renorm(p.hi, p.lo + a.lo * b);
}

inline Real2 div(Real2 a, Real2 b) {
  double q1 = a.hi / b.hi;
  Real2 r = sub(a, mul(b, q1));
  double q2 = r.hi / b.hi;
  r = sub(r, mul(b, q2));
  double q3 = r.hi / b.hi;
  return add(renorm(q1, q2), q3);
}

// One Newton step on the double estimate; the correction needs only ~53 extra
// bits so evaluating it in double keeps the result good to ~1e-32 relative.
inline Real2 sqrt(Real2 a) {
  double x = std::sqrt(a.hi);
  Real2 diff = sub(a, two_prod(x, x));
  return add(Real2{x, 0.0}, diff.hi / (2.0 * x));
}

inline Real2 pow_int(Real2 a, long e) {
  Real2 result{1.0, 0.0};
  while (e > 0) {
    if (e & 1) result = mul(result, a);
    a = mul(a, a);
    e >>= 1;
  }
  return result;
}

inline constexpr Real2 kLn2{6.9314718055994530942e-01, 2.3190468138462995584e-17};

inline Real2 exp(Real2 a) {
  double k = std::nearbyint(a.hi / kLn2.hi);
  Real2 r = sub(a, mul(kLn2, k));
  Real2 sum{1.0, 0.0};
  Real2 term{1.0, 0.0};
  for (int i = 1; i <= 32; ++i) {
    term = div(mul(term, r), Real2{static_cast<double>(i), 0.0});
    sum = add(sum, term);
    if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
  }
  int ik = static_cast<int>(k);
  return {std::ldexp(sum.hi, ik), std::ldexp(sum.lo, ik)};
}

// Newton on f(x) = exp(x) - a/..., written as x' = x + a*exp(-x) - 1; one step
// squares the 53-bit seed error.
inline Real2 log(Real2 a) {
  Real2 x{std::log(a.hi), 0.0};
  Real2 corr = add(mul(a, exp(neg(x))), -1.0);
  return add(x, corr);
}

inline double frac01(double x) {
  double f = x - std::floor(x);
  if (f >= 1.0) f -= 1.0;
  if (f < 0.0) f += 1.0;
  return f;
}

// n^beta in double-double. Integer and half-integer exponents get the exact
// sqrt/square-and-multiply path; anything else goes through exp(beta*log n).
inline Real2 pow_general(Real2 base, double beta) {
  double m = std::floor(beta);
  double h = beta - m;
  if (m >= 0.0 && m <= 64.0 && (h == 0.0 || h == 0.5)) {
    Real2 p = pow_int(base, static_cast<long>(m));
    if (h == 0.5) p = mul(p, sqrt(base));
    return p;
  }
  return exp(mul(log(base), beta));
}

// Above this magnitude the plain-double product alpha * n^beta rounds by more
// than ~1e-12 of a cycle, so the fractional part switches to the double-double
// path. Window sums at realistic X stay far below 2^12 cycles and never leave
// the fast path.
inline constexpr double kPhaseSwitch = 4096.0;  // 2^12

// Fractional part of alpha * n^beta in [0, 1), accurate to ~1e-12 absolute for
// |alpha * n^beta| up to 2^53 (beyond that the integer part itself is not
// representable and no fixed-precision scheme can help).
inline double reduced_phase(double alpha, double n, double beta) {
  double nb = std::pow(n, beta);
  if (std::abs(alpha) * nb <= kPhaseSwitch) return frac01(alpha * nb);
  Real2 p = mul(pow_general(Real2{n, 0.0}, beta), alpha);
  double ip = std::floor(p.hi);     // p.hi - ip is exact for |p.hi| < 2^53
  Real2 f = add(Real2{p.hi - ip, 0.0}, p.lo);
  return frac01(f.hi + f.lo);
}

// e(c) = exp(2 pi i c) for a phase given in cycles.
inline std::complex<double> cis_cycles(double cycles) {
  double th = 6.2831853071795864769 * cycles;
  return {std::cos(th), std::sin(th)};
}

}  // namespace resonator::dd
