// Acceptance gate: runs the numbered release checks and prints one line per
// check (PASS / FAIL / SKIPPED(FIXTURE)). Exit code is the number of
// failures. Checks that need the external coefficient fixture skip with an
// explicit marker when the file is absent; everything else always runs.
//
// Usage: acceptance [--cli PATH] [--fixture PATH]
// RESONANCE_FIXTURE overrides --fixture.

#include <sys/wait.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "resonator/resonator.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace resonator;
namespace frozen = oracle::frozen;

namespace {

constexpr double kTau = 6.283185307179586476925287;

struct Outcome {
  enum Kind { pass, fail, skip } kind = fail;
  std::string detail;
};

Outcome passed(std::string detail = {}) { return {Outcome::pass, std::move(detail)}; }
Outcome failed(std::string detail) { return {Outcome::fail, std::move(detail)}; }
Outcome skipped(std::string detail) { return {Outcome::skip, std::move(detail)}; }

std::string eng(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string cli_path;      // built binary, for the determinism check
std::string fixture_path;  // external coefficient table

bool fixture_exists() {
  std::ifstream in(fixture_path);
  return in.good();
}

// ---- check 1: kernel expansion coefficients vs frozen 40-digit oracle ----

Outcome check_kernel_coefficients() {
  double worst = 0.0;
  for (int ri = 0; ri < 4; ++ri) {
    double r = frozen::c_coeff_r[ri];
    auto c0 = voronoi::coeff_c(r, 0);
    if (std::abs(c0.real() - frozen::c_coeff_k0) > 1e-14 || c0.imag() != 0.0)
      return failed("k=0 at r=" + eng(r) + " is off by " +
                    eng(std::abs(c0.real() - frozen::c_coeff_k0)));
    for (int k = 1; k <= 4; ++k) {
      double want = frozen::c_coeff[ri][k - 1];
      auto got = voronoi::coeff_c(r, k);
      double rel = std::abs(got.real() - want) / std::abs(want);
      if (got.imag() != 0.0) return failed("nonzero imaginary part at k=" + std::to_string(k));
      worst = std::max(worst, rel);
      if (rel > 1e-10)
        return failed("r=" + eng(r) + " k=" + std::to_string(k) + " rel err " + eng(rel));
    }
  }
  return passed("max rel err " + eng(worst) + " over 4 r values, k=0..4");
}

// ---- check 2: b* specialization at the resonant frequency ----

Outcome check_b_star() {
  oracle::DetRng rng(4242);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    long q = rng.integer(1, 50);
    long D = rng.integer(1, 40);
    double X = rng.uniform(100.0, 1e6);
    double alpha = 2.0 * std::sqrt(static_cast<double>(q) / static_cast<double>(D));
    double b = voronoi::b_star(alpha, 0.5, X, D);
    double rel = std::abs(b - static_cast<double>(q)) / static_cast<double>(q);
    worst = std::max(worst, rel);
    if (rel > 1e-12)
      return failed("q=" + std::to_string(q) + " D=" + std::to_string(D) + " rel err " + eng(rel));
  }
  return passed("50 random (q, D, X), max rel err " + eng(worst));
}

// ---- check 3: resonant P-integral equals the cutoff moment ----

Outcome check_resonant_p_integral() {
  auto phi = cutoff::standard_cutoff();
  double worst = 0.0;
  for (double X : {1e3, 1e4, 1e5})
    for (long q : {1L, 2L})
      for (long D : {1L, 5L})
        for (int sign : {+1, -1})
          for (int k : {0, 1}) {
            double qd = static_cast<double>(q) / static_cast<double>(D);
            osc::PhaseSpec spec{2.0 * std::sqrt(qd), 0.5, X,
                                -2.0 * std::sqrt(static_cast<double>(q) * X /
                                                 static_cast<double>(D))};
            auto p = osc::p_integral(spec, sign, k, phi, 1e-10);
            double m = cutoff::moment(phi, sign, k);
            double err = std::abs(p.value - m);
            worst = std::max(worst, err);
            if (err > 1e-8)
              return failed("X=" + eng(X) + " q=" + std::to_string(q) + " D=" + std::to_string(D) +
                            " sign=" + std::to_string(sign) + " k=" + std::to_string(k) + " err " +
                            eng(err));
          }
  return passed("48 (X, q, D, sign, k) combinations, max err " + eng(worst));
}

// ---- check 4: random P-integrals vs 1e7-point Simpson oracle ----

Outcome check_oscillatory_oracle() {
  auto phi = cutoff::standard_cutoff();
  oracle::DetRng rng(20260814);
  constexpr double sqrt2 = 1.41421356237309504880;
  double worst = 0.0;
  int done = 0, attempts = 0;
  while (done < 20 && ++attempts < 10000) {
    double alpha = (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * rng.uniform(0.3, 3.0);
    double beta = rng.uniform(0.3, 1.5);
    double X = rng.uniform(500.0, 20000.0);
    double w = (rng.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * rng.uniform(0.0, 120.0);
    int k = static_cast<int>(rng.integer(0, 2));
    int sign = rng.uniform(0.0, 1.0) < 0.5 ? +1 : -1;
    double xb = std::pow(X, beta);
    // keep total phase under 3e4 rad so the 1e7-interval Simpson rule holds
    // ~1e-12 truncation error; everything above is rejected, not clamped
    double span_rad = kTau * (std::abs(alpha) * xb * (std::pow(2.0, beta) - 1.0) +
                              std::abs(w) * (sqrt2 - 1.0));
    if (span_rad > 3e4) continue;
    ++done;
    osc::PhaseSpec spec{alpha, beta, X, w};
    auto p = osc::p_integral(spec, sign, k, phi, 1e-10);
    double e = 0.5 * sign - 2.0 * k;
    auto f = [&](double t) -> std::complex<double> {
      double amp = std::pow(t, e) * phi.eval(t * t);
      if (amp == 0.0) return {0.0, 0.0};
      double cycles = alpha * xb * std::pow(t, 2.0 * beta) + w * t;
      double th = kTau * cycles;
      return amp * std::complex<double>{std::cos(th), std::sin(th)};
    };
    auto ref = oracle::simpson(f, 1.0, sqrt2, 10000000L);
    double err = std::abs(p.value - ref);
    worst = std::max(worst, err);
    if (err > 1e-8)
      return failed("alpha=" + eng(alpha) + " beta=" + eng(beta) + " X=" + eng(X) +
                    " w=" + eng(w) + " k=" + std::to_string(k) + " abs err " + eng(err));
  }
  if (done < 20) return failed("rejection sampling starved: only " + std::to_string(done) + " cases");
  return passed("20 randomized cases, max abs err " + eng(worst));
}

// ---- check 5: the worked level bracket ----

Outcome check_level_bracket() {
  auto b = analysis::level_bracket(5, 1, 0.95, 2200.0);
  if (std::abs(b.lower - 4.77) > 0.005 || std::abs(b.upper - 5.54) > 0.005)
    return failed("bracket (" + eng(b.lower) + ", " + eng(b.upper) + ") != (4.77, 5.54)");
  if (!b.resolved || *b.resolved != 5)
    return failed("bracket did not resolve to 5");
  return passed("(" + eng(b.lower) + ", " + eng(b.upper) + ") resolved to 5");
}

// ---- check 6: planted spectral parameters invert exactly ----

Outcome check_planted_r() {
  auto phi = cutoff::standard_cutoff();
  double worst = 0.0;
  for (double r : {1.0, 5.0, 8.0, 12.0})
    for (long D : {1L, 5L, 13L}) {
      std::complex<double> lam_d = D == 1 ? std::complex<double>{1.0, 0.0}
                                 : D == 5 ? std::complex<double>{0.62, 0.0}
                                          : std::complex<double>{-0.45, 0.0};
      auto t = synthetic::make_spike_table(r, D, 3000.0, lam_d, phi);
      auto est = analysis::estimate_r(t, D, phi, {3000.0});
      double err = std::abs(est.r_corrected - r);
      worst = std::max(worst, err);
      if (err > 1e-6)
        return failed("r=" + eng(r) + " D=" + std::to_string(D) + " recovered " +
                      eng(est.r_corrected));
    }
  return passed("r in {1,5,8,12} x D in {1,5,13}, max err " + eng(worst));
}

// ---- checks 7 and 8: external level-5 coefficient fixture ----

// The decay probes on coefficient data fall off sub-polynomially (the window
// is smooth but not analytic), so the synthetic-calibrated gates apply: slope
// at most -0.5 and a drop below half, instead of the -1.5 / 0.1 defaults
// meant for exact exponential decay.
analysis::GrowthThresholds fixture_thresholds() {
  analysis::GrowthThresholds th;
  th.decay_slope_max = -0.5;
  th.decay_floor = 0.5;
  return th;
}

Outcome check_fixture_level_scan() {
  if (!fixture_exists()) return skipped("no coefficient file at " + fixture_path);
  auto t = ingest::load_table(fixture_path);
  auto phi = cutoff::standard_cutoff();
  auto grid = resonance::geometric_grid(1000.0, 2200.0, 13);
  auto th = fixture_thresholds();

  auto rows = analysis::scan_levels(t, phi, 3, 6, 1, 0.95, grid, th);
  std::set<long> admitted;
  for (const auto& row : rows) {
    if (row.error) return failed("c=" + std::to_string(row.c) + " errored: " + *row.error);
    if (row.admitted) admitted.insert(row.c);
  }
  if (admitted != std::set<long>{5}) {
    std::string got;
    for (long c : admitted) got += (got.empty() ? "" : ",") + std::to_string(c);
    return failed("admitted {" + got + "} from c in 3..6, want {5}");
  }

  auto c1 = analysis::scan_levels(t, phi, 1, 1, 1, 0.95, grid, th).front();
  if (c1.error) return failed("c=1 errored: " + *c1.error);
  if (c1.fit_a.cls != analysis::GrowthClass::main_term)
    return failed("c=1 resonance probe should look like a main term (slope " +
                  eng(c1.fit_a.slope) + ")");
  if (!c1.fit_b || c1.fit_b->cls == analysis::GrowthClass::rapid_decay || c1.admitted)
    return failed("c=1 should be rejected by the decay probe, not admitted");

  auto est = analysis::estimate_r(t, 5, phi, grid);
  double err = std::abs(est.r_corrected - 8.01848237839);
  if (err > 0.05) return failed("recovered r " + eng(est.r_corrected) + ", off by " + eng(err));
  return passed("admitted {5}, rejected c=1, r err " + eng(err));
}

Outcome check_fixture_expansion() {
  if (!fixture_exists()) return skipped("no coefficient file at " + fixture_path);
  auto t = ingest::load_table(fixture_path);
  auto phi = cutoff::standard_cutoff();
  double r = 8.01848237839, alpha = 2.0 / std::sqrt(5.0);
  double worst = 0.0;
  for (int N : {1, 2})
    for (double X : {1500.0, 2200.0}) {
      auto S = resonance::resonance_sum(t, phi, alpha, 0.5, X);
      auto exp = voronoi::dual_expansion(t, 5, r, alpha, 0.5, X, N, phi, 1e-10);
      double resid = std::abs(S - exp.value);
      if (resid > 10.0 * exp.budget)
        return failed("N=" + std::to_string(N) + " X=" + eng(X) + " residual " + eng(resid) +
                      " > 10 x budget " + eng(exp.budget));
      worst = std::max(worst, resid / exp.budget);
    }
  return passed("residual <= 10 x budget at N in {1,2}, X in {1500,2200}; worst ratio " +
                eng(worst));
}

// ---- check 9: growth classifier calibration ----

Outcome check_classifier() {
  auto curve = [](const std::function<double(double)>& f) {
    resonance::ResonanceCurve c;
    for (double x : resonance::geometric_grid(100.0, 800.0, 9))
      c.points.push_back({x, {f(x), 0.0}});
    return c;
  };
  auto grow = analysis::classify_growth(curve([](double x) { return std::pow(x, 0.75); }));
  if (grow.cls != analysis::GrowthClass::main_term || std::abs(grow.slope - 0.75) > 1e-12)
    return failed("X^{3/4} slope " + eng(grow.slope) + " class " +
                  analysis::growth_class_name(grow.cls));
  auto decay = analysis::classify_growth(curve([](double x) { return std::exp(-x / 100.0); }));
  if (decay.cls != analysis::GrowthClass::rapid_decay)
    return failed("exp(-X/100) classified " + std::string(analysis::growth_class_name(decay.cls)));
  auto flat = analysis::classify_growth(curve([](double x) { return std::pow(x, 0.2); }));
  if (flat.cls != analysis::GrowthClass::inconclusive || std::abs(flat.slope - 0.2) > 1e-12)
    return failed("X^{0.2} slope " + eng(flat.slope) + " class " +
                  analysis::growth_class_name(flat.cls));
  return passed("power laws recovered to " + eng(std::abs(grow.slope - 0.75)));
}

// ---- check 10: CLI determinism ----

std::string capture(const std::string& args, int& status) {
  std::string cmd = cli_path + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    status = -1;
    return {};
  }
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int rc = pclose(p);
  status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

Outcome check_determinism() {
  if (cli_path.empty()) return failed("no --cli path given");
  auto phi = cutoff::standard_cutoff();
  auto table = synthetic::make_spike_table(frozen::r_test, 5, 500.0, {0.7, 0.0}, phi);
  const char* tmpdir = std::getenv("TMPDIR");
  std::string tmp = std::string(tmpdir ? tmpdir : "/tmp") + "/acceptance_spike.csv";
  {
    std::ofstream out(tmp);
    ingest::write_csv(table, out);
    if (!out.good()) return failed("cannot write temp table " + tmp);
  }
  std::vector<std::string> invocations = {
      "moments --k-max 2",
      "p-integral --alpha \"2*sqrt(1/5)\" --x 2200 --n 1 --level 5",
      "curve --coeffs " + tmp + " --alpha \"2*sqrt(1/5)\" --x-min 200 --x-max 500 --x-steps 9",
      "estimate-r --coeffs " + tmp + " --level 5 --x-min 500 --x-max 500 --x-steps 1",
  };
  for (const auto& inv : invocations) {
    int s1 = 0, s2 = 0;
    std::string a = capture(inv, s1);
    std::string b = capture(inv, s2);
    if (s1 != 0 || s2 != 0) {
      std::remove(tmp.c_str());
      return failed("'" + inv + "' exited " + std::to_string(s1) + "/" + std::to_string(s2));
    }
    if (a != b || a.empty()) {
      std::remove(tmp.c_str());
      return failed("'" + inv + "' output differs between runs");
    }
  }
  std::remove(tmp.c_str());
  return passed(std::to_string(invocations.size()) + " subcommands byte-identical across reruns");
}

struct Check {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  fixture_path = "data/fixtures/maass_d5.csv";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--cli") == 0 && i + 1 < argc)
      cli_path = argv[++i];
    else if (std::strcmp(argv[i], "--fixture") == 0 && i + 1 < argc)
      fixture_path = argv[++i];
  }
  if (const char* env = std::getenv("RESONANCE_FIXTURE")) fixture_path = env;

  std::vector<Check> checks = {
      {1, "kernel coefficients match the 40-digit oracle", check_kernel_coefficients},
      {2, "b* equals q at the resonant frequency", check_b_star},
      {3, "resonant P-integrals reduce to cutoff moments", check_resonant_p_integral},
      {4, "P-integrals match the brute-force Simpson oracle", check_oscillatory_oracle},
      {5, "level bracket (4.77, 5.54) resolves to 5", check_level_bracket},
      {6, "planted spectral parameters recovered to 1e-6", check_planted_r},
      {7, "level-5 fixture: scan admits 5, rejects 1, recovers r", check_fixture_level_scan},
      {8, "level-5 fixture: window sums match the dual expansion", check_fixture_expansion},
      {9, "growth classifier calibration", check_classifier},
      {10, "CLI output is byte-identical across reruns", check_determinism},
  };

  int failures = 0;
  for (const auto& c : checks) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = failed(std::string("unhandled exception: ") + e.what());
    }
    const char* tag = o.kind == Outcome::pass   ? "PASS            "
                      : o.kind == Outcome::skip ? "SKIPPED(FIXTURE)"
                                                : "FAIL            ";
    std::printf("[%2d] %s %s%s%s\n", c.id, tag, c.title, o.detail.empty() ? "" : " -- ",
                o.detail.c_str());
    if (o.kind == Outcome::fail) ++failures;
  }
  if (failures) std::printf("%d of %zu checks failed\n", failures, checks.size());
  return failures;
}
