// Command-line front end. Six subcommands:
//
//   curve       |S| along an X grid for a fixed test frequency
//   scan-level  admit/reject candidate levels, bracket the true one
//   estimate-r  invert the resonant main term for the spectral parameter
//   verify      direct window sum vs the dual expansion, with error budget
//   moments     cutoff moments and the derived main-term constants
//   p-integral  a single oscillatory weight integral plus its a-priori bound
//
// Every subcommand computes its full result first and only then writes
// anything, so a failing run never leaves partial output. Output is CSV with
// '#' comment headers carrying the resolved parameters, or JSON with --json.
// Exit codes: 0 success, 1 domain/data error, 2 usage error.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "resonator/resonator.hpp"

namespace {

using namespace resonator;

struct Cell {
  std::string text;
  bool quote = false;  // JSON rendering: quote strings and non-finite numbers
};

Cell cell(double v) { return {fmtio::num(v), !std::isfinite(v)}; }
Cell cell(long v) { return {fmtio::num(v), false}; }
Cell cell(int v) { return {fmtio::num(v), false}; }
Cell cell_s(std::string s) { return {std::move(s), true}; }

struct Sheet {
  std::string command;
  std::vector<std::pair<std::string, std::string>> meta;  // resolved key=value
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void kv(const std::string& k, const std::string& v) { meta.emplace_back(k, v); }
  void kv(const std::string& k, double v) { meta.emplace_back(k, fmtio::num(v)); }
  void kv(const std::string& k, long v) { meta.emplace_back(k, fmtio::num(v)); }
  void kv(const std::string& k, int v) { meta.emplace_back(k, fmtio::num(v)); }

  std::string render_csv() const {
    std::ostringstream out;
    out << "# resonator " << version_string << "\n# command=" << command << "\n";
    for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
      for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].text;
      out << "\n";
    }
    return out.str();
  }

  std::string render_json() const {
    std::ostringstream out;
    out << "{\"command\":" << fmtio::json_string(command)
        << ",\"version\":" << fmtio::json_string(std::string(version_string)) << ",\"meta\":{";
    for (size_t i = 0; i < meta.size(); ++i)
      out << (i ? "," : "") << fmtio::json_string(meta[i].first) << ":"
          << fmtio::json_string(meta[i].second);
    out << "},\"columns\":[";
    for (size_t i = 0; i < columns.size(); ++i)
      out << (i ? "," : "") << fmtio::json_string(columns[i]);
    out << "],\"rows\":[";
    for (size_t r = 0; r < rows.size(); ++r) {
      out << (r ? "," : "") << "[";
      for (size_t i = 0; i < rows[r].size(); ++i) {
        const Cell& c = rows[r][i];
        out << (i ? "," : "");
        if (c.text.empty())
          out << "null";
        else if (c.quote)
          out << fmtio::json_string(c.text);
        else
          out << c.text;
      }
      out << "]";
    }
    out << "]}\n";
    return out.str();
  }
};

// Flags shared by the curve-producing subcommands.
struct GridFlags {
  double x_min = 1000.0;
  double x_max = 2200.0;
  int steps = 13;
  bool arithmetic = false;
};

void attach_grid(CLI::App* cmd, GridFlags& g) {
  cmd->add_option("--x-min", g.x_min, "Smallest X on the grid")->capture_default_str();
  cmd->add_option("--x-max", g.x_max, "Largest X on the grid")->capture_default_str();
  cmd->add_option("--x-steps", g.steps, "Number of grid points")->capture_default_str();
  cmd->add_flag("--arithmetic", g.arithmetic, "Evenly spaced grid instead of geometric");
}

std::vector<double> make_grid(const GridFlags& g) {
  return g.arithmetic ? resonance::arithmetic_grid(g.x_min, g.x_max, g.steps)
                      : resonance::geometric_grid(g.x_min, g.x_max, g.steps);
}

void describe_grid(Sheet& s, const GridFlags& g) {
  s.kv("x_min", g.x_min);
  s.kv("x_max", g.x_max);
  s.kv("x_steps", g.steps);
  s.kv("grid", g.arithmetic ? "arithmetic" : "geometric");
}

struct TableFlags {
  std::string path;
  std::string format = "auto";
};

void attach_table(CLI::App* cmd, TableFlags& t) {
  cmd->add_option("--coeffs", t.path, "Fourier coefficient table (CSV or JSON)")->required();
  cmd->add_option("--format", t.format, "Table format: auto, csv, json")
      ->check(CLI::IsMember({"auto", "csv", "json"}))
      ->capture_default_str();
}

ingest::FourierCoefficientTable load(const TableFlags& t) {
  auto fmt = t.format == "csv"    ? ingest::TableFormat::csv
             : t.format == "json" ? ingest::TableFormat::json
                                  : ingest::TableFormat::auto_detect;
  return ingest::load_table(t.path, fmt);
}

long resolve_level(const std::optional<long>& flag, const ingest::FourierCoefficientTable& tab,
                   const char* who) {
  if (flag) return *flag;
  if (tab.meta().claimed_level) return *tab.meta().claimed_level;
  throw std::invalid_argument(std::string(who) +
                              ": pass --level or provide claimed_level in the table metadata");
}

const char* class_name(analysis::GrowthClass g) { return analysis::growth_class_name(g); }

// ---- subcommand handlers ----------------------------------------------

struct CurveArgs {
  TableFlags table;
  GridFlags grid;
  std::string alpha_expr;
  std::string beta_expr = "1/2";
};

Sheet run_curve(const CurveArgs& a) {
  double alpha = expr::parse_real(a.alpha_expr);
  double beta = expr::parse_real(a.beta_expr);
  auto tab = load(a.table);
  auto phi = cutoff::standard_cutoff();
  auto curve = resonance::resonance_curve(tab, phi, alpha, beta, make_grid(a.grid));
  Sheet s;
  s.command = "curve";
  s.kv("coeffs", a.table.path);
  s.kv("alpha", alpha);
  s.kv("beta", beta);
  describe_grid(s, a.grid);
  s.kv("threads", par::thread_budget());
  s.columns = {"X", "re", "im", "abs"};
  for (const auto& p : curve.points)
    s.rows.push_back({cell(p.X), cell(p.S.real()), cell(p.S.imag()), cell(std::abs(p.S))});
  return s;
}

struct ScanArgs {
  TableFlags table;
  GridFlags grid{1000.0, 8000.0, 13, false};
  long c_min = 1;
  long c_max = 12;
  long q = 1;
  double epsilon = 0.95;
  analysis::GrowthThresholds th;
};

Sheet run_scan(const ScanArgs& a) {
  auto tab = load(a.table);
  auto phi = cutoff::standard_cutoff();
  auto rows = analysis::scan_levels(tab, phi, a.c_min, a.c_max, a.q, a.epsilon, make_grid(a.grid),
                                    a.th);
  Sheet s;
  s.command = "scan-level";
  s.kv("coeffs", a.table.path);
  s.kv("c_min", a.c_min);
  s.kv("c_max", a.c_max);
  s.kv("q", a.q);
  s.kv("epsilon", a.epsilon);
  s.kv("main_term_tol", a.th.main_term_tol);
  s.kv("decay_slope_max", a.th.decay_slope_max);
  s.kv("decay_floor", a.th.decay_floor);
  describe_grid(s, a.grid);
  s.kv("threads", par::thread_budget());
  s.columns = {"c",     "slope_a", "class_a", "slope_b",  "class_b",
               "admitted", "lower",   "upper",   "resolved", "note"};
  for (const auto& row : rows) {
    std::vector<Cell> r;
    r.push_back(cell(row.c));
    if (row.error) {
      r.insert(r.end(), 7, Cell{});
      std::string note = *row.error;
      for (char& ch : note)
        if (ch == ',' || ch == '\n') ch = ';';
      r.push_back(Cell{});
      r.push_back(cell_s(note));
    } else {
      r.push_back(cell(row.fit_a.slope));
      r.push_back(cell_s(class_name(row.fit_a.cls)));
      if (row.fit_b) {
        r.push_back(cell(row.fit_b->slope));
        r.push_back(cell_s(class_name(row.fit_b->cls)));
      } else {
        r.push_back(Cell{});
        r.push_back(cell_s("skipped"));
      }
      r.push_back(cell(row.admitted ? 1 : 0));
      if (row.bracket) {
        r.push_back(cell(row.bracket->lower));
        r.push_back(cell(row.bracket->upper));
        if (row.bracket->resolved)
          r.push_back(cell(*row.bracket->resolved));
        else
          r.push_back(Cell{});
      } else {
        r.insert(r.end(), 3, Cell{});
      }
      r.push_back(Cell{});
    }
    s.rows.push_back(std::move(r));
  }
  return s;
}

struct EstimateArgs {
  TableFlags table;
  GridFlags grid{1000.0, 2200.0, 13, false};
  std::optional<long> level;
  std::string variant = "corrected";
  double quad_tol = 1e-12;
};

Sheet run_estimate(const EstimateArgs& a) {
  auto tab = load(a.table);
  long D = resolve_level(a.level, tab, "estimate-r");
  auto phi = cutoff::standard_cutoff();
  auto pref = a.variant == "literal" ? analysis::RVariant::literal : analysis::RVariant::corrected;
  auto est = analysis::estimate_r(tab, D, phi, make_grid(a.grid), pref, a.quad_tol);
  Sheet s;
  s.command = "estimate-r";
  s.kv("coeffs", a.table.path);
  s.kv("level", D);
  s.kv("variant", a.variant);
  s.kv("quad_tol", a.quad_tol);
  describe_grid(s, a.grid);
  s.kv("c_plus", fmtio::num(est.c_plus.real()) + "+" + fmtio::num(est.c_plus.imag()) + "i");
  s.kv("c_minus", fmtio::num(est.c_minus.real()) + "+" + fmtio::num(est.c_minus.imag()) + "i");
  s.kv("r", est.r());
  s.kv("r_literal", est.r_literal);
  s.kv("r_corrected", est.r_corrected);
  s.kv("guard", est.guard);
  s.kv("guard_violated", est.guard_violated ? "true" : "false");
  s.kv("threads", par::thread_budget());
  s.columns = {"X", "r_literal", "r_corrected", "guard"};
  for (const auto& p : est.per_x)
    s.rows.push_back({cell(p.X), cell(p.r_literal), cell(p.r_corrected), cell(p.guard)});
  return s;
}

struct VerifyArgs {
  TableFlags table;
  double X = 0.0;
  std::string alpha_expr;
  std::string beta_expr = "1/2";
  int order = 1;
  std::optional<long> level;
  std::optional<double> r;
  double quad_tol = 1e-10;
};

Sheet run_verify(const VerifyArgs& a) {
  double alpha = expr::parse_real(a.alpha_expr);
  double beta = expr::parse_real(a.beta_expr);
  auto tab = load(a.table);
  long D = resolve_level(a.level, tab, "verify");
  double r;
  if (a.r)
    r = *a.r;
  else if (tab.meta().claimed_r)
    r = *tab.meta().claimed_r;
  else
    throw std::invalid_argument("verify: pass --r or provide claimed_r in the table metadata");
  auto phi = cutoff::standard_cutoff();
  auto direct = resonance::resonance_sum(tab, phi, alpha, beta, a.X);
  auto exp = voronoi::dual_expansion(tab, D, r, alpha, beta, a.X, a.order, phi, a.quad_tol);
  Sheet s;
  s.command = "verify";
  s.kv("coeffs", a.table.path);
  s.kv("level", D);
  s.kv("r", r);
  s.kv("alpha", alpha);
  s.kv("beta", beta);
  s.kv("order", a.order);
  s.kv("quad_tol", a.quad_tol);
  s.kv("threads", par::thread_budget());
  s.columns = {"X",  "alpha",        "beta",         "order",    "b_star", "n_cutoff",
               "direct_re", "direct_im", "expansion_re", "expansion_im", "residual", "budget"};
  s.rows.push_back({cell(a.X), cell(alpha), cell(beta), cell(a.order), cell(exp.b_star_value),
                    cell(exp.n_cutoff), cell(direct.real()), cell(direct.imag()),
                    cell(exp.value.real()), cell(exp.value.imag()),
                    cell(std::abs(direct - exp.value)), cell(exp.budget)});
  return s;
}

struct MomentsArgs {
  int k_max = 1;
  double quad_tol = 1e-12;
};

Sheet run_moments(const MomentsArgs& a) {
  if (a.k_max < 0) throw std::invalid_argument("moments: --k-max must be >= 0");
  auto phi = cutoff::standard_cutoff();
  auto ms = cutoff::compute_moments(phi, a.k_max + 1, a.quad_tol);
  Sheet s;
  s.command = "moments";
  s.kv("cutoff", phi.id);
  s.kv("k_max", a.k_max);
  s.kv("quad_tol", a.quad_tol);
  s.columns = {"name", "re", "im"};
  for (int k = 0; k <= a.k_max; ++k)
    s.rows.push_back({cell_s("m_plus_" + std::to_string(k)), cell(ms.plus[k]), cell(0.0)});
  for (int k = 0; k <= a.k_max; ++k)
    s.rows.push_back({cell_s("m_minus_" + std::to_string(k)), cell(ms.minus[k]), cell(0.0)});
  s.rows.push_back({cell_s("c_plus"), cell(ms.c_plus.real()), cell(ms.c_plus.imag())});
  s.rows.push_back({cell_s("c_minus"), cell(ms.c_minus.real()), cell(ms.c_minus.imag())});
  return s;
}

struct PIntegralArgs {
  std::string alpha_expr;
  std::string beta_expr = "1/2";
  double X = 0.0;
  std::optional<long> n;
  std::optional<long> level;
  std::optional<std::string> w_expr;
  int k = 0;
  std::string sign = "plus";
  double quad_tol = 1e-10;
};

Sheet run_p_integral(const PIntegralArgs& a) {
  double alpha = expr::parse_real(a.alpha_expr);
  double beta = expr::parse_real(a.beta_expr);
  double w;
  if (a.w_expr) {
    w = expr::parse_real(*a.w_expr);
  } else if (a.n && a.level) {
    if (*a.n < 1 || *a.level < 1)
      throw std::invalid_argument("p-integral: --n and --level must be >= 1");
    double sgn = alpha >= 0.0 ? 1.0 : -1.0;
    w = -sgn * 2.0 * std::sqrt(static_cast<double>(*a.n) * a.X / static_cast<double>(*a.level));
  } else {
    throw std::invalid_argument("p-integral: pass either --w or both --n and --level");
  }
  osc::PhaseSpec spec{alpha, beta, a.X, w};
  auto phi = cutoff::standard_cutoff();
  auto p = osc::p_integral(spec, a.sign == "minus" ? -1 : +1, a.k, phi, a.quad_tol);
  double bound = std::numeric_limits<double>::infinity();
  try {
    bound = osc::p_bound(spec, p.floor_q);
  } catch (const DegenerateQ&) {
    // resonant spec: the stationary point sits in the window, no a-priori bound
  }
  Sheet s;
  s.command = "p-integral";
  s.kv("alpha", alpha);
  s.kv("beta", beta);
  s.kv("X", a.X);
  s.kv("w", w);
  s.kv("k", a.k);
  s.kv("sign", a.sign);
  s.kv("quad_tol", a.quad_tol);
  s.columns = {"re", "im", "abs", "err_est", "panels", "phase_floor", "p_bound"};
  s.rows.push_back({cell(p.value.real()), cell(p.value.imag()), cell(std::abs(p.value)),
                    cell(p.err_est), cell(p.panels), cell(p.floor_q), cell(bound)});
  return s;
}

void emit(const Sheet& s, const std::string& out_path, bool json) {
  std::string text = json ? s.render_json() : s.render_csv();
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot open output file '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance sums for Fourier coefficient tables: recover the level and the "
               "spectral parameter of the underlying form"};
  app.set_config("--config", "", "Read options from an INI file ([subcommand] sections)");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("resonator ") + std::string(version_string));

  std::string out_path;
  bool json = false;
  app.add_option("--output", out_path, "Write to this file instead of stdout");
  app.add_flag("--json", json, "Emit JSON instead of CSV");

  CurveArgs curve_args;
  auto* curve = app.add_subcommand("curve", "Resonance sums along an X grid");
  attach_table(curve, curve_args.table);
  curve->add_option("--alpha", curve_args.alpha_expr, "Test frequency (expression, e.g. 2*sqrt(1/5))")
      ->required();
  curve->add_option("--beta", curve_args.beta_expr, "Phase exponent (expression)")
      ->capture_default_str();
  attach_grid(curve, curve_args.grid);

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan-level", "Admit candidate levels and bracket the true one");
  attach_table(scan, scan_args.table);
  scan->add_option("--c-min", scan_args.c_min, "Smallest candidate level")->capture_default_str();
  scan->add_option("--c-max", scan_args.c_max, "Largest candidate level")->capture_default_str();
  scan->add_option("--q", scan_args.q, "Resonance index for the growth probe")
      ->capture_default_str();
  scan->add_option("--epsilon", scan_args.epsilon, "Decay probe scale in (0,1)")
      ->capture_default_str();
  scan->add_option("--main-term-tol", scan_args.th.main_term_tol,
                   "Accepted |slope - 3/4| for main-term growth")
      ->capture_default_str();
  scan->add_option("--decay-slope-max", scan_args.th.decay_slope_max,
                   "Slope at or below this counts as decay")
      ->capture_default_str();
  scan->add_option("--decay-floor", scan_args.th.decay_floor,
                   "Final |S| must drop below this fraction of the initial one")
      ->capture_default_str();
  attach_grid(scan, scan_args.grid);

  EstimateArgs est_args;
  auto* est = app.add_subcommand("estimate-r", "Recover the spectral parameter from the main term");
  attach_table(est, est_args.table);
  est->add_option("--level", est_args.level, "Level D (falls back to table metadata)");
  est->add_option("--variant", est_args.variant, "Inversion variant: corrected or literal")
      ->check(CLI::IsMember({"corrected", "literal"}))
      ->capture_default_str();
  est->add_option("--quad-tol", est_args.quad_tol, "Moment quadrature tolerance")
      ->capture_default_str();
  attach_grid(est, est_args.grid);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Direct window sum vs dual expansion at one X");
  attach_table(verify, verify_args.table);
  verify->add_option("--x", verify_args.X, "Window start X")->required();
  verify->add_option("--alpha", verify_args.alpha_expr, "Test frequency (expression)")->required();
  verify->add_option("--beta", verify_args.beta_expr, "Phase exponent (expression)")
      ->capture_default_str();
  verify->add_option("--order", verify_args.order, "Expansion truncation order N >= 1")
      ->capture_default_str();
  verify->add_option("--level", verify_args.level, "Level D (falls back to table metadata)");
  verify->add_option("--r", verify_args.r, "Spectral parameter (falls back to table metadata)");
  verify->add_option("--quad-tol", verify_args.quad_tol, "Oscillatory quadrature tolerance")
      ->capture_default_str();

  MomentsArgs moments_args;
  auto* moments = app.add_subcommand("moments", "Cutoff moments and main-term constants");
  moments->add_option("--k-max", moments_args.k_max, "Largest moment index k")
      ->capture_default_str();
  moments->add_option("--quad-tol", moments_args.quad_tol, "Quadrature tolerance")
      ->capture_default_str();

  PIntegralArgs pi_args;
  auto* pint = app.add_subcommand("p-integral", "One oscillatory weight integral and its bound");
  pint->add_option("--alpha", pi_args.alpha_expr, "Test frequency (expression)")->required();
  pint->add_option("--beta", pi_args.beta_expr, "Phase exponent (expression)")
      ->capture_default_str();
  pint->add_option("--x", pi_args.X, "Window start X")->required();
  pint->add_option("--n", pi_args.n, "Dual index n (with --level, sets w)");
  pint->add_option("--level", pi_args.level, "Level D (with --n, sets w)");
  pint->add_option("--w", pi_args.w_expr, "Linear phase coefficient (expression), overrides --n");
  pint->add_option("--k", pi_args.k, "Correction order k >= 0")->capture_default_str();
  pint->add_option("--sign", pi_args.sign, "Weight exponent branch: plus or minus")
      ->check(CLI::IsMember({"plus", "minus"}))
      ->capture_default_str();
  pint->add_option("--quad-tol", pi_args.quad_tol, "Quadrature tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    Sheet s;
    if (app.got_subcommand(curve))
      s = run_curve(curve_args);
    else if (app.got_subcommand(scan))
      s = run_scan(scan_args);
    else if (app.got_subcommand(est))
      s = run_estimate(est_args);
    else if (app.got_subcommand(verify))
      s = run_verify(verify_args);
    else if (app.got_subcommand(moments))
      s = run_moments(moments_args);
    else
      s = run_p_integral(pi_args);
    emit(s, out_path, json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
