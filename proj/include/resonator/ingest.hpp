#pragma once

// Coefficient table ingestion and serialization. Tables are dense: lambda(n)
// for n = 1..n_max with no gaps, lambda(1) = 1 up to a fixed normalization
// tolerance. Two file formats: CSV with a mandatory "n,re,im" (or "n,value")
// header, and a JSON form mirroring typical coefficient downloads.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "resonator/errors.hpp"
#include "resonator/format.hpp"

namespace resonator::ingest {

inline constexpr double kNormTol = 1e-9;

struct TableMeta {
  std::optional<long> claimed_level;
  std::optional<double> claimed_r;
  std::optional<bool> self_dual;
};

class FourierCoefficientTable {
 public:
  FourierCoefficientTable(std::vector<std::complex<double>> values, TableMeta meta = {})
      : values_(std::move(values)), meta_(meta) {
    if (values_.empty()) throw MissingIndex("table is empty; lambda(1) is required");
    if (std::abs(values_[0] - 1.0) > kNormTol)
      throw NotNormalized("lambda(1) = " + fmtio::num(values_[0].real()) + " + " +
                          fmtio::num(values_[0].imag()) + "i but tables must be normalized to "
                          "lambda(1) = 1 (tolerance 1e-9)");
    if (meta_.self_dual.value_or(false)) {
      for (size_t i = 0; i < values_.size(); ++i) {
        if (std::abs(values_[i].imag()) > kNormTol)
          throw ParseError("meta claims self_dual but lambda(" + std::to_string(i + 1) +
                           ") has imaginary part " + fmtio::num(values_[i].imag()));
      }
    }
  }

  long n_max() const { return static_cast<long>(values_.size()); }

  std::complex<double> coefficient(long n) const {
    if (n < 1 || n > n_max())
      throw OutOfRange("lambda(" + std::to_string(n) + ") requested but table holds n = 1.." +
                       std::to_string(n_max()));
    return values_[static_cast<size_t>(n - 1)];
  }

  const std::vector<std::complex<double>>& values() const { return values_; }
  const TableMeta& meta() const { return meta_; }

 private:
  std::vector<std::complex<double>> values_;
  TableMeta meta_;
};

namespace detail {

inline std::string strip(std::string s) {
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t i = 0;
  while (i < s.size() && issp(static_cast<unsigned char>(s[i]))) ++i;
  return s.substr(i);
}

inline std::string squash(std::string s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(strip(cur));
  return out;
}

inline double parse_double(const std::string& tok, long line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": '" + tok + "' is not a number");
  return v;
}

inline long parse_index(const std::string& tok, long line_no) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("line " + std::to_string(line_no) + ": '" + tok + "' is not an index");
  return v;
}

}  // namespace detail

inline FourierCoefficientTable parse_csv(std::istream& in) {
  std::string line;
  long line_no = 0;
  bool have_header = false;
  bool complex_columns = true;
  std::vector<std::complex<double>> values;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = detail::strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (!have_header) {
      std::string h = detail::squash(s);
      if (h == "n,re,im") complex_columns = true;
      else if (h == "n,value") complex_columns = false;
      else
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected header 'n,re,im' or 'n,value', got '" + s + "'");
      have_header = true;
      continue;
    }
    auto toks = detail::split_csv(s);
    size_t want = complex_columns ? 3 : 2;
    if (toks.size() != want)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(want) +
                       " columns, got " + std::to_string(toks.size()));
    long n = detail::parse_index(toks[0], line_no);
    long expected = static_cast<long>(values.size()) + 1;
    if (n > expected)
      throw MissingIndex("lambda(" + std::to_string(expected) +
                         ") is missing (file jumps to n = " + std::to_string(n) + " at line " +
                         std::to_string(line_no) + ")");
    if (n < expected)
      throw ParseError("line " + std::to_string(line_no) + ": index " + std::to_string(n) +
                       " repeats or decreases (expected " + std::to_string(expected) + ")");
    double re = detail::parse_double(toks[1], line_no);
    double im = complex_columns ? detail::parse_double(toks[2], line_no) : 0.0;
    values.emplace_back(re, im);
  }
  if (!have_header) throw ParseError("no header line found (expected 'n,re,im' or 'n,value')");
  if (values.empty()) throw MissingIndex("no coefficient rows found; lambda(1) is required");
  TableMeta meta;
  if (!complex_columns) meta.self_dual = true;
  return FourierCoefficientTable(std::move(values), meta);
}

// JSON accepts either a bare array of [n, re] / [n, re, im] rows or an object
// {"meta": {...}, "coefficients": [...]} with optional meta keys
// claimed_level, claimed_r, self_dual.
inline FourierCoefficientTable parse_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("JSON parse failure: ") + e.what());
  }
  try {
    TableMeta meta;
    const nlohmann::json* rows = &doc;
    if (doc.is_object()) {
      if (doc.contains("meta")) {
        const auto& m = doc["meta"];
        if (m.contains("claimed_level")) meta.claimed_level = m["claimed_level"].get<long>();
        if (m.contains("claimed_r")) meta.claimed_r = m["claimed_r"].get<double>();
        if (m.contains("self_dual")) meta.self_dual = m["self_dual"].get<bool>();
      }
      if (!doc.contains("coefficients"))
        throw ParseError("JSON object form requires a 'coefficients' array");
      rows = &doc["coefficients"];
    }
    if (!rows->is_array()) throw ParseError("JSON coefficients must be an array of rows");
    std::vector<std::complex<double>> values;
    values.reserve(rows->size());
    for (const auto& row : *rows) {
      if (!row.is_array() || row.size() < 2 || row.size() > 3)
        throw ParseError("JSON rows must be [n, re] or [n, re, im]");
      long n = row[0].get<long>();
      long expected = static_cast<long>(values.size()) + 1;
      if (n > expected)
        throw MissingIndex("lambda(" + std::to_string(expected) + ") is missing (JSON jumps to n = " +
                           std::to_string(n) + ")");
      if (n < expected)
        throw ParseError("JSON index " + std::to_string(n) + " repeats or decreases (expected " +
                         std::to_string(expected) + ")");
      double re = row[1].get<double>();
      double im = row.size() == 3 ? row[2].get<double>() : 0.0;
      values.emplace_back(re, im);
    }
    if (values.empty()) throw MissingIndex("no coefficient rows found; lambda(1) is required");
    return FourierCoefficientTable(std::move(values), meta);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("JSON structure error: ") + e.what());
  }
}

enum class TableFormat { auto_detect, csv, json };

inline FourierCoefficientTable load_table(const std::string& path,
                                          TableFormat fmt = TableFormat::auto_detect) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open coefficient file '" + path + "'");
  if (fmt == TableFormat::auto_detect) {
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    fmt = (ext == "json") ? TableFormat::json : TableFormat::csv;
  }
  return fmt == TableFormat::json ? parse_json(in) : parse_csv(in);
}

inline void write_csv(const FourierCoefficientTable& table, std::ostream& out) {
  out << "n,re,im\n";
  const auto& v = table.values();
  for (size_t i = 0; i < v.size(); ++i)
    out << (i + 1) << ',' << fmtio::num(v[i].real()) << ',' << fmtio::num(v[i].imag()) << '\n';
}

inline void write_json(const FourierCoefficientTable& table, std::ostream& out) {
  // emitted by hand so numbers share the 17-digit CSV serializer byte for byte
  out << "{";
  const auto& meta = table.meta();
  bool any_meta = meta.claimed_level || meta.claimed_r || meta.self_dual;
  if (any_meta) {
    out << "\"meta\":{";
    bool first = true;
    auto sep = [&]() { out << (first ? "" : ","); first = false; };
    if (meta.claimed_level) { sep(); out << "\"claimed_level\":" << *meta.claimed_level; }
    if (meta.claimed_r) { sep(); out << "\"claimed_r\":" << fmtio::json_number(*meta.claimed_r); }
    if (meta.self_dual) { sep(); out << "\"self_dual\":" << (*meta.self_dual ? "true" : "false"); }
    out << "},";
  }
  out << "\"coefficients\":[";
  const auto& v = table.values();
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << '[' << (i + 1) << ',' << fmtio::json_number(v[i].real()) << ','
        << fmtio::json_number(v[i].imag()) << ']';
  }
  out << "]}\n";
}

// Shared run parameters resolved by the CLI before any computation starts.
struct RunConfig {
  std::vector<double> x_grid;
  double quadrature_tol = 1e-10;
  int expansion_order = 1;

  void validate(const FourierCoefficientTable& table) const {
    if (x_grid.empty()) throw OutOfRange("empty X grid");
    if (!(quadrature_tol > 0.0)) throw OutOfRange("quadrature tolerance must be positive");
    if (expansion_order < 1) throw OutOfRange("expansion order must be >= 1");
    for (double x : x_grid) {
      if (!(x > 0.0)) throw OutOfRange("grid X values must be positive");
      long hi = static_cast<long>(std::ceil(2.0 * x)) - 1;
      if (hi > table.n_max())
        throw OutOfRange("X = " + fmtio::num(x) + " needs lambda(n) up to n = " +
                         std::to_string(hi) + " but the table ends at " +
                         std::to_string(table.n_max()));
    }
  }
};

}  // namespace resonator::ingest
