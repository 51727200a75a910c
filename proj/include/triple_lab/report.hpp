#pragma once

// Serialization shared by the command-line tool: locale-independent number
// formatting, CSV/JSON tables, verification reports and run configuration.

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "triple_lab/extremal.hpp"
#include "triple_lab/gaussian.hpp"
#include "triple_lab/homodyne.hpp"

namespace triple_lab {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view tool_version = "1.0.0";

/// Nine significant digits, shortest form, lowercase exponent.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  if (res.ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

/// The double closest to format_number(v), so JSON output carries the same
/// nine digits.
inline double round_sig9(double v) {
  if (!std::isfinite(v)) return v;
  const std::string s = format_number(v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

inline Json json_number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return round_sig9(v);
}

enum class OutputFormat { csv, json };
enum class TolProfile { fast, strict };

inline OutputFormat parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format: " + std::string(s));
}

inline TolProfile parse_profile(std::string_view s) {
  if (s == "fast") return TolProfile::fast;
  if (s == "strict") return TolProfile::strict;
  throw std::invalid_argument("unknown tolerance profile: " + std::string(s));
}

struct RunConfig {
  double hbar = 1.0;
  int truncation = 128;
  std::uint64_t seed = 42;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> out;
  TolProfile profile = TolProfile::fast;

  void validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw std::invalid_argument("--hbar must be positive");
    if (truncation < 64) throw std::invalid_argument("--truncation must be at least 64");
  }
};

inline Json report_header(const RunConfig& c, std::string_view command) {
  Json h;
  h["tool"] = "triple_lab";
  h["version"] = tool_version;
  h["command"] = command;
  h["config"] = {{"hbar", json_number(c.hbar)},
                 {"truncation", c.truncation},
                 {"seed", c.seed},
                 {"format", c.format == OutputFormat::csv ? "csv" : "json"},
                 {"out", c.out ? Json(*c.out) : Json(nullptr)},
                 {"tol_profile", c.profile == TolProfile::fast ? "fast" : "strict"}};
  h["seed"] = c.seed;
  return h;
}

// ---------------------------------------------------------------------------
// Numeric tables

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table: row width mismatch");
    rows.push_back(std::move(row));
  }
};

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << t.columns[j];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_number(row[j]);
    os << '\n';
  }
}

inline Json table_json(const Table& t) {
  Json arr = Json::array();
  for (const auto& row : t.rows) {
    Json obj;
    for (std::size_t j = 0; j < row.size(); ++j) obj[t.columns[j]] = json_number(row[j]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

// ---------------------------------------------------------------------------
// Verification reports

struct Check {
  std::string name;
  std::string anchor;
  double value;
  double reference;
  double tolerance;
  bool pass;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool overall() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  /// |value - reference| ≤ tolerance.
  void close(std::string name, std::string anchor, double value, double reference, double tolerance) {
    const bool ok = std::isfinite(value) && std::abs(value - reference) <= tolerance;
    checks.push_back({std::move(name), std::move(anchor), value, reference, tolerance, ok});
  }

  /// value ≤ reference + tolerance.
  void at_most(std::string name, std::string anchor, double value, double reference, double tolerance) {
    const bool ok = std::isfinite(value) && value <= reference + tolerance;
    checks.push_back({std::move(name), std::move(anchor), value, reference, tolerance, ok});
  }

  /// value ≥ reference - tolerance.
  void at_least(std::string name, std::string anchor, double value, double reference, double tolerance) {
    const bool ok = std::isfinite(value) && value >= reference - tolerance;
    checks.push_back({std::move(name), std::move(anchor), value, reference, tolerance, ok});
  }

  /// Records a check that could not be evaluated.
  void failed(std::string name, std::string anchor, const std::string& what) {
    checks.push_back({std::move(name), std::move(anchor) + " [error: " + what + "]", std::nan(""), std::nan(""),
                      std::nan(""), false});
  }
};

inline void write_csv(std::ostream& os, const VerificationReport& r) {
  os << "name,anchor,value,reference,tolerance,pass\n";
  for (const auto& c : r.checks) {
    std::string anchor = c.anchor;
    for (char& ch : anchor)
      if (ch == ',' || ch == '"') ch = ';';
    os << c.name << ',' << anchor << ',' << format_number(c.value) << ',' << format_number(c.reference) << ','
       << format_number(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
  }
}

inline Json report_json(const VerificationReport& r, const RunConfig& cfg) {
  Json j = report_header(cfg, "verify");
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"anchor", c.anchor},
                      {"value", json_number(c.value)},
                      {"reference", json_number(c.reference)},
                      {"tolerance", json_number(c.tolerance)},
                      {"pass", c.pass}});
  j["checks"] = std::move(checks);
  j["overall_pass"] = r.overall();
  return j;
}

// ---------------------------------------------------------------------------
// Domain records

inline Json search_json(const SearchResult& r) {
  Json j;
  j["objective"] = to_string(r.objective);
  j["best_value"] = json_number(r.best_value);
  j["start_value"] = json_number(r.start_value);
  j["bound"] = json_number(objective_bound(r.objective, r.hbar));
  j["gap_to_bound"] = json_number(r.gap_to_bound);
  j["iterations"] = r.iterations;
  j["restarts"] = r.restarts;
  j["converged"] = r.converged;
  j["seed"] = r.seed;
  if (r.params)
    j["best_params"] = {{"gamma", json_number(r.params->gamma)},
                        {"theta", json_number(r.params->theta)},
                        {"alpha_re", json_number(r.params->alpha.real())},
                        {"alpha_im", json_number(r.params->alpha.imag())}};
  if (r.digest)
    j["best_state"] = {{"truncation", r.digest->dim},
                       {"mean_q", json_number(r.digest->mean_q)},
                       {"mean_p", json_number(r.digest->mean_p)},
                       {"cov_qq", json_number(r.digest->qq)},
                       {"cov_qp", json_number(r.digest->qp)},
                       {"cov_pp", json_number(r.digest->pp)},
                       {"overlap_xi0_centred", json_number(r.digest->overlap_xi)},
                       {"stationarity_residual", json_number(r.digest->stationarity)},
                       {"edge_weight", json_number(r.digest->edge_weight)}};
  return j;
}

inline Json homodyne_json(const HomodyneEstimate& e) {
  Json j;
  j["ci_method"] = e.ci_method;
  j["confidence"] = 0.95;
  j["samples_per_phase"] = e.samples_per_phase;
  j["seed"] = e.seed;
  Json phases = Json::array();
  for (const auto& p : e.phases)
    phases.push_back({{"phase", json_number(p.phase)},
                      {"mean", json_number(p.mean)},
                      {"variance", json_number(p.variance)},
                      {"ci_lo", json_number(p.ci_lo)},
                      {"ci_hi", json_number(p.ci_hi)}});
  j["phases"] = std::move(phases);
  if (e.triple) {
    j["var_q"] = json_number(*e.var_q);
    j["var_p"] = json_number(*e.var_p);
    j["var_r"] = json_number(*e.var_r);
    j["triple"] = json_number(*e.triple);
    j["triple_ci_lo"] = json_number(*e.triple_ci_lo);
    j["triple_ci_hi"] = json_number(*e.triple_ci_hi);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Contours

/// Area of {w ≥ level} for values sampled on a uniform grid, rows indexed
/// by q and columns by p. Each row contributes the chord between its two
/// interpolated crossings, so the region must be convex along p.
inline double contour_area(const std::vector<std::vector<double>>& w, double step, double level) {
  if (!(step > 0.0)) throw std::invalid_argument("contour_area: step must be positive");
  double area = 0.0;
  for (const auto& row : w) {
    std::size_t first = row.size();
    std::size_t last = 0;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j] >= level) {
        first = std::min(first, j);
        last = j;
      }
    if (first == row.size()) continue;
    if (first == 0 || last + 1 == row.size()) throw std::runtime_error("contour_area: contour leaves the grid");
    const double left = static_cast<double>(first) - (row[first] - level) / (row[first] - row[first - 1]);
    const double right = static_cast<double>(last) + (row[last] - level) / (row[last] - row[last + 1]);
    area += (right - left) * step * step;
  }
  if (!w.empty()) {
    for (double v : w.front())
      if (v >= level) throw std::runtime_error("contour_area: contour leaves the grid");
    for (double v : w.back())
      if (v >= level) throw std::runtime_error("contour_area: contour leaves the grid");
  }
  return area;
}

}  // namespace triple_lab
