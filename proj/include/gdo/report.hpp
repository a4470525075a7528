#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "gdo/common.hpp"

namespace gdo {

// Most entries assert residual <= tolerance. A few checks assert the
// opposite (a deviation that the theory says must NOT vanish, e.g. the
// Bogoliubov failure): those use at_least, where the entry passes when
// residual > tolerance.
enum class CheckDirection { at_most, at_least };

struct CheckEntry {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  CheckDirection direction = CheckDirection::at_most;
  bool pass = false;
  bool boundary_excluded = false;
};

struct CheckReport {
  std::vector<CheckEntry> entries;

  CheckEntry& add(std::string name, double residual, double tolerance,
                  bool boundary_excluded = false) {
    CheckEntry e;
    e.name = std::move(name);
    e.residual = residual;
    e.tolerance = tolerance;
    e.boundary_excluded = boundary_excluded;
    e.pass = residual <= tolerance;
    entries.push_back(std::move(e));
    return entries.back();
  }

  CheckEntry& add_at_least(std::string name, double value, double threshold) {
    CheckEntry e;
    e.name = std::move(name);
    e.residual = value;
    e.tolerance = threshold;
    e.direction = CheckDirection::at_least;
    e.pass = value > threshold;
    entries.push_back(std::move(e));
    return entries.back();
  }

  void merge(const CheckReport& other, const std::string& prefix = "") {
    for (const auto& e : other.entries) {
      entries.push_back(e);
      if (!prefix.empty()) entries.back().name = prefix + entries.back().name;
    }
  }

  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }

  const CheckEntry* find(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name) return &e;
    return nullptr;
  }

  double residual_of(const std::string& name) const {
    const CheckEntry* e = find(name);
    if (!e) throw Error("CheckReport: no entry named '" + name + "'");
    return e->residual;
  }
};

enum class ReportFormat { json, csv, text };

inline ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "text") return ReportFormat::text;
  throw Error("unknown report format '" + s + "' (expected json|csv|text)");
}

namespace detail {

inline std::string fmt_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Deterministic rendering: stable key order, fixed %.15e float format, so
// identical reports serialize byte-identically.
inline std::string report_render(const CheckReport& report, ReportFormat format) {
  using detail::fmt_float;
  using detail::json_escape;
  std::string out;
  switch (format) {
    case ReportFormat::json: {
      out += "{\"entries\":[";
      for (std::size_t k = 0; k < report.entries.size(); ++k) {
        const auto& e = report.entries[k];
        if (k) out += ",";
        out += "{\"name\":\"" + json_escape(e.name) + "\"";
        out += ",\"residual\":" + fmt_float(e.residual);
        out += ",\"tolerance\":" + fmt_float(e.tolerance);
        out += std::string(",\"comparison\":\"") +
               (e.direction == CheckDirection::at_most ? "at_most" : "at_least") + "\"";
        out += std::string(",\"pass\":") + (e.pass ? "true" : "false");
        out += std::string(",\"boundary_excluded\":") + (e.boundary_excluded ? "true" : "false");
        out += "}";
      }
      out += "]}";
      return out;
    }
    case ReportFormat::csv: {
      out += "name,residual,tolerance,comparison,pass,boundary_excluded\n";
      for (const auto& e : report.entries) {
        std::string name = e.name;
        for (char& c : name)
          if (c == ',') c = ';';
        out += name + "," + fmt_float(e.residual) + "," + fmt_float(e.tolerance) + "," +
               (e.direction == CheckDirection::at_most ? "at_most" : "at_least") + "," +
               (e.pass ? "true" : "false") + "," + (e.boundary_excluded ? "true" : "false") + "\n";
      }
      return out;
    }
    case ReportFormat::text: {
      for (const auto& e : report.entries) {
        out += (e.pass ? "PASS " : "FAIL ");
        out += e.name + "  residual=" + fmt_float(e.residual) +
               (e.direction == CheckDirection::at_most ? " <= " : " > ") + fmt_float(e.tolerance);
        if (e.boundary_excluded) out += "  [boundary rows excluded]";
        out += "\n";
      }
      return out;
    }
  }
  throw Error("report_render: unknown format");
}

}  // namespace gdo
