#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hg/analysis.hpp"
#include "hg/config.hpp"
#include "json.hpp"

namespace hg {

struct RunSettings {
  SamplingOptions sampling;
  Tolerances tolerances;
  double tol_structural = 1e-6;
  double tol_lie = 1e-8;
  double tol_quaternionic = 1e-10;
  Thresholds thresholds;
};

AnalysisOptions analysis_options(const RunSettings& s);

struct Report {
  std::string command;  // "verify" or "classify"
  std::string subject;
  int n = 0;
  RunSettings settings;
  ValidationReport validation;
  ClassificationReport base;
  ClassificationReport bundle;
  std::optional<AnalysisResult> analysis;  // verify only
  std::vector<TheoremVerdict> theorems;    // verify only
  double seconds = 0.0;                    // text output only

  int failed_checks() const;
  int violated() const;
  /// 0 when every cross-check passes and no theorem is violated, else 1.
  int exit_code() const;
};

/// Validation, classification, cross-checks and theorem suite.
Report run_verify(const BaseGeometry& base, const RunSettings& settings);
/// Validation and both classifications.
Report run_classify(const BaseGeometry& base, const RunSettings& settings);

/// Deterministic JSON (schema_version 1, fixed key order, no timing).
nlohmann::ordered_json to_json(const Report& r);
std::string to_text(const Report& r);

/// Shared JSON encodings.
nlohmann::ordered_json to_json(const ClassificationReport& r);
nlohmann::ordered_json to_json(const CrossCheck& c);
nlohmann::ordered_json to_json(const TheoremVerdict& v);

/// Two-space indented JSON with every float printed to 17 significant digits.
std::string dump_json(const nlohmann::ordered_json& j);

/// Text form of a double as used in every report.
std::string format_number(double v);

}  // namespace hg
