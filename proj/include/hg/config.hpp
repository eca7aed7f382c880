#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hg/base_geometry.hpp"
#include "hg/catalog.hpp"
#include "hg/sampling.hpp"

namespace hg {

/// Malformed configuration file. `line()` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Tolerances {
  double algebraic = 1e-9;
  double first_order = 1e-7;
  double second_order = 1e-5;
};

/// A manifold description read from an INI-style file:
///
///   [manifold]   name, n, J = standard | "a b ; c d" rows,
///                or catalog = NAME with optional f / preset / A / B
///   [metric]     gIJ = expression (1-based indices, gJI mirrors gIJ)
///   [domain]     lo, hi
///   [sampling]   points, tuples, seed
///   [tolerances] algebraic, first_order, second_order
struct ManifoldConfig {
  std::string name;
  int n = 1;
  std::vector<std::string> metric;  // 2n x 2n row-major, "" = 0
  std::optional<Eigen::MatrixXd> J;  // empty: standard
  std::string catalog;               // set: use builtin() instead of metric
  CatalogParams params;
  DomainBox domain;
  SamplingOptions sampling;
  Tolerances tolerances;
};

ManifoldConfig parse_config(const std::string& text);
ManifoldConfig load_config(const std::string& path);

/// Builds and validates the base. Expression errors become ConfigError
/// naming the entry.
BaseGeometry build_base(const ManifoldConfig& cfg);

}  // namespace hg
