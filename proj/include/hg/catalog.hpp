#pragma once

#include <string>
#include <vector>

#include "hg/base_geometry.hpp"

namespace hg {

/// Generator parameters. Expression strings use the field grammar over
/// x1..x2n. Empty strings select the generator defaults.
struct CatalogParams {
  int n = 1;
  std::string f;                     // conformal-flat: conformal exponent
  std::vector<std::string> A, B;     // norden-block: n*n row-major, symmetric
  std::string preset;                // norden-block: named (A, B) pair
  DomainBox domain;
};

/// flat-standard(n):      g = diag(1_n, -1_n)
/// conformal-flat(n, f):  g = exp(2f) diag(1_n, -1_n), default f = x1^2/2
/// norden-block(n, A, B): g = [[A, B], [B, -A]]
/// J is the standard structure in every case.
BaseGeometry builtin(const std::string& name, const CatalogParams& params = {});

/// Generator names accepted by builtin().
std::vector<std::string> generator_names();
/// Preset names accepted by norden-block.
std::vector<std::string> norden_presets();

/// One flag the theorem suite and tests expect on an entry.
struct ExpectedProperty {
  std::string scope;  // "base" or "bundle"
  std::string flag;
  bool value = true;
};

struct CatalogEntry {
  std::string label;      // unique, addressable from the CLI
  std::string generator;  // builtin() name
  CatalogParams params;
  std::string description;
  bool flat = false;      // base curvature quadrant
  bool parallel = false;  // F = 0 quadrant
  std::vector<ExpectedProperty> expected;

  BaseGeometry build() const { return builtin(generator, params); }
};

/// The fixed suite used by the acceptance tests and `verify --catalog all`.
std::vector<CatalogEntry> catalog_suite();
const std::vector<ExpectedProperty>& expected_properties(const CatalogEntry& entry);
/// Entry by label; a bare generator name resolves to its default entry.
/// Throws std::invalid_argument for unknown names.
CatalogEntry catalog_entry(const std::string& label, int n = 0);

}  // namespace hg
