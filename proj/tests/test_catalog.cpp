#include <set>

#include "doctest.h"
#include "hg/analysis.hpp"
#include "hg/catalog.hpp"
#include "hg/errors.hpp"

using namespace hg;

TEST_SUITE("catalog") {

TEST_CASE("every entry validates and labels are unique") {
  std::set<std::string> labels;
  for (const auto& e : catalog_suite()) {
    CHECK(labels.insert(e.label).second);
    const BaseGeometry b = e.build();
    CHECK_MESSAGE(validate_base(b, {.points = 32, .tuples = 1, .seed = 3}).valid, e.label);
    CHECK(catalog_entry(e.label).label == e.label);
  }
}

TEST_CASE("both dimensions are represented") {
  std::set<int> ns;
  for (const auto& e : catalog_suite()) ns.insert(e.params.n);
  CHECK(ns == std::set<int>{1, 2});
}

TEST_CASE("hypothesis quadrants are all covered and labelled truthfully") {
  std::set<std::pair<bool, bool>> seen;
  for (const auto& e : catalog_suite()) {
    seen.insert({e.flat, e.parallel});
    const ClassificationReport r = classify_base(e.build());
    CHECK_MESSAGE(r.get("flat").holds() == e.flat, e.label);
    CHECK_MESSAGE(r.get("W0").holds() == e.parallel, e.label);
  }
  for (bool flat : {false, true})
    for (bool parallel : {false, true}) CHECK_MESSAGE(seen.count({flat, parallel}) == 1, flat << parallel);
}

TEST_CASE("expected properties hold") {
  for (const auto& e : catalog_suite()) {
    const BaseGeometry base = e.build();
    const ClassificationReport b = classify_base(base);
    const ClassificationReport t = classify_bundle(BundleStructure(base));
    CHECK_FALSE(expected_properties(e).empty());
    for (const auto& p : expected_properties(e)) {
      const ClassificationReport& r = p.scope == "base" ? b : t;
      const ClassFlag& f = r.get(p.flag);
      CHECK_MESSAGE((p.value ? f.holds() : f.fails()), e.label << " " << p.scope << "." << p.flag);
    }
  }
}

TEST_CASE("generator examples") {
  const ClassificationReport fs = classify_base(builtin("flat-standard", {.n = 2}));
  CHECK(fs.get("W0").holds());
  CHECK(fs.get("flat").holds());
  CHECK(fs.get("theta_zero").holds());

  const BaseGeometry cf = builtin("conformal-flat", {.n = 1, .f = "x1"});
  CHECK(validate_base(cf).valid);

  const ClassificationReport nb = classify_base(builtin("norden-block", {.n = 2, .A = {"1+x1^2", "0", "0", "1"}, .B = {"0", "0", "0", "0"}}));
  CHECK(nb.get("theta_zero").fails());
  CHECK(nb.get("flat").fails());
}

TEST_CASE("norden-block is skew-Hermitian by construction") {
  const BaseGeometry b = builtin("norden-block", {.n = 2, .A = {"1+x1^2", "x2", "x2", "2"}, .B = {"x3", "0", "0", "x1*x4"}});
  const Mat J = b.complex_structure();
  Sampler rng(1);
  for (int t = 0; t < 16; ++t) {
    const Mat g = b.metric_at(rng.point(4, b.domain()));
    CHECK((J.transpose() * g * J + g).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("generator errors") {
  CHECK_THROWS_AS(builtin("norden-block", {.n = 2, .A = {"1", "x1", "0", "1"}, .B = {"0", "0", "0", "0"}}), GeometryError);
  CHECK_THROWS_AS(builtin("norden-block", {.n = 1, .A = {"0"}, .B = {"0"}}), GeometryError);
  CHECK_THROWS_AS(builtin("conformal-flat", {.n = 1, .f = "x1 +"}), ParseError);
  CHECK_THROWS_AS(builtin("no-such-thing", {}), std::invalid_argument);
  CHECK_THROWS_AS(catalog_entry("no-such-thing"), std::invalid_argument);
  CHECK_THROWS_AS(builtin("norden-block", {.n = 1, .preset = "holomorphic-hyperbolic"}), std::invalid_argument);
}

TEST_CASE("generator names resolve to default entries") {
  for (const auto& g : generator_names()) {
    CHECK(catalog_entry(g).generator == g);
    CHECK(catalog_entry(g, 2).params.n == 2);
  }
  for (const auto& p : norden_presets()) CHECK_NOTHROW(catalog_entry(p == "default" ? "norden-block" : p));
}

}  // TEST_SUITE
