#include <cmath>
#include <cstring>
#include <stdexcept>

#include "doctest.h"
#include "hg/catalog.hpp"
#include "hg/errors.hpp"
#include "hg/sampling.hpp"
#include "hg/scalar_field.hpp"
#include "oracles.hpp"

using namespace hg;

TEST_SUITE("field") {

TEST_CASE("parse and evaluate small expressions") {
  CHECK(evaluate(parse_field("x1^2 + sin(x2)", 2), Point{1, 0}) == 1.0);
  CHECK(evaluate(parse_field("x1^2 + sin(x2)", 2), Point{2, 0}) == 4.0);
  CHECK(evaluate(parse_field("exp(2*x1)", 4), Point{0, 3, 4, 5}) == 1.0);
  CHECK(evaluate(parse_field("exp(2*x1)", 4), Point{0.5, 0, 0, 0}) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(evaluate(parse_field("  cosh( x1 ) -sinh(x1)*1 ", 1), Point{0.3}) == doctest::Approx(std::exp(-0.3)));
  CHECK(evaluate(parse_field("2^3 - 10/4", 1), Point{0}) == 5.5);
  CHECK(evaluate(parse_field("-x1^2", 1), Point{3}) == -9.0);
  CHECK(evaluate(parse_field("1.5e1 + .5", 1), Point{0}) == 15.5);
}

TEST_CASE("syntax errors carry the byte offset") {
  try {
    parse_field("x1 +", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse_field("x1 + )", 2), ParseError);
  CHECK_THROWS_AS(parse_field("tan(x1)", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x1^0.5", 2), ParseError);
  CHECK_THROWS_AS(parse_field("x0", 2), ParseError);
  CHECK_THROWS_AS(parse_field("", 2), ParseError);
}

TEST_CASE("out-of-range coordinates and bad arity") {
  try {
    parse_field("x1 + x3", 2);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
  }
  CHECK_THROWS_AS(parse_field("x1", 0), std::invalid_argument);
  CHECK_THROWS_AS(differentiate(parse_field("x1", 2), 2), std::out_of_range);
  CHECK_THROWS_AS(differentiate(parse_field("x1", 2), -1), std::out_of_range);
}

TEST_CASE("domain errors are raised, never returned") {
  CHECK_THROWS_AS(evaluate(parse_field("1/x1", 2), Point{0, 0}), DomainError);
  CHECK_THROWS_AS(evaluate(parse_field("log(x1)", 1), Point{-1}), DomainError);
  CHECK_THROWS_AS(evaluate(parse_field("log(x1)", 1), Point{0}), DomainError);
  CHECK_THROWS_AS(evaluate(parse_field("exp(x1)", 1), Point{1000}), DomainError);
  try {
    evaluate(parse_field("1/(x1 - 0.25)", 2), Point{0.25, 7});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    REQUIRE(e.point().size() == 2);
    CHECK(e.point()[1] == 7.0);
  }
  const std::vector<ScalarField> out{parse_field("log(x1)", 1)};
  CHECK_THROWS_AS(FieldProgram(out, 1).evaluate(std::vector<double>{-2.0}), DomainError);
}

TEST_CASE("exact derivatives of polynomials") {
  CHECK(structurally_equal(differentiate(parse_field("x1*x2", 2), 0), parse_field("x2", 2)));
  CHECK(differentiate(parse_field("x1^2", 2), 1).is_zero());
  CHECK(structurally_equal(simplify(differentiate(parse_field("x1^3", 1), 0)), simplify(parse_field("3*x1^2", 1))));
  CHECK(structurally_equal(simplify(differentiate(parse_field("x1^2 + 5*x1*x2", 2), 1)),
                           simplify(parse_field("5*x1", 2))));
  CHECK(differentiate(parse_field("7", 3), 2).is_zero());
}

TEST_CASE("fourth derivative of exp(2 x1) at 0") {
  ScalarField f = parse_field("exp(2*x1)", 1);
  for (int k = 0; k < 4; ++k) f = differentiate(f, 0);
  const double exact = evaluate(f, Point{0});
  CHECK(exact == doctest::Approx(16.0).epsilon(1e-14));
  const double fd = oracle::nth_derivative([](double x) { return std::exp(2 * x); }, 0.0, 4, 1e-2);
  CHECK(std::abs(exact - fd) / 16.0 < 1e-4);
}

TEST_CASE("derivatives are closed under repeated application") {
  ScalarField f = parse_field("sin(x1)*cosh(x2) + log(2 + x1*x2) + (x1 - x2)^3/(1 + x1^2)", 2);
  Sampler rng(5);
  for (int order = 1; order <= 5; ++order) f = differentiate(f, order % 2);
  for (int i = 0; i < 8; ++i) CHECK(std::isfinite(evaluate(f, Point(rng.point(2, {-0.5, 0.5})))));
}

TEST_CASE("linearity of differentiation") {
  const ScalarField f = parse_field("sin(x1*x2) + x1^3", 2);
  const ScalarField g = parse_field("exp(x2)/(2 + cos(x1))", 2);
  Sampler rng(11);
  for (int t = 0; t < 32; ++t) {
    const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
    const Point p(rng.point(2, {-1, 1}));
    for (int k = 0; k < 2; ++k) {
      const double lhs = evaluate(differentiate(a * f + b * g, k), p);
      const double rhs = a * evaluate(differentiate(f, k), p) + b * evaluate(differentiate(g, k), p);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("Clairaut symmetry of mixed partials") {
  const ScalarField f = parse_field("exp(x1*x2)*sin(x3) + x1^4*x3/(3 + x2^2) + sinh(x1 - x3)", 3);
  Sampler rng(3);
  for (int t = 0; t < 32; ++t) {
    const Point p(rng.point(3, {-1, 1}));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double a = evaluate(differentiate(differentiate(f, i), j), p);
        const double b = evaluate(differentiate(differentiate(f, j), i), p);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
      }
  }
}

TEST_CASE("exact derivatives match finite differences for every catalog field") {
  Sampler rng(17);
  for (const auto& entry : catalog_suite()) {
    const BaseGeometry base = entry.build();
    const int m = base.dim();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const ScalarField& g = base.metric(i, j);
        for (int t = 0; t < 4; ++t) {
          const auto p = rng.point(m, {0.8 * base.domain().lo, 0.8 * base.domain().hi});
          for (int k = 0; k < m; ++k) {
            const double exact = evaluate(differentiate(g, k), Point(p));
            const double fd = oracle::d([&](const std::vector<double>& q) { return evaluate(g, Point(q)); }, p, k);
            CHECK_MESSAGE(std::abs(exact - fd) <= 1e-6 * std::max(1.0, std::abs(exact)), entry.label);
          }
        }
      }
  }
}

TEST_CASE("evaluation is deterministic and matches compiled programs") {
  const ScalarField f = parse_field("exp(sin(x1) * x2) / (1.5 + cos(x1 * x2)) - x2^7", 2);
  const std::vector<ScalarField> outs{f, differentiate(f, 0)};
  const FieldProgram prog(outs, 2);
  Sampler rng(23);
  for (int t = 0; t < 16; ++t) {
    const auto p = rng.point(2, {-2, 2});
    const double a = evaluate(f, Point(p)), b = evaluate(f, Point(p));
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
    const auto v = prog.evaluate(p);
    CHECK(v[0] == doctest::Approx(a).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(evaluate(differentiate(f, 0), Point(p))).epsilon(1e-14));
  }
}

TEST_CASE("to_string round-trips through the parser") {
  const ScalarField f = parse_field("x1^2*exp(-x2) - 3/(1 + x1) + cosh(x2)^2", 2);
  const ScalarField g = parse_field(f.to_string(), 2);
  Sampler rng(29);
  for (int t = 0; t < 8; ++t) {
    const Point p(rng.point(2, {-0.5, 0.5}));
    CHECK(evaluate(g, p) == doctest::Approx(evaluate(f, p)).epsilon(1e-14));
  }
}

TEST_CASE("fields are immutable under differentiation") {
  const ScalarField f = parse_field("x1*x2 + x1", 2);
  const std::string before = f.to_string();
  (void)differentiate(f, 0);
  (void)simplify(f);
  CHECK(f.to_string() == before);
}

}  // TEST_SUITE
