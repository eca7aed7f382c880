#include <cmath>

#include "doctest.h"
#include "hg/catalog.hpp"
#include "hg/classification.hpp"
#include "hg/errors.hpp"
#include "hg/frames.hpp"
#include "hg/local_geometry.hpp"
#include "oracles.hpp"

using namespace hg;

namespace {

FieldMatrix parse_matrix(const std::vector<std::string>& src, int dim) {
  FieldMatrix g(dim, 2, ScalarField::constant(0.0, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = parse_field(src[static_cast<std::size_t>(i * dim + j)], dim);
  return g;
}

// e^{2 x1} diag(1, -1) with the standard J
BaseGeometry conformal_base() {
  return BaseGeometry(1, parse_matrix({"exp(2*x1)", "0", "0", "-exp(2*x1)"}, 2),
                      BaseGeometry::standard_complex_structure(1), {}, "conformal");
}

oracle::MatFn numeric_metric(const BaseGeometry& b) {
  return [&b](const std::vector<double>& p) { return b.metric_at(p); };
}

std::vector<std::vector<double>> points(int dim, int count, std::uint64_t seed, DomainBox box = {}) {
  Sampler rng(seed);
  std::vector<std::vector<double>> out;
  for (int i = 0; i < count; ++i) out.push_back(rng.point(dim, box));
  return out;
}

}  // namespace

TEST_SUITE("base") {

TEST_CASE("validate_base on the standard examples") {
  const BaseGeometry flat = builtin("flat-standard", {.n = 2});
  const ValidationReport r = validate_base(flat);
  CHECK(r.valid);
  CHECK(r.j_square_residual == 0.0);
  CHECK(r.compatibility_residual == 0.0);
  CHECK(r.symmetry_residual == 0.0);
  const Mat J = flat.complex_structure();
  CHECK(J(2, 0) == 1.0);
  CHECK(J(3, 1) == 1.0);
  CHECK(J(0, 2) == -1.0);

  const BaseGeometry riemannian(2, parse_matrix({"1", "0", "0", "0", "0", "1", "0", "0", "0", "0", "1", "0", "0", "0", "0", "1"}, 4),
                                BaseGeometry::standard_complex_structure(2));
  const ValidationReport bad = validate_base(riemannian);
  CHECK_FALSE(bad.valid);
  CHECK(bad.compatibility_residual == doctest::Approx(2.0));
  CHECK_THROWS_AS(require_valid(bad), GeometryError);

  const ValidationReport nb = validate_base(builtin("norden-block", {.n = 2}), {.points = 32, .tuples = 1, .seed = 9});
  CHECK(nb.valid);
  CHECK(nb.samples == 32);
  CHECK(nb.compatibility_residual <= 1e-10);
}

TEST_CASE("validate_base fails fast on J^2 != -I") {
  Mat J = BaseGeometry::standard_complex_structure(1);
  J(0, 1) = -2.0;
  const BaseGeometry b(1, parse_matrix({"1", "0", "0", "-1"}, 2), J);
  const ValidationReport r = validate_base(b);
  CHECK_FALSE(r.valid);
  CHECK(r.j_square_residual > 0.5);
}

TEST_CASE("validate_base rejects degenerate and wrongly signed metrics") {
  const BaseGeometry degenerate(1, parse_matrix({"x1", "0", "0", "-x1"}, 2), BaseGeometry::standard_complex_structure(1),
                                {-0.5, 0.5});
  CHECK(validate_base(degenerate).valid);  // only a measure-zero set is degenerate
  const BaseGeometry zero(1, parse_matrix({"0", "0", "0", "0"}, 2), BaseGeometry::standard_complex_structure(1));
  CHECK_FALSE(validate_base(zero).valid);
}

TEST_CASE("constant metrics have vanishing connection and curvature") {
  const BaseGeometry flat = builtin("flat-standard", {.n = 2});
  const JetGeometry jets(flat.metric(), 3);
  for (const auto& p : points(4, 4, 1)) {
    const LocalGeometry lg = jets.at(p);
    CHECK(oracle::max_abs(lg.gamma) == 0.0);
    CHECK(oracle::max_abs(lg.riemann) == 0.0);
    CHECK(oracle::max_abs(lg.nabla_riemann) == 0.0);
  }
  CurvatureBundle cb = curvature(flat);
  const CurvatureEvaluator ev(cb);
  const LocalGeometry lg = ev.at(points(4, 1, 2)[0]);
  CHECK(oracle::max_abs(lg.gamma) == 0.0);
  for (const auto& f : cb.rho.data()) CHECK(f.is_zero());
  for (const auto& f : cb.rho_tilde.data()) CHECK(f.is_zero());
}

TEST_CASE("Christoffel symbols match the finite-difference Koszul oracle") {
  const BaseGeometry b = conformal_base();
  const CurvatureEvaluator sym(christoffel(b));
  const JetGeometry jets(b.metric(), 1);
  for (const auto& p : points(2, 16, 3)) {
    const auto G = oracle::gamma(numeric_metric(b), p);
    CHECK(oracle::max_rel_diff(sym.at(p).gamma, G) <= 1e-6);
    CHECK(oracle::max_rel_diff(jets.at(p).gamma, G) <= 1e-6);
  }
}

TEST_CASE("torsion-free and metric-compatible connection") {
  for (const auto& e : catalog_suite()) {
    const BaseGeometry b = e.build();
    const CurvatureBundle cb = christoffel(b);
    const int m = b.dim();
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) CHECK(structurally_equal(cb.gamma(k, i, j), cb.gamma(k, j, i)));
    const JetGeometry jets(b.metric(), 1);
    for (const auto& p : points(m, 4, 5)) {
      const LocalGeometry lg = jets.at(p);
      for (int k = 0; k < m; ++k) {
        const Mat dg = oracle::dmat(numeric_metric(b), p, k);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) {
            double v = dg(i, j);
            for (int l = 0; l < m; ++l) v -= lg.gamma(l, k, i) * lg.g(l, j) + lg.gamma(l, k, j) * lg.g(i, l);
            CHECK_MESSAGE(std::abs(v) <= 1e-9, e.label);
          }
      }
    }
  }
}

TEST_CASE("Riemann tensor: oracle values, antisymmetries and first Bianchi") {
  const BaseGeometry b = conformal_base();
  const JetGeometry jets(b.metric(), 2);
  const CurvatureEvaluator sym(riemann(christoffel(b)));
  for (const auto& p : points(2, 16, 7)) {
    const LocalGeometry lg = jets.at(p);
    CHECK(oracle::max_rel_diff(lg.riemann, oracle::riemann(numeric_metric(b), p)) <= 1e-6);
    CHECK(oracle::max_rel_diff(sym.at(p).riemann, lg.riemann) <= 1e-12);
  }
  for (const auto& e : catalog_suite()) {
    const BaseGeometry base = e.build();
    const int m = base.dim();
    const JetGeometry j2(base.metric(), 2);
    for (const auto& p : points(m, 4, 8)) {
      const Tensor<double>& R = j2.at(p).riemann;
      double worst = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, i, k, l)));
              worst = std::max(worst, std::abs(R(i, j, k, l) + R(i, j, l, k)));
              worst = std::max(worst, std::abs(R(i, j, k, l) - R(k, l, i, j)));
              worst = std::max(worst, std::abs(R(i, j, k, l) + R(j, k, i, l) + R(k, i, j, l)));
            }
      CHECK_MESSAGE(worst <= 1e-9, e.label);
    }
  }
}

TEST_CASE("round sphere has sectional curvature 1") {
  // positive definite, so only the curvature engine is exercised
  FieldMatrix g(2, 2, ScalarField::constant(0.0, 2));
  g(0, 0) = ScalarField::constant(1.0, 2);
  g(1, 1) = parse_field("sin(x1)^2", 2);
  const CurvatureEvaluator ev(riemann(christoffel(g)));
  const JetGeometry jets(g, 2);
  Sampler rng(31);
  for (int t = 0; t < 16; ++t) {
    const std::vector<double> p{rng.uniform(0.4, 2.7), rng.uniform(-3, 3)};
    for (const LocalGeometry& lg : {ev.at(p), jets.at(p)}) {
      const Vec X = rng.vector(2), Y = rng.vector(2);
      const double area = lg.inner(X, X) * lg.inner(Y, Y) - std::pow(lg.inner(X, Y), 2);
      CHECK(lg.curvature4(X, Y, Y, X) / area == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("covariant derivative of the curvature") {
  const BaseGeometry b = conformal_base();
  const JetGeometry j3(b.metric(), 3);
  const JetGeometry j2(b.metric(), 2);
  const CurvatureEvaluator sym(nabla_riemann(riemann(christoffel(b))));
  const int m = 2;
  for (const auto& p : points(m, 8, 13)) {
    const LocalGeometry lg = j3.at(p);
    CHECK(oracle::max_rel_diff(sym.at(p).nabla_riemann, lg.nabla_riemann) <= 1e-12);
    // oracle: difference the exact R, then subtract the connection terms
    Tensor<double> oracle_nr(m, 5, 0.0);
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) {
              double v = oracle::d([&](const std::vector<double>& q) { return j2.at(q).riemann(i, j, k, l); }, p, a);
              for (int s = 0; s < m; ++s) {
                v -= lg.gamma(s, a, i) * lg.riemann(s, j, k, l) + lg.gamma(s, a, j) * lg.riemann(i, s, k, l) +
                     lg.gamma(s, a, k) * lg.riemann(i, j, s, l) + lg.gamma(s, a, l) * lg.riemann(i, j, k, s);
              }
              oracle_nr(a, i, j, k, l) = v;
            }
    CHECK(oracle::max_rel_diff(lg.nabla_riemann, oracle_nr) <= 1e-5);
  }
  for (const auto& e : catalog_suite()) {
    const BaseGeometry base = e.build();
    const int n = base.dim();
    const JetGeometry jets(base.metric(), 3);
    for (const auto& p : points(n, 3, 14)) {
      const Tensor<double>& NR = jets.at(p).nabla_riemann;
      double worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) worst = std::max(worst, std::abs(NR(a, i, j, k, l) + NR(i, j, a, k, l) + NR(j, a, i, k, l)));
      CHECK_MESSAGE(worst <= 1e-8, e.label);
      if (e.flat) CHECK(oracle::max_abs(NR) == 0.0);
    }
  }
}

TEST_CASE("Ricci tensors") {
  const BaseGeometry b = conformal_base();
  const CurvatureBundle cb = ricci_tensors(riemann(christoffel(b)), b.complex_structure());
  const JetGeometry jets(b.metric(), 2);
  for (const auto& p : points(2, 8, 19)) {
    const LocalGeometry lg = jets.at(p);
    const Mat J = b.complex_structure();
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        // ρ(y, z) = R^i_{i y z}, ρ̃(y, z) = g^ij R(e_i, y, z, J e_j)
        double trace = 0.0;
        for (int i = 0; i < 2; ++i) trace += lg.riemann_up(i, i, y, z);
        double tilde = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) tilde += lg.ginv(i, j) * J(k, j) * lg.riemann(i, y, z, k);
        const double rho = evaluate(cb.rho(y, z), Point(p));
        const double rt = evaluate(cb.rho_tilde(y, z), Point(p));
        CHECK(std::abs(rho - trace) <= 1e-8 * std::max(1.0, std::abs(trace)));
        CHECK(std::abs(rt - tilde) <= 1e-8 * std::max(1.0, std::abs(tilde)));
        CHECK(std::abs(rho - evaluate(cb.rho(z, y), Point(p))) <= 1e-9);
      }
  }
  // ρ symmetric on every catalog entry
  for (const auto& e : catalog_suite()) {
    const BaseGeometry base = e.build();
    const CurvatureBundle c = ricci_tensors(riemann(christoffel(base)), base.complex_structure());
    const int m = base.dim();
    for (const auto& p : points(m, 3, 20))
      for (int y = 0; y < m; ++y)
        for (int z = 0; z < m; ++z)
          CHECK(std::abs(evaluate(c.rho(y, z), Point(p)) - evaluate(c.rho(z, y), Point(p))) <= 1e-9);
  }
}

TEST_CASE("structural tensor against the covariant derivative of the associated metric") {
  for (const auto& e : catalog_suite()) {
    const BaseGeometry base = e.build();
    const int m = base.dim();
    const Mat J = base.complex_structure();
    const StructuralData sd = structural_data(base, christoffel(base));
    auto gt = [&](const std::vector<double>& q) { return Mat(base.metric_at(q) * J); };  // g̃_ij = g(∂i, J∂j)
    for (const auto& p : points(m, 4, 21)) {
      const auto G = oracle::gamma(numeric_metric(base), p);
      const Mat g = gt(p);
      double scale = 1.0, worst = 0.0, sym = 0.0;
      for (int i = 0; i < m; ++i) {
        const Mat dg = oracle::dmat(gt, p, i);
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            // (∇_i g̃)(k, j) = F(i, j, k)
            double v = dg(k, j);
            for (int l = 0; l < m; ++l) v -= G(l, i, k) * g(l, j) + G(l, i, j) * g(k, l);
            const double F = evaluate(sd.F(i, j, k), Point(p));
            scale = std::max(scale, std::abs(F));
            worst = std::max(worst, std::abs(F - v));
            sym = std::max(sym, std::abs(F - evaluate(sd.F(i, k, j), Point(p))));
          }
      }
      CHECK_MESSAGE(worst / scale <= 1e-6, e.label);
      CHECK_MESSAGE(sym <= 1e-9, e.label);
    }
  }
}

TEST_CASE("Lie form: coordinate contraction equals the signed frame sum") {
  for (const auto& e : catalog_suite()) {
    const BaseGeometry base = e.build();
    const int m = base.dim();
    const StructuralData sd = structural_data(base, christoffel(base));
    const JetGeometry jets(base.metric(), 1);
    Sampler rng(37);
    for (const auto& p : points(m, 4, 22)) {
      const LocalGeometry lg = jets.at(p);
      const OrthonormalFrame fr = gram_schmidt(lg.g, rng);
      CHECK(frame_residual(lg.g, fr) <= 1e-10);
      const Tensor<double> F = structural_tensor(lg, base.complex_structure());
      for (int z = 0; z < m; ++z) {
        double s = 0.0;
        for (int a = 0; a < m; ++a) {
          const Vec ea = fr.vectors.col(a);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) s += fr.signs[static_cast<std::size_t>(a)] * ea(i) * ea(j) * F(i, j, z);
        }
        CHECK_MESSAGE(std::abs(s - evaluate(sd.theta[static_cast<std::size_t>(z)], Point(p))) <= 1e-9, e.label);
      }
    }
  }
}

TEST_CASE("Norden frames have the signs (+..+, -..-) and pair e with Je") {
  const BaseGeometry base = builtin("norden-block", {.n = 2});
  const JetGeometry jets(base.metric(), 1);
  Sampler rng(41);
  for (const auto& p : points(4, 8, 23)) {
    const Mat g = jets.at(p).g;
    const OrthonormalFrame fr = norden_frame(g, base.complex_structure(), rng);
    CHECK(frame_residual(g, fr) <= 1e-10);
    CHECK(fr.signs == std::vector<int>{1, 1, -1, -1});
    CHECK((fr.vectors.col(2) - base.complex_structure() * fr.vectors.col(0)).norm() <= 1e-12);
  }
}

TEST_CASE("conformal Norden base: theta is 2n df(J .)") {
  // g = e^{2f} η; the Lie form is proportional to df composed with J
  for (int n : {1, 2}) {
    const std::string f = n == 1 ? "x1^2/2 + x1*x2/3" : "x1^2/2 + x2*x3/3 - x4/5";
    const BaseGeometry base = builtin("conformal-flat", {.n = n, .f = f});
    const StructuralData sd = structural_data(base, christoffel(base));
    const ScalarField fs = parse_field(f, 2 * n);
    const Mat J = base.complex_structure();
    for (const auto& p : points(2 * n, 16, 24)) {
      Vec df(2 * n);
      for (int k = 0; k < 2 * n; ++k)
        df(k) = oracle::d([&](const std::vector<double>& q) { return evaluate(fs, Point(q)); }, p, k);
      const Vec expect = 2.0 * n * (J.transpose() * df);
      for (int z = 0; z < 2 * n; ++z)
        CHECK(std::abs(evaluate(sd.theta[static_cast<std::size_t>(z)], Point(p)) - expect(z)) <=
              1e-8 * std::max(1.0, expect.norm()));
    }
  }
}

TEST_CASE("classify_base examples") {
  const ClassificationReport flat = classify_base(builtin("flat-standard", {.n = 2}));
  for (const char* name : {"W0", "W1", "W2", "W3", "W23", "theta_zero", "flat", "rho_zero", "rho_tilde_zero"}) {
    CHECK_MESSAGE(flat.get(name).holds(), name);
    CHECK(flat.get(name).residual == 0.0);
  }
  const ClassificationReport conf = classify_base(conformal_base());
  CHECK(conf.get("W1").residual <= 1e-8);
  CHECK(conf.get("W3").residual > 0.01);
  CHECK(conf.get("W0").fails());
  const ClassificationReport nb = classify_base(builtin("norden-block", {.n = 2}));
  CHECK(nb.get("W23").fails());
  CHECK(nb.get("theta_zero").fails());
}

TEST_CASE("classification is invariant under constant rescaling of g") {
  for (const auto& e : catalog_suite()) {
    const BaseGeometry base = e.build();
    FieldMatrix g = base.metric();
    for (auto& c : g.data()) c = ScalarField::constant(3.0, base.dim()) * c;
    const BaseGeometry scaled(base.n(), g, base.complex_structure(), base.domain(), base.name());
    const ClassificationReport a = classify_base(base), b = classify_base(scaled);
    for (const auto& f : a.flags) {
      if (f.name == "flat" || f.name == "isotropic_curvature") continue;  // absolute / degenerate
      CHECK_MESSAGE(f.membership == b.get(f.name).membership, e.label << " " << f.name);
    }
  }
}

TEST_CASE("class inclusions W0 => W3 => W2+W3 are respected") {
  for (const auto& e : catalog_suite()) {
    const ClassificationReport r = classify_base(e.build());
    if (r.get("W0").holds()) CHECK(r.get("W3").holds());
    if (r.get("W3").holds()) CHECK(r.get("W23").holds());
    if (r.get("W0").holds()) CHECK(r.get("W1").holds());
    if (r.get("W0").holds()) CHECK(r.get("W2").holds());
  }
}

TEST_CASE("three-way thresholds") {
  const Thresholds t;
  CHECK(graded_flag("a", 1e-7, t).membership == Membership::Member);
  CHECK(graded_flag("a", 1e-4, t).membership == Membership::Inconclusive);
  CHECK(graded_flag("a", 1e-2, t).membership == Membership::NonMember);
  CHECK(absolute_flag("b", 1e-9, 1e-8).holds());
  CHECK(absolute_flag("b", 1e-7, 1e-8).fails());
}

}  // TEST_SUITE
