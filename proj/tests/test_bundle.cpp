#include <cmath>

#include "doctest.h"
#include "hg/bundle.hpp"
#include "hg/catalog.hpp"
#include "oracles.hpp"

using namespace hg;

namespace {

Mat eval(const FieldMatrix& m, const std::vector<double>& p) {
  const int d = m.dim();
  Mat out(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out(i, j) = m(i, j).evaluate(p);
  return out;
}

Vec eval(const std::vector<ScalarField>& v, const std::vector<double>& p) {
  Vec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i].evaluate(p);
  return out;
}

std::vector<BundleStructure> catalog_bundles() {
  std::vector<BundleStructure> out;
  for (const auto& e : catalog_suite()) out.emplace_back(e.build());
  return out;
}

// Christoffel symbols of the base at the projection of a bundle point.
Tensor<double> base_gamma(const BaseGeometry& b, const std::vector<double>& p) {
  const std::vector<double> x(p.begin(), p.begin() + b.dim());
  return oracle::gamma([&](const std::vector<double>& q) { return b.metric_at(q); }, x);
}

}  // namespace

TEST_SUITE("bundle") {

TEST_CASE("induced chart naming and dimension") {
  const BundleStructure bs(builtin("flat-standard", {.n = 2}));
  CHECK(bs.dim() == 8);
  CHECK(bs.chart().dim() == 2 * bs.base().dim());
  CHECK(bs.chart().coordinate_name(0) == "x1");
  CHECK(bs.chart().coordinate_name(3) == "x4");
  CHECK(bs.chart().coordinate_name(4) == "y1");
  CHECK(bs.chart().coordinate_name(7) == "y4");
}

TEST_CASE("lifts of a coordinate field") {
  const BundleStructure flat(builtin("flat-standard", {.n = 2}));
  const Vec e1 = Vec::Unit(4, 0);
  const auto p = bundle_points(flat.base(), 3, 1)[2];
  const Vec h = eval(lift(flat, constant_field(e1, 4), LiftKind::Horizontal).components, p);
  CHECK(h == Vec::Unit(8, 0));

  for (auto& bs : catalog_bundles()) {
    const int m = bs.base_dim();
    const Vec x1 = Vec::Unit(m, 0);
    const auto pts = bundle_points(bs.base(), 4, 2);
    const LiftedVector v = lift(bs, constant_field(x1, m), LiftKind::Vertical);
    const LiftedVector hz = lift(bs, constant_field(x1, m), LiftKind::Horizontal);
    CHECK(v.kind == LiftKind::Vertical);
    CHECK(v.components.size() == static_cast<std::size_t>(2 * m));
    for (const auto& q : pts) {
      CHECK(eval(v.components, q) == Vec::Unit(2 * m, m));
      // horizontal fibre part -y^i Γ^k_{i1}
      const Tensor<double> G = base_gamma(bs.base(), q);
      const Vec hv = eval(hz.components, q);
      CHECK(hv.head(m) == x1);
      for (int k = 0; k < m; ++k) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s -= q[static_cast<std::size_t>(m + i)] * G(k, i, 0);
        CHECK(std::abs(hv(m + k) - s) <= 1e-8 * std::max(1.0, std::abs(s)));
      }
    }
  }
}

TEST_CASE("lifting rejects components of the wrong arity") {
  const BundleStructure bs(builtin("flat-standard", {}));
  CHECK_THROWS(lift(bs, constant_field(Vec::Ones(3), 3), LiftKind::Horizontal));
}

TEST_CASE("adapted frame") {
  const BundleStructure flat(builtin("flat-standard", {.n = 2}));
  for (const auto& p : bundle_points(flat.base(), 4, 3)) CHECK(flat.adapted_frame(p) == Mat::Identity(8, 8));
  for (auto& bs : catalog_bundles()) {
    const int m = bs.base_dim();
    for (const auto& p : bundle_points(bs.base(), 8, 4)) {
      const Mat E = bs.adapted_frame(p);
      CHECK(E.determinant() == doctest::Approx(1.0).epsilon(1e-12));
      const Mat pull = E.transpose() * eval(bs.g_hat(), p) * E;
      Mat D = Mat::Zero(2 * m, 2 * m);
      const Mat g = bs.base().metric_at(std::vector<double>(p.begin(), p.begin() + m));
      D.block(0, 0, m, m) = g;
      D.block(m, m, m, m) = g;
      CHECK_MESSAGE((pull - D).cwiseAbs().maxCoeff() <= 1e-9, bs.base().name());
    }
  }
}

TEST_CASE("Sasaki metric in induced coordinates") {
  for (auto& bs : catalog_bundles()) {
    const int m = bs.base_dim();
    for (const auto& p : bundle_points(bs.base(), 6, 5)) {
      const std::vector<double> x(p.begin(), p.begin() + m);
      const Mat g = bs.base().metric_at(x);
      const Tensor<double> G = base_gamma(bs.base(), p);
      Mat K = Mat::Zero(m, m);
      for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
          for (int a = 0; a < m; ++a) K(k, i) += G(k, i, a) * p[static_cast<std::size_t>(m + a)];
      Mat expect(2 * m, 2 * m);
      expect.block(0, 0, m, m) = g + K.transpose() * g * K;
      expect.block(0, m, m, m) = K.transpose() * g;
      expect.block(m, 0, m, m) = g * K;
      expect.block(m, m, m, m) = g;
      CHECK_MESSAGE((eval(bs.g_hat(), p) - expect).cwiseAbs().maxCoeff() <= 1e-8, bs.base().name());
    }
  }
  const BundleStructure flat(builtin("flat-standard", {.n = 2}));
  const Mat gh = eval(flat.g_hat(), bundle_points(flat.base(), 2, 6)[1]);
  Vec d(8);
  d << 1, 1, -1, -1, 1, 1, -1, -1;
  CHECK(gh == Mat(d.asDiagonal()));
}

TEST_CASE("frame consistency of lifted vectors") {
  Sampler rng(43);
  for (auto& bs : catalog_bundles()) {
    const int m = bs.base_dim();
    for (const auto& p : bundle_points(bs.base(), 6, 7)) {
      const Mat gh = eval(bs.g_hat(), p);
      const Mat E = bs.adapted_frame(p);
      const Mat g = bs.base().metric_at(std::vector<double>(p.begin(), p.begin() + m));
      for (int t = 0; t < 8; ++t) {
        const Vec X = rng.vector(m), Y = rng.vector(m);
        Vec xh = Vec::Zero(2 * m), yh = Vec::Zero(2 * m), xv = Vec::Zero(2 * m), yv = Vec::Zero(2 * m);
        xh.head(m) = X;
        yh.head(m) = Y;
        xv.tail(m) = X;
        yv.tail(m) = Y;
        xh = E * xh;
        yh = E * yh;
        xv = E * xv;
        yv = E * yv;
        const double gxy = X.dot(g * Y);
        CHECK(std::abs(xh.dot(gh * yh) - gxy) <= 1e-9);
        CHECK(std::abs(xv.dot(gh * yv) - gxy) <= 1e-9);
        CHECK(std::abs(xh.dot(gh * yv)) <= 1e-9);
      }
    }
  }
}

TEST_CASE("hypercomplex triple acts on lifts as prescribed") {
  for (auto& bs : catalog_bundles()) {
    const int m = bs.base_dim();
    const Mat J = bs.base().complex_structure();
    for (const auto& p : bundle_points(bs.base(), 6, 8)) {
      const Mat E = bs.adapted_frame(p);
      const Mat J1 = eval(bs.J(1), p), J2 = eval(bs.J(2), p), J3 = eval(bs.J(3), p);
      const Mat I = Mat::Identity(2 * m, 2 * m);
      for (int i = 0; i < m; ++i) {
        CHECK((J1 * E.col(i) - E.col(m + i)).norm() <= 1e-12);
        CHECK((J1 * E.col(m + i) + E.col(i)).norm() <= 1e-12);
        Vec jx = Vec::Zero(2 * m);
        // (J e_i)^H and (J e_i)^V in the adapted frame
        jx.head(m) = J.col(i);
        const Vec jh = E * jx;
        jx.setZero();
        jx.tail(m) = J.col(i);
        const Vec jv = E * jx;
        CHECK((J2 * E.col(i) - jv).norm() <= 1e-12);
        CHECK((J2 * E.col(m + i) - jh).norm() <= 1e-12);
        CHECK((J3 * E.col(i) + jh).norm() <= 1e-12);
        CHECK((J3 * E.col(m + i) - jv).norm() <= 1e-12);
      }
      CHECK((J1 * J1 + I).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((J2 * J2 + I).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((J3 * J3 + I).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((J1 * J2 - J3).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((J1 * J2 + J2 * J1).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("quaternionic report and signature on every catalog entry") {
  for (auto& bs : catalog_bundles()) {
    const auto pts = bundle_points(bs.base(), 16, 42);
    const int m = bs.base_dim();
    for (int i = m; i < 2 * m; ++i) CHECK(pts[0][static_cast<std::size_t>(i)] == 0.0);
    const QuaternionicReport q = check_quaternionic(bs, pts);
    CHECK(q.samples == 16);
    CHECK(q.max_residual() <= 1e-10);
    CHECK(q.signature_ok);
    const Mat gh = eval(bs.g_hat(), pts[3]);
    CHECK(signature(gh) == std::pair<int, int>{m, m});
  }
}

TEST_CASE("derived forms") {
  for (auto& bs : catalog_bundles()) {
    for (const auto& p : bundle_points(bs.base(), 6, 9)) {
      const Mat gh = eval(bs.g_hat(), p);
      const Mat phi = eval(bs.Phi_hat(), p), g2 = eval(bs.g2_hat(), p), g3 = eval(bs.g3_hat(), p);
      const Mat J2 = eval(bs.J(2), p);
      CHECK((phi + phi.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((g2 - g2.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((g3 - g3.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
      // ĝ2(J2 X, Y) = -ĝ(X, Y)
      CHECK((J2.transpose() * g2 + gh).cwiseAbs().maxCoeff() <= 1e-10);
      const auto forms = derived_forms(bs);
      CHECK((eval(forms[1], p) - g2).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  // flat base: ĝ2 in the adapted frame is block anti-diagonal with J^T g
  const BundleStructure flat(builtin("flat-standard", {.n = 2}));
  const auto p = bundle_points(flat.base(), 2, 10)[1];
  const Mat g = flat.base().metric_at(std::vector<double>(p.begin(), p.begin() + 4));
  const Mat J = flat.base().complex_structure();
  Mat expect = Mat::Zero(8, 8);
  expect.block(0, 4, 4, 4) = J.transpose() * g;
  expect.block(4, 0, 4, 4) = J.transpose() * g;
  CHECK((eval(flat.g2_hat(), p) - expect).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("bundle points are reproducible") {
  const BaseGeometry b = builtin("norden-block", {.n = 2});
  CHECK(bundle_points(b, 16, 42) == bundle_points(b, 16, 42));
  CHECK(bundle_points(b, 16, 42) != bundle_points(b, 16, 43));
}

}  // TEST_SUITE
