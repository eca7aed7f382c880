#include "hg/bundle.hpp"

#include <algorithm>
#include <cmath>

#include "hg/errors.hpp"

namespace hg {

std::string InducedChart::coordinate_name(int index) const {
  if (index < base_dim) return "x" + std::to_string(index + 1);
  return "y" + std::to_string(index - base_dim + 1);
}

char to_char(LiftKind k) { return k == LiftKind::Horizontal ? 'H' : 'V'; }

BaseVectorField constant_field(const Vec& components, int base_dim) {
  BaseVectorField f;
  for (int i = 0; i < components.size(); ++i) f.push_back(ScalarField::constant(components(i), base_dim));
  return f;
}

FieldMatrix field_matmul(const FieldMatrix& a, const FieldMatrix& b) {
  const int d = a.dim();
  FieldMatrix r(d, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<ScalarField> terms;
      for (int k = 0; k < d; ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        terms.push_back(a(i, k) * b(k, j));
      }
      r(i, j) = sum(terms);
    }
  return r;
}

FieldMatrix field_transpose(const FieldMatrix& a) {
  FieldMatrix r(a.dim(), 2);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) r(i, j) = a(j, i);
  return r;
}

FieldMatrix field_constant(const Mat& m, int arity) {
  FieldMatrix r(static_cast<int>(m.rows()), 2);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = ScalarField::constant(m(i, j), arity);
  return r;
}

namespace {

FieldMatrix with_arity(FieldMatrix m, int arity) {
  for (auto& f : m.data()) f = f.with_arity(std::max(arity, f.arity()));
  return m;
}

}  // namespace

BundleStructure::BundleStructure(BaseGeometry base) : base_(std::move(base)) {
  const int m = base_.dim();
  const int N = 2 * m;
  chart_.base_dim = m;
  connection_ = christoffel(base_);

  K_ = FieldMatrix(m, 2);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      std::vector<ScalarField> terms;
      for (int a = 0; a < m; ++a) {
        const ScalarField& G = connection_.gamma(k, i, a);
        if (G.is_zero()) continue;
        terms.push_back(ScalarField::coordinate(m + a, N) * G);
      }
      K_(k, i) = sum(terms).with_arity(N);
    }

  E_ = FieldMatrix(N, 2, ScalarField::constant(0.0, N));
  E_inv_ = FieldMatrix(N, 2, ScalarField::constant(0.0, N));
  for (int i = 0; i < N; ++i) {
    E_(i, i) = ScalarField::constant(1.0, N);
    E_inv_(i, i) = ScalarField::constant(1.0, N);
  }
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) {
      E_(m + k, i) = -K_(k, i);
      E_inv_(m + k, i) = K_(k, i);
    }

  FieldMatrix D(N, 2, ScalarField::constant(0.0, N));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      D(i, j) = base_.metric(i, j).with_arity(N);
      D(m + i, m + j) = base_.metric(i, j).with_arity(N);
    }
  g_hat_ = with_arity(field_matmul(field_matmul(field_transpose(E_inv_), D), E_inv_), N);

  const Mat& J = base_.complex_structure();
  const Mat I = Mat::Identity(m, m);
  Mat J1 = Mat::Zero(N, N), J2 = Mat::Zero(N, N);
  J1.block(m, 0, m, m) = I;    // X^H -> X^V
  J1.block(0, m, m, m) = -I;   // X^V -> -X^H
  J2.block(m, 0, m, m) = J;    // X^H -> (JX)^V
  J2.block(0, m, m, m) = J;    // X^V -> (JX)^H
  J_frame_ = {J1, J2, J1 * J2};
  for (int a = 0; a < 3; ++a) {
    J_[a] = with_arity(field_matmul(field_matmul(E_, field_constant(J_frame_[a], N)), E_inv_), N);
    forms_[a] = with_arity(field_matmul(field_transpose(J_[a]), g_hat_), N);
  }

  std::vector<ScalarField> kf(K_.data().begin(), K_.data().end());
  K_program_ = FieldProgram(kf, N);
}

Mat BundleStructure::K_at(std::span<const double> point) const {
  const int m = base_dim();
  if (static_cast<int>(point.size()) != 2 * m) {
    throw std::invalid_argument("bundle point must have " + std::to_string(2 * m) + " coordinates");
  }
  auto v = K_program_.evaluate(point);
  Mat K(m, m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i) K(k, i) = v[static_cast<std::size_t>(k * m + i)];
  return K;
}

Mat BundleStructure::adapted_frame(std::span<const double> point) const {
  const int m = base_dim();
  Mat E = Mat::Identity(2 * m, 2 * m);
  E.block(m, 0, m, m) = -K_at(point);
  if (!std::isfinite(E.determinant()) || std::abs(E.determinant()) < 1e-12) {
    throw GeometryError("singular adapted frame");
  }
  return E;
}

LiftedVector lift(const BundleStructure& bs, const BaseVectorField& x, LiftKind kind) {
  const int m = bs.base_dim();
  const int N = 2 * m;
  if (static_cast<int>(x.size()) != m) {
    throw std::invalid_argument("lift: base field must have " + std::to_string(m) + " components");
  }
  for (const auto& c : x) {
    if (c.node().max_coordinate >= m) throw std::invalid_argument("lift: base field depends on fibre coordinates");
  }
  LiftedVector v;
  v.kind = kind;
  v.base_components = x;
  v.components.assign(static_cast<std::size_t>(N), ScalarField::constant(0.0, N));
  for (int k = 0; k < m; ++k) {
    if (kind == LiftKind::Vertical) {
      v.components[m + k] = x[k].with_arity(N);
      continue;
    }
    v.components[k] = x[k].with_arity(N);
    std::vector<ScalarField> terms;
    for (int j = 0; j < m; ++j) {
      if (bs.K()(k, j).is_zero() || x[j].is_zero()) continue;
      terms.push_back(bs.K()(k, j) * x[j]);
    }
    v.components[m + k] = (-sum(terms)).with_arity(N);
  }
  return v;
}

FieldMatrix sasaki_metric(const BundleStructure& bs) { return bs.g_hat(); }

std::array<FieldMatrix, 3> hypercomplex_triple(const BundleStructure& bs) { return {bs.J(1), bs.J(2), bs.J(3)}; }

std::array<FieldMatrix, 3> derived_forms(const BundleStructure& bs) {
  return {bs.Phi_hat(), bs.g2_hat(), bs.g3_hat()};
}

std::vector<std::vector<double>> bundle_points(const BaseGeometry& base, int count, std::uint64_t seed,
                                               DomainBox fiber) {
  Sampler rng(seed);
  std::vector<std::vector<double>> pts;
  const int m = base.dim();
  for (int s = 0; s < count; ++s) {
    std::vector<double> p = rng.point(m, base.domain());
    std::vector<double> u = rng.point(m, fiber);
    if (s == 0) std::fill(u.begin(), u.end(), 0.0);
    p.insert(p.end(), u.begin(), u.end());
    pts.push_back(std::move(p));
  }
  return pts;
}

double QuaternionicReport::max_residual() const {
  return std::max({square_residual, product_residual, anticommute_residual, compatibility_residual,
                   forms_residual});
}

QuaternionicReport check_quaternionic(const BundleStructure& bs, std::span<const std::vector<double>> points) {
  const int N = bs.dim();
  std::vector<ScalarField> fields;
  auto add = [&](const FieldMatrix& m) { fields.insert(fields.end(), m.data().begin(), m.data().end()); };
  add(bs.g_hat());
  for (int a = 1; a <= 3; ++a) add(bs.J(a));
  add(bs.Phi_hat());
  add(bs.g2_hat());
  add(bs.g3_hat());
  FieldProgram prog(fields, N);
  QuaternionicReport r;
  const Mat I = Mat::Identity(N, N);
  for (const auto& p : points) {
    auto v = prog.evaluate(p);
    std::size_t pos = 0;
    auto next = [&] {
      Mat m(N, N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = v[pos++];
      return m;
    };
    Mat g = next(), J1 = next(), J2 = next(), J3 = next(), Phi = next(), g2 = next(), g3 = next();
    auto mx = [](const Mat& m) { return m.cwiseAbs().maxCoeff(); };
    r.square_residual = std::max({r.square_residual, mx(J1 * J1 + I), mx(J2 * J2 + I), mx(J3 * J3 + I)});
    r.product_residual = std::max(r.product_residual, mx(J1 * J2 - J3));
    r.anticommute_residual = std::max(r.anticommute_residual, mx(J1 * J2 + J2 * J1));
    r.compatibility_residual =
        std::max({r.compatibility_residual, mx(J1.transpose() * g * J1 - g), mx(J2.transpose() * g * J2 + g),
                  mx(J3.transpose() * g * J3 + g)});
    r.forms_residual = std::max({r.forms_residual, mx(Phi + Phi.transpose()), mx(g2 - g2.transpose()),
                                 mx(g3 - g3.transpose())});
    auto [pos_count, neg_count] = signature(g);
    if (pos_count != N / 2 || neg_count != N / 2) r.signature_ok = false;
    ++r.samples;
  }
  return r;
}

}  // namespace hg
