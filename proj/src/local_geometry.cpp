#include "hg/local_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "hg/errors.hpp"

namespace hg {

Vec LocalGeometry::christoffel(const Vec& x, const Vec& y) const {
  Vec r = Vec::Zero(dim);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i) {
      if (x(i) == 0.0) continue;
      for (int j = 0; j < dim; ++j) r(k) += gamma(k, i, j) * x(i) * y(j);
    }
  return r;
}

Vec LocalGeometry::curvature(const Vec& x, const Vec& y, const Vec& z) const {
  Vec r = Vec::Zero(dim);
  for (int l = 0; l < dim; ++l)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const double xy = x(i) * y(j);
        if (xy == 0.0) continue;
        for (int k = 0; k < dim; ++k) r(l) += riemann_up(l, i, j, k) * xy * z(k);
      }
  return r;
}

double LocalGeometry::curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  return inner(curvature(x, y, z), w);
}

Vec LocalGeometry::nabla_curvature(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  Vec low = Vec::Zero(dim);
  for (int m = 0; m < dim; ++m) {
    if (x(m) == 0.0) continue;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        const double c = x(m) * y(i) * z(j);
        if (c == 0.0) continue;
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) low(l) += nabla_riemann(m, i, j, k, l) * c * w(k);
      }
  }
  return ginv * low;
}

Mat LocalGeometry::nabla_j(const Vec& x, const Mat& J) const {
  // (∇_X J)^l_j = X^i (Γ^l_im J^m_j - Γ^m_ij J^l_m)
  Mat G = Mat::Zero(dim, dim);  // G^l_m = Γ^l_im X^i
  for (int l = 0; l < dim; ++l)
    for (int m = 0; m < dim; ++m)
      for (int i = 0; i < dim; ++i) G(l, m) += gamma(l, i, m) * x(i);
  return G * J - J * G;
}

double LocalGeometry::max_abs_riemann() const {
  double m = 0.0;
  for (double v : riemann.data()) m = std::max(m, std::abs(v));
  return m;
}

Tensor<double> structural_tensor(const LocalGeometry& lg, const Mat& J) {
  const int d = lg.dim;
  Tensor<double> F(d, 3, 0.0);
  for (int i = 0; i < d; ++i) {
    Mat nj = lg.nabla_j(Vec::Unit(d, i), J);
    Mat low = nj.transpose() * lg.g;  // low(j, k) = g_lk (∇_i J)^l_j
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) F(i, j, k) = low(j, k);
  }
  return F;
}

Vec lie_form(const LocalGeometry& lg, const Tensor<double>& F) {
  const int d = lg.dim;
  Vec t = Vec::Zero(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t(k) += lg.ginv(i, j) * F(i, j, k);
  return t;
}

std::pair<Mat, Mat> ricci_tensors(const LocalGeometry& lg, const Mat& J) {
  const int d = lg.dim;
  Mat rho = Mat::Zero(d, d), tilde = Mat::Zero(d, d);
  for (int y = 0; y < d; ++y)
    for (int z = 0; z < d; ++z)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          rho(y, z) += lg.ginv(i, j) * lg.riemann(i, y, z, j);
          for (int m = 0; m < d; ++m) tilde(y, z) += lg.ginv(i, j) * J(m, j) * lg.riemann(i, y, z, m);
        }
  return {rho, tilde};
}

// ------------------------------------------------------------------ jets

JetGeometry::JetGeometry(const FieldMatrix& metric, int order)
    : dim_(metric.dim()), order_(order) {
  if (order < 1 || order > 3) throw std::invalid_argument("JetGeometry: order must be 1, 2 or 3");
  const int d = dim_;
  arity_ = 0;
  for (const auto& f : metric.data()) arity_ = std::max(arity_, f.arity());
  if (arity_ < d) arity_ = d;

  pair_.assign(static_cast<std::size_t>(d * d), -1);
  std::vector<ScalarField> level0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      pair_[i * d + j] = pair_[j * d + i] = static_cast<int>(level0.size());
      level0.push_back(metric(i, j).with_arity(arity_));
    }
  n_pairs_ = level0.size();

  // Multi-indices are sorted, so mixed partials are differentiated once.
  std::vector<ScalarField> outputs = level0;
  std::vector<std::vector<ScalarField>> level1(static_cast<std::size_t>(d));
  off1_ = outputs.size();
  for (int a = 0; a < d; ++a) {
    level1[a] = differentiate_all(level0, a);
    outputs.insert(outputs.end(), level1[a].begin(), level1[a].end());
  }
  std::vector<std::vector<ScalarField>> level2;
  if (order >= 2) {
    off2_ = outputs.size();
    d2_.assign(static_cast<std::size_t>(d * d), -1);
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        d2_[a * d + b] = d2_[b * d + a] = static_cast<int>(level2.size());
        level2.push_back(differentiate_all(level1[a], b));
        outputs.insert(outputs.end(), level2.back().begin(), level2.back().end());
      }
  }
  if (order >= 3) {
    off3_ = outputs.size();
    d3_.assign(static_cast<std::size_t>(d * d * d), -1);
    int count = 0;
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b)
        for (int c = b; c < d; ++c) {
          auto fields = differentiate_all(level2[d2_[a * d + b]], c);
          outputs.insert(outputs.end(), fields.begin(), fields.end());
          int idx[3] = {a, b, c};
          std::sort(idx, idx + 3);
          do {
            d3_[(idx[0] * d + idx[1]) * d + idx[2]] = count;
          } while (std::next_permutation(idx, idx + 3));
          ++count;
        }
  }
  program_ = FieldProgram(outputs, arity_);
}

LocalGeometry JetGeometry::at(std::span<const double> p) const {
  const int d = dim_;
  const auto D = static_cast<std::size_t>(d);
  std::vector<double> v = program_.evaluate(p);
  auto G0 = [&](int i, int j) { return v[static_cast<std::size_t>(pair_[i * d + j])]; };
  auto G1 = [&](int a, int i, int j) {
    return v[off1_ + static_cast<std::size_t>(a) * n_pairs_ + static_cast<std::size_t>(pair_[i * d + j])];
  };
  auto G2 = [&](int a, int b, int i, int j) {
    return v[off2_ + static_cast<std::size_t>(d2_[a * d + b]) * n_pairs_ +
             static_cast<std::size_t>(pair_[i * d + j])];
  };
  auto G3 = [&](int a, int b, int c, int i, int j) {
    return v[off3_ + static_cast<std::size_t>(d3_[(a * d + b) * d + c]) * n_pairs_ +
             static_cast<std::size_t>(pair_[i * d + j])];
  };

  LocalGeometry lg;
  lg.dim = d;
  lg.g.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lg.g(i, j) = G0(i, j);
  Eigen::FullPivLU<Mat> lu(lg.g);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-300) {
    throw DomainError("singular metric at point", std::vector<double>(p.begin(), p.end()));
  }
  lg.ginv = lu.inverse();
  const Mat& gi = lg.ginv;

  // c1(i, j, l) = [ij, l] = ½(∂i g_jl + ∂j g_il - ∂l g_ij)
  Tensor<double> c1(d, 3, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) c1(i, j, l) = 0.5 * (G1(i, j, l) + G1(j, i, l) - G1(l, i, j));
  lg.gamma = Tensor<double>(d, 3, 0.0);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) s += gi(k, l) * c1(i, j, l);
        lg.gamma(k, i, j) = s;
      }
  if (order_ < 2) return lg;

  // ∂a g^-1 = -g^-1 (∂a g) g^-1
  std::vector<Mat> dgi(D), dg(D);
  for (int a = 0; a < d; ++a) {
    dg[a].resize(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) dg[a](i, j) = G1(a, i, j);
    dgi[a] = -gi * dg[a] * gi;
  }
  // dc1(a, i, j, l) = ∂a [ij, l]
  Tensor<double> dc1(d, 4, 0.0);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          dc1(a, i, j, l) = 0.5 * (G2(a, i, j, l) + G2(a, j, i, l) - G2(a, l, i, j));
  // dG(a, k, i, j) = ∂a Γ^k_ij
  Tensor<double> dG(d, 4, 0.0);
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) s += dgi[a](k, l) * c1(i, j, l) + gi(k, l) * dc1(a, i, j, l);
          dG(a, k, i, j) = dG(a, k, j, i) = s;
        }

  const auto& Gm = lg.gamma;
  lg.riemann_up = Tensor<double>(d, 4, 0.0);
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double s = dG(i, l, j, k) - dG(j, l, i, k);
          for (int m = 0; m < d; ++m) s += Gm(l, i, m) * Gm(m, j, k) - Gm(l, j, m) * Gm(m, i, k);
          lg.riemann_up(l, i, j, k) = s;
        }
  lg.riemann = Tensor<double>(d, 4, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int q = 0; q < d; ++q) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) s += lg.g(l, q) * lg.riemann_up(l, i, j, k);
          lg.riemann(i, j, k, q) = s;
        }
  if (order_ < 3) return lg;

  // ∂a∂b g^-1 = -(∂b g^-1 ∂a g g^-1 + g^-1 ∂a∂b g g^-1 + g^-1 ∂a g ∂b g^-1)
  Tensor<double> ddc1(d, 5, 0.0);  // (a, b, i, j, l)
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int l = 0; l < d; ++l)
            ddc1(a, b, i, j, l) = 0.5 * (G3(a, b, i, j, l) + G3(a, b, j, i, l) - G3(a, b, l, i, j));
  Tensor<double> ddG(d, 5, 0.0);  // (a, b, k, i, j) = ∂a∂b Γ^k_ij
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      Mat ddg(d, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) ddg(i, j) = G2(a, b, i, j);
      Mat ddgi = -(dgi[b] * dg[a] * gi + gi * ddg * gi + gi * dg[a] * dgi[b]);
      for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
          for (int j = i; j < d; ++j) {
            double s = 0.0;
            for (int l = 0; l < d; ++l) {
              s += ddgi(k, l) * c1(i, j, l) + dgi[a](k, l) * dc1(b, i, j, l) +
                   dgi[b](k, l) * dc1(a, i, j, l) + gi(k, l) * ddc1(a, b, i, j, l);
            }
            ddG(a, b, k, i, j) = ddG(a, b, k, j, i) = ddG(b, a, k, i, j) = ddG(b, a, k, j, i) = s;
          }
    }
  // ∂a R_ijkq = ∂a g_lq R^l_ijk + g_lq ∂a R^l_ijk
  Tensor<double> dR(d, 5, 0.0);
  for (int a = 0; a < d; ++a)
    for (int l = 0; l < d; ++l)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            double s = ddG(a, i, l, j, k) - ddG(a, j, l, i, k);
            for (int m = 0; m < d; ++m) {
              s += dG(a, l, i, m) * Gm(m, j, k) + Gm(l, i, m) * dG(a, m, j, k) -
                   dG(a, l, j, m) * Gm(m, i, k) - Gm(l, j, m) * dG(a, m, i, k);
            }
            const double r = lg.riemann_up(l, i, j, k);
            for (int q = 0; q < d; ++q) dR(a, i, j, k, q) += dg[a](l, q) * r + lg.g(l, q) * s;
          }
  const auto& R = lg.riemann;
  lg.nabla_riemann = Tensor<double>(d, 5, 0.0);
  for (int m = 0; m < d; ++m)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            double s = dR(m, i, j, k, l);
            for (int p2 = 0; p2 < d; ++p2) {
              s -= Gm(p2, m, i) * R(p2, j, k, l) + Gm(p2, m, j) * R(i, p2, k, l) +
                   Gm(p2, m, k) * R(i, j, p2, l) + Gm(p2, m, l) * R(i, j, k, p2);
            }
            lg.nabla_riemann(m, i, j, k, l) = s;
          }
  return lg;
}

// ------------------------------------------------------- symbolic bundle

CurvatureEvaluator::CurvatureEvaluator(const CurvatureBundle& cb)
    : dim_(cb.dim), riemann_(cb.has_riemann()), nabla_(cb.has_nabla_riemann()) {
  arity_ = dim_;
  std::vector<ScalarField> outputs;
  auto add = [&](const FieldTensor& t) {
    for (const auto& f : t.data()) {
      arity_ = std::max(arity_, f.arity());
      outputs.push_back(f);
    }
  };
  add(cb.metric);
  add(cb.inverse_metric);
  add(cb.gamma);
  if (riemann_) {
    add(cb.riemann_up);
    add(cb.riemann);
  }
  if (nabla_) add(cb.nabla_riemann);
  for (auto& f : outputs) f = f.with_arity(arity_);
  program_ = FieldProgram(outputs, arity_);
}

LocalGeometry CurvatureEvaluator::at(std::span<const double> p) const {
  const int d = dim_;
  std::vector<double> v = program_.evaluate(p);
  std::size_t pos = 0;
  LocalGeometry lg;
  lg.dim = d;
  lg.g.resize(d, d);
  lg.ginv.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lg.g(i, j) = v[pos++];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) lg.ginv(i, j) = v[pos++];
  auto fill = [&](Tensor<double>& t, int rank) {
    t = Tensor<double>(d, rank, 0.0);
    for (std::size_t k = 0; k < t.size(); ++k) t.flat(k) = v[pos++];
  };
  fill(lg.gamma, 3);
  if (riemann_) {
    fill(lg.riemann_up, 4);
    fill(lg.riemann, 4);
  }
  if (nabla_) fill(lg.nabla_riemann, 5);
  return lg;
}

}  // namespace hg
