#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hg/base_geometry.hpp"
#include "hg/tensor.hpp"

namespace hg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Numeric Levi-Civita data of a metric at one point, in the coordinate
/// frame. Index conventions match CurvatureBundle. Tensors above the order
/// they were computed to are left empty.
struct LocalGeometry {
  int dim = 0;
  Mat g;
  Mat ginv;
  Tensor<double> gamma;          // (k, i, j)
  Tensor<double> riemann_up;     // (l, i, j, k)
  Tensor<double> riemann;        // (i, j, k, l)
  Tensor<double> nabla_riemann;  // (m, i, j, k, l)

  bool has_riemann() const noexcept { return riemann.size() > 0; }
  bool has_nabla_riemann() const noexcept { return nabla_riemann.size() > 0; }

  double inner(const Vec& x, const Vec& y) const { return x.dot(g * y); }
  /// Γ(X, Y)^k = Γ^k_ij X^i Y^j, the covariant derivative of a constant field.
  Vec christoffel(const Vec& x, const Vec& y) const;
  /// R(X, Y)Z
  Vec curvature(const Vec& x, const Vec& y, const Vec& z) const;
  /// R(X, Y, Z, W) = g(R(X, Y)Z, W)
  double curvature4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;
  /// (∇_X R)(Y, Z)W as a vector.
  Vec nabla_curvature(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;
  /// (∇_X J) for a J that is constant in the chart.
  Mat nabla_j(const Vec& x, const Mat& J) const;
  /// Largest absolute Riemann component.
  double max_abs_riemann() const;
};

/// Structural tensor F(i, j, k) = g((∇_i J)∂j, ∂k) of a constant J.
Tensor<double> structural_tensor(const LocalGeometry& lg, const Mat& J);
/// θ(k) = g^ij F(i, j, k).
Vec lie_form(const LocalGeometry& lg, const Tensor<double>& F);
/// ρ(y, z) = g^ij R(i, y, z, j) and ρ̃(y, z) = g^ij R(i, y, z, J e_j).
std::pair<Mat, Mat> ricci_tensors(const LocalGeometry& lg, const Mat& J);

/// Evaluates the Levi-Civita data of a symbolic metric from its exact
/// derivative jets: g and its partial derivatives up to `order` are compiled
/// into one FieldProgram, the inverse metric is computed numerically at each
/// point and everything else follows by the product rule.
///   order 1: Γ      order 2: Γ, R      order 3: Γ, R, ∇R
class JetGeometry {
 public:
  JetGeometry(const FieldMatrix& metric, int order);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  std::size_t instruction_count() const noexcept { return program_.instruction_count(); }

  LocalGeometry at(std::span<const double> p) const;

 private:
  int dim_;
  int arity_;
  int order_;
  FieldProgram program_;
  std::vector<int> pair_;    // (i, j) -> symmetric slot
  std::size_t n_pairs_ = 0;
  std::vector<int> d2_;      // (a, b) -> sorted multi-index slot
  std::vector<int> d3_;      // (a, b, c) -> sorted multi-index slot
  std::size_t off1_ = 0, off2_ = 0, off3_ = 0;
};

/// Point evaluation of a symbolic CurvatureBundle.
class CurvatureEvaluator {
 public:
  explicit CurvatureEvaluator(const CurvatureBundle& cb);
  LocalGeometry at(std::span<const double> p) const;

 private:
  int dim_;
  int arity_;
  bool riemann_;
  bool nabla_;
  FieldProgram program_;
};

}  // namespace hg
