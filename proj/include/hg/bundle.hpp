#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hg/base_geometry.hpp"
#include "hg/local_geometry.hpp"

namespace hg {

/// Induced coordinates (x^1..x^m, y^1..y^m) on TM, m = dim M. Internally the
/// y's are coordinates m..2m-1 of a 2m-arity chart.
struct InducedChart {
  int base_dim = 0;
  int dim() const noexcept { return 2 * base_dim; }
  /// "x3" or "y1" for a 0-based chart index.
  std::string coordinate_name(int index) const;
};

enum class LiftKind { Horizontal, Vertical };
char to_char(LiftKind k);

/// A vector field on M: one ScalarField per coordinate, over x only.
using BaseVectorField = std::vector<ScalarField>;

/// Constant-coefficient base field.
BaseVectorField constant_field(const Vec& components, int base_dim);

struct LiftedVector {
  LiftKind kind = LiftKind::Vertical;
  BaseVectorField base_components;
  std::vector<ScalarField> components;  // 2m entries over the induced chart
};

FieldMatrix field_matmul(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix field_transpose(const FieldMatrix& a);
FieldMatrix field_constant(const Mat& m, int arity);

/// TM over a base chart with everything materialized as symbolic matrices
/// over the induced chart:
///   K^k_i = y^a Γ^k_ia,  E = [[I, 0], [-K, I]] (columns e_i^H, e_i^V),
///   ĝ = E^-T diag(g, g) E^-1,  J_α = E J_α^frame E^-1,
///   Φ̂ = J_1^T ĝ,  ĝ_2 = J_2^T ĝ,  ĝ_3 = J_3^T ĝ.
class BundleStructure {
 public:
  explicit BundleStructure(BaseGeometry base);

  const BaseGeometry& base() const noexcept { return base_; }
  const InducedChart& chart() const noexcept { return chart_; }
  int dim() const noexcept { return chart_.dim(); }
  int base_dim() const noexcept { return chart_.base_dim; }
  /// Symbolic Christoffel symbols of the base (horizontal distribution).
  const CurvatureBundle& connection() const noexcept { return connection_; }
  const FieldMatrix& K() const noexcept { return K_; }
  const FieldMatrix& frame() const noexcept { return E_; }
  const FieldMatrix& g_hat() const noexcept { return g_hat_; }
  /// alpha in {1, 2, 3}
  const FieldMatrix& J(int alpha) const { return J_.at(static_cast<std::size_t>(alpha - 1)); }
  const FieldMatrix& Phi_hat() const noexcept { return forms_[0]; }
  const FieldMatrix& g2_hat() const noexcept { return forms_[1]; }
  const FieldMatrix& g3_hat() const noexcept { return forms_[2]; }
  /// The J_α in the adapted frame (constant matrices).
  const Mat& J_frame(int alpha) const { return J_frame_.at(static_cast<std::size_t>(alpha - 1)); }

  /// Numeric adapted frame at a bundle point; columns e_(i)^H then e_(i)^V.
  Mat adapted_frame(std::span<const double> point) const;
  /// Numeric K^k_i at a bundle point.
  Mat K_at(std::span<const double> point) const;

 private:
  BaseGeometry base_;
  InducedChart chart_;
  CurvatureBundle connection_;
  FieldMatrix K_;
  FieldMatrix E_;
  FieldMatrix E_inv_;
  FieldMatrix g_hat_;
  std::array<FieldMatrix, 3> J_;
  std::array<FieldMatrix, 3> forms_;
  std::array<Mat, 3> J_frame_;
  FieldProgram K_program_;
};

/// Horizontal lift (X^k, -y^i Γ^k_ij X^j) or vertical lift (0, X^k).
LiftedVector lift(const BundleStructure& bs, const BaseVectorField& x, LiftKind kind);

/// Free-function forms of the BundleStructure parts.
FieldMatrix sasaki_metric(const BundleStructure& bs);
std::array<FieldMatrix, 3> hypercomplex_triple(const BundleStructure& bs);
std::array<FieldMatrix, 3> derived_forms(const BundleStructure& bs);

/// Sample bundle points: base part uniform in the base domain box, fibre part
/// uniform in `fiber`. The first point always lies on the zero section.
std::vector<std::vector<double>> bundle_points(const BaseGeometry& base, int count, std::uint64_t seed,
                                               DomainBox fiber = {-1.0, 1.0});

/// Largest violation over the sampled points of J_α² = -I,
/// J_1 J_2 = J_3 = -J_2 J_1 and of the compatibilities
/// ĝ(J_1·, J_1·) = ĝ, ĝ(J_2·, J_2·) = ĝ(J_3·, J_3·) = -ĝ, plus the signature
/// check (2m, 2m) of ĝ.
struct QuaternionicReport {
  double square_residual = 0.0;
  double product_residual = 0.0;
  double anticommute_residual = 0.0;
  double compatibility_residual = 0.0;
  double forms_residual = 0.0;  // Φ̂ skew, ĝ_2, ĝ_3 symmetric
  bool signature_ok = true;
  int samples = 0;
  double max_residual() const;
};
QuaternionicReport check_quaternionic(const BundleStructure& bs, std::span<const std::vector<double>> points);

}  // namespace hg
