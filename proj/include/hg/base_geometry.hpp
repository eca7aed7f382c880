#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hg/sampling.hpp"
#include "hg/scalar_field.hpp"
#include "hg/tensor.hpp"

namespace hg {

using FieldMatrix = Tensor<ScalarField>;  // rank 2
using FieldTensor = Tensor<ScalarField>;

/// Largest base dimension for which Christoffel symbols are built
/// symbolically (inverse metric by adjugate over determinant).
inline constexpr int kMaxSymbolicDim = 4;

/// Almost complex manifold (M, J, g) of dimension 2n in a single chart, with
/// g expected to be a Norden metric: g(JX, JY) = -g(X, Y).
class BaseGeometry {
 public:
  BaseGeometry(int n, FieldMatrix metric, Eigen::MatrixXd complex_structure,
               DomainBox domain = {}, std::string name = {});

  /// J e_i = e_{n+i}, J e_{n+i} = -e_i.
  static Eigen::MatrixXd standard_complex_structure(int n);

  int n() const noexcept { return n_; }
  int dim() const noexcept { return 2 * n_; }
  const FieldMatrix& metric() const noexcept { return g_; }
  const ScalarField& metric(int i, int j) const { return g_(i, j); }
  const Eigen::MatrixXd& complex_structure() const noexcept { return J_; }
  const DomainBox& domain() const noexcept { return domain_; }
  const std::string& name() const noexcept { return name_; }

  /// Metric matrix at a point.
  Eigen::MatrixXd metric_at(std::span<const double> p) const;

 private:
  int n_;
  FieldMatrix g_;
  Eigen::MatrixXd J_;
  DomainBox domain_;
  std::string name_;
};

struct ValidationReport {
  bool valid = true;
  double j_square_residual = 0.0;      // max |J^2 + I|
  double symmetry_residual = 0.0;      // max |g_ij - g_ji| over samples
  double compatibility_residual = 0.0; // max |J^T g J + g| over samples
  double min_abs_det = 0.0;            // min |det g| over samples
  bool signature_ok = true;            // (n, n) at every sample
  int samples = 0;
  std::vector<std::string> issues;
};

/// Checks the structural invariants of a base chart at sampled points.
/// Stops after the J^2 check when it fails.
ValidationReport validate_base(const BaseGeometry& base, const SamplingOptions& sampling = {});

/// Throws GeometryError listing the issues of an invalid report.
void require_valid(const ValidationReport& report);

/// Count of (positive, negative) eigenvalues of a symmetric matrix.
std::pair<int, int> signature(const Eigen::MatrixXd& g);

/// Symbolic derived tensors of a base metric. Index conventions:
///   gamma(k, i, j)         = Γ^k_ij
///   riemann_up(l, i, j, k) = R^l_ijk with R(∂i, ∂j)∂k = R^l_ijk ∂l
///   riemann(i, j, k, l)    = R(∂i, ∂j, ∂k, ∂l) = g(R(∂i, ∂j)∂k, ∂l)
///   nabla_riemann(m, i, j, k, l) = (∇_m R)(∂i, ∂j, ∂k, ∂l)
/// where R(X, Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_[X,Y].
struct CurvatureBundle {
  int dim = 0;
  FieldMatrix metric;
  FieldMatrix inverse_metric;
  FieldTensor gamma;
  FieldTensor riemann_up;
  FieldTensor riemann;
  FieldTensor nabla_riemann;
  FieldMatrix rho;        // ρ(y, z) = g^ij R(e_i, y, z, e_j)
  FieldMatrix rho_tilde;  // ρ̃(y, z) = g^ij R(e_i, y, z, J e_j)

  bool has_riemann() const noexcept { return riemann.size() > 0; }
  bool has_nabla_riemann() const noexcept { return nabla_riemann.size() > 0; }
  bool has_ricci() const noexcept { return rho.size() > 0; }
};

/// Inverse of a symbolic matrix by adjugate / determinant (dim <= 4).
FieldMatrix symbolic_inverse(const FieldMatrix& m);
ScalarField symbolic_determinant(const FieldMatrix& m);

CurvatureBundle christoffel(const BaseGeometry& base);
CurvatureBundle riemann(CurvatureBundle cb);
CurvatureBundle nabla_riemann(CurvatureBundle cb);
CurvatureBundle ricci_tensors(CurvatureBundle cb, const Eigen::MatrixXd& J);
/// All of the above in sequence.
CurvatureBundle curvature(const BaseGeometry& base);

/// Christoffel symbols of an arbitrary symmetric field matrix.
CurvatureBundle christoffel(const FieldMatrix& metric);

struct StructuralData {
  FieldTensor F;                   // F(i, j, k) = g((∇_i J) ∂j, ∂k)
  std::vector<ScalarField> theta;  // θ(k) = g^ij F(i, j, k)
  std::vector<int> signature_signs;
};

StructuralData structural_tensor(const BaseGeometry& base, const CurvatureBundle& cb);
std::vector<ScalarField> lie_form(const CurvatureBundle& cb, const StructuralData& s);
/// structural_tensor followed by lie_form.
StructuralData structural_data(const BaseGeometry& base, const CurvatureBundle& cb);

}  // namespace hg
