#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hg/bundle.hpp"
#include "hg/classification.hpp"
#include "hg/frames.hpp"
#include "hg/local_geometry.hpp"

namespace hg {

/// Value and first partials of a vector field at a point: jac(k, a) = ∂_a V^k.
struct VectorJet {
  Vec value;
  Mat jac;
};

/// Compiles the components of a vector field and all their first partials.
class FieldJetProgram {
 public:
  FieldJetProgram(std::span<const ScalarField> components, int arity);
  VectorJet at(std::span<const double> p) const;

 private:
  int n_;
  int arity_;
  FieldProgram program_;
};

Vec bracket(const VectorJet& a, const VectorJet& b);

// ------------------------------------------------------------------ direct

/// Everything the direct pipeline needs at one bundle point.
struct DirectPoint {
  std::vector<double> point;
  LocalGeometry hat;                 // Levi-Civita data of ĝ (Γ̂, R̂)
  std::array<Mat, 3> J;              // J_α
  std::array<std::vector<Mat>, 3> dJ;  // dJ[α][a] = ∂_a J_α
};

/// (TM, ĝ) treated as an ordinary pseudo-Riemannian chart: ĝ and J_α are
/// differentiated symbolically and the connection comes from JetGeometry.
class DirectPipeline {
 public:
  explicit DirectPipeline(const BundleStructure& bs, bool curvature = true);
  DirectPoint at(std::span<const double> point) const;
  const BundleStructure& bundle() const noexcept { return *bs_; }

 private:
  const BundleStructure* bs_;
  JetGeometry metric_;
  FieldJetProgram J_;  // all three J_α, flattened
};

/// J_α applied to a field jet: value J v, partials (∂J) v + J ∂v.
VectorJet apply_j(const DirectPoint& dp, int alpha, const VectorJet& v);
/// N_α(A, B) = [A,B] + J[JA,B] + J[A,JB] - [JA,JB] from coordinate brackets.
Vec nijenhuis_direct(const DirectPoint& dp, int alpha, const VectorJet& a, const VectorJet& b);
/// Nijenhuis tensor of fields given by ScalarField components on TM.
Vec nijenhuis_direct(const DirectPipeline& pipe, int alpha, std::span<const ScalarField> a,
                     std::span<const ScalarField> b, std::span<const double> point);
/// ∇̂_A B
Vec nabla_direct(const DirectPoint& dp, const VectorJet& a, const VectorJet& b);
/// (∇̂_A J_α) as a matrix.
Mat nabla_j_direct(const DirectPoint& dp, int alpha, const Vec& a);
/// F_α(A, B, C) = ĝ((∇̂_A J_α)B, C)
double f_alpha_direct(const DirectPoint& dp, int alpha, const Vec& a, const Vec& b, const Vec& c);
/// All components F_α(∂a, ∂b, ∂c).
Tensor<double> f_alpha_tensor(const DirectPoint& dp, int alpha);
/// N_α(∂a, ∂b)^k for the constant coordinate fields.
Tensor<double> nijenhuis_tensor(const DirectPoint& dp, int alpha);

// ------------------------------------------------------------------ closed

/// Base data at π(p) plus the fibre point u.
struct ClosedPoint {
  std::vector<double> point;
  std::vector<double> x;
  Vec u;
  LocalGeometry base;  // Γ, R, ∇R of g at x
  Mat J;               // base J
  Mat K;               // K^k_i = u^a Γ^k_ia
};

class ClosedPipeline {
 public:
  explicit ClosedPipeline(const BundleStructure& bs);
  ClosedPoint at(std::span<const double> point) const;
  const BundleStructure& bundle() const noexcept { return *bs_; }

 private:
  const BundleStructure* bs_;
  JetGeometry base_;
};

/// Value and base partials of a field on M.
struct BaseJet {
  Vec value;
  Mat jac;
};

/// Which printed formula to use where the printed text is self-inconsistent.
enum class FormulaVariant { Corrected, AsPrinted };

Vec horizontal(const ClosedPoint& cp, const Vec& x);
Vec vertical(const ClosedPoint& cp, const Vec& x);
Vec lifted(const ClosedPoint& cp, LiftKind k, const Vec& x);

/// [X^a, Y^b] by the bracket lemma.
Vec bracket_closed(const ClosedPoint& cp, const BaseJet& x, LiftKind kx, const BaseJet& y, LiftKind ky);
/// ∇̂_{X^a} Y^b by the covariant-derivative lemma.
Vec nabla_closed(const ClosedPoint& cp, const BaseJet& x, LiftKind kx, const BaseJet& y, LiftKind ky);
/// N_α(X^a, Y^b) from the base R, ∇J, J and u.
Vec nijenhuis_closed(const ClosedPoint& cp, int alpha, const Vec& x, LiftKind kx, const Vec& y, LiftKind ky,
                     FormulaVariant variant = FormulaVariant::Corrected);
/// R̂(X^a, Y^b, Z^c, W^d); the seven families not stated explicitly follow
/// from the Riemann symmetries.
double hat_curvature_closed(const ClosedPoint& cp, const Vec& x, const Vec& y, const Vec& z, const Vec& w,
                            std::array<LiftKind, 4> kinds, FormulaVariant variant = FormulaVariant::Corrected);
/// R̂(A, B, C, D) for arbitrary vectors of T(TM), expanded by multilinearity
/// over their horizontal and vertical parts.
double hat_curvature_closed_general(const ClosedPoint& cp, const Vec& a, const Vec& b, const Vec& c, const Vec& d,
                                    FormulaVariant variant = FormulaVariant::Corrected);
/// F_α(X^a, Y^b, Z^c); components not among the stated ones are zero.
double f_alpha_closed(const ClosedPoint& cp, int alpha, const Vec& x, const Vec& y, const Vec& z,
                      std::array<LiftKind, 3> kinds);
/// Whether f_alpha_closed has a stated (rather than asserted-zero) formula.
bool f_alpha_listed(int alpha, std::array<LiftKind, 3> kinds);
/// θ_α(Z^k) = Σ_A ε_A F_α(ẽ_A, ẽ_A, Z^k) over the lifted Norden frame.
double theta_alpha(const ClosedPoint& cp, int alpha, const Vec& z, LiftKind kind, const OrthonormalFrame& frame);
/// θ_α(Z̃) = ĝ^AB F_α(∂A, ∂B, Z̃) in the induced coordinate frame.
double theta_alpha_direct(const DirectPoint& dp, int alpha, const Vec& z);
/// |F_1(A,B,C) - F_2(A,J_3B,C) - F_3(A,B,J_2C)| maximized over random triples.
double f_relation_check(const DirectPoint& dp, int tuples, std::uint64_t seed);

// --------------------------------------------------------------- results

/// One row of the direct-vs-closed table.
struct CrossCheck {
  std::string object;  // N1, nabla, Rhat, F2, bracket, ...
  std::string family;  // kind pattern, e.g. "HV"
  double max_abs_diff = 0.0;
  double max_abs_direct = 0.0;
  double discrepancy = 0.0;  // max_abs_diff / max(1, max_abs_direct)
  double tolerance = 0.0;
  bool pass = true;
  bool listed = true;  // false for asserted-zero families
  int samples = 0;
  std::vector<double> worst_point;

  void record(double direct, double closed, std::span<const double> point);
  void finish();
};

struct AnalysisOptions {
  int points = 16;
  int tuples = 32;
  std::uint64_t seed = 42;
  double tol_algebraic = 1e-9;
  double tol_first = 1e-7;
  double tol_second = 1e-5;
  double tol_structural = 1e-6;  // F_α
  double tol_lie = 1e-8;         // θ_α relations
  double tol_quaternionic = 1e-10;
  bool affine_fields = true;  // use affine (not only constant) base fields for bracket / ∇̂
};

struct AnalysisResult {
  std::vector<CrossCheck> checks;
  QuaternionicReport quaternionic;
  bool all_pass() const;
  const CrossCheck* find(const std::string& object, const std::string& family) const;
  /// Worst row for an object (all families).
  CrossCheck summary(const std::string& object) const;
};

/// Shared per-point data of both pipelines.
struct AnalysisContext {
  const BundleStructure* bs;
  std::vector<std::vector<double>> points;
  std::vector<DirectPoint> direct;
  std::vector<ClosedPoint> closed;
};
AnalysisContext make_context(const BundleStructure& bs, const DirectPipeline& dp, const ClosedPipeline& cp,
                             int points, std::uint64_t seed);

/// Random affine base field X^k = a^k + b^k_i x^i with small b.
BaseVectorField random_base_field(Sampler& rng, int base_dim, bool affine);
BaseJet base_jet(const BaseVectorField& f, std::span<const double> x);

void check_brackets(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out);
void check_nabla(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out);
void check_nijenhuis(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out);
void check_curvature(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out);
void check_structural(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out);
void check_lie_forms(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out);
void check_quaternionic(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out);

/// Runs every cross-check.
AnalysisResult analyze(const BundleStructure& bs, const AnalysisOptions& opt = {});

// ----------------------------------------------------- classification, theorems

struct BundleClassifyOptions {
  SamplingOptions sampling;
  Thresholds thresholds;
  double flat_tol = 1e-8;  // max |R̂|
  double compat_tol = 1e-10;
  double lie_tol = 1e-8;
  bool locally_symmetric = true;  // needs third jets of ĝ
};

/// Flags: K_J1, AK_J1, W4_J1, W0..W3/W23 for J2 and J3, theta{1,2,3}_zero,
/// complex_J{1,2,3}, hypercomplex, pseudo_hyper_kaehler, flat,
/// sasaki_compatible, theta3_relation, locally_symmetric.
ClassificationReport classify_bundle(const BundleStructure& bs, const BundleClassifyOptions& opt = {});
ClassificationReport classify_bundle(const AnalysisContext& ctx, const BundleClassifyOptions& opt);

enum class Verdict { Confirmed, Vacuous, Violated };
const char* to_string(Verdict v);

struct TheoremVerdict {
  std::string id;
  std::string statement;
  bool equivalence = false;
  bool convention_dependent = false;  // depends on the adopted ρ̃ convention
  Membership hypothesis = Membership::Inconclusive;
  Membership conclusion = Membership::Inconclusive;
  Verdict verdict = Verdict::Vacuous;
  std::string witness_side;  // "affirmative" / "negative" for confirmed equivalences
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<double> witness_point;
  std::vector<std::vector<double>> witness_vectors;
};

std::vector<TheoremVerdict> theorem_suite(const ClassificationReport& base, const ClassificationReport& bundle);

}  // namespace hg
