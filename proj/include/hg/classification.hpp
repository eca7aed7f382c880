#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hg/base_geometry.hpp"
#include "hg/local_geometry.hpp"
#include "hg/sampling.hpp"

namespace hg {

enum class Membership { Member, NonMember, Inconclusive };
const char* to_string(Membership m);

/// Normalized residual below `member` means in class, above `non_member`
/// means not in class, anything between is reported as inconclusive.
struct Thresholds {
  double member = 1e-6;
  double non_member = 1e-3;
};

struct ClassFlag {
  std::string name;
  double residual = 0.0;
  double member_tol = 0.0;
  double non_member_tol = 0.0;
  Membership membership = Membership::Inconclusive;
  std::vector<double> witness_point;                 // worst sample point
  std::vector<std::vector<double>> witness_vectors;  // worst argument tuple

  bool holds() const noexcept { return membership == Membership::Member; }
  bool fails() const noexcept { return membership == Membership::NonMember; }
};

/// Flag from a normalized residual with the three-way thresholds.
ClassFlag graded_flag(std::string name, double residual, const Thresholds& t);
/// Flag from an absolute residual with a single cutoff (no inconclusive band).
ClassFlag absolute_flag(std::string name, double residual, double tol);

struct ClassificationReport {
  std::string subject;
  int dim = 0;
  std::vector<ClassFlag> flags;

  bool has(std::string_view name) const;
  const ClassFlag& get(std::string_view name) const;  // throws std::out_of_range
  void add(ClassFlag f) { flags.push_back(std::move(f)); }
};

/// An almost complex structure with metric and structural tensor at one point.
struct StructureSample {
  std::vector<double> point;
  Mat g;
  Mat ginv;
  Mat J;
  Tensor<double> F;  // F(i, j, k) = g((∇_i J)∂j, ∂k)
};

struct PredicateOptions {
  int tuples = 64;
  std::uint64_t seed = 42;
  Thresholds thresholds;
};

/// max(1, largest |F| component over the samples).
double structural_scale(std::span<const StructureSample> samples);

double contract(const Tensor<double>& F, const Vec& x, const Vec& y, const Vec& z);
Vec lie_form(const StructureSample& s);

/// Residual of an identity over sampled points and random vector triples,
/// divided by structural_scale. The identity receives the sample and the
/// triple and returns the signed violation.
using TripleIdentity =
    std::function<double(const StructureSample&, const Vec&, const Vec&, const Vec&, const Vec& theta)>;
ClassFlag evaluate_identity(std::string name, std::span<const StructureSample> samples,
                            const TripleIdentity& identity, const PredicateOptions& opt);

/// Norden classes of one structure: W0, W1, W2, W3, W23 (θ = 0), each name
/// suffixed by `suffix` (e.g. "_J2"). The W1 coefficient is 1/dim.
std::vector<ClassFlag> norden_flags(std::span<const StructureSample> samples, const std::string& suffix,
                                    const PredicateOptions& opt);

/// Hermitian classes of one structure: K (F = 0), AK (θ = 0) and W4 with
/// coefficient 1/(2(dim/2 - 1)).
std::vector<ClassFlag> hermitian_flags(std::span<const StructureSample> samples, const std::string& suffix,
                                       const PredicateOptions& opt);

/// Tolerances for curvature-type flags of the base.
struct BaseClassifyOptions {
  SamplingOptions sampling;
  Thresholds thresholds;
  double flat_tol = 1e-9;  // max |R| for "flat"
};

/// Samples of the base structure at the sampled points of its domain box.
std::vector<StructureSample> sample_base_structure(const BaseGeometry& base, const JetGeometry& jets,
                                                   const SamplingOptions& sampling);

/// Ganchev–Borisov classes of the base plus curvature flags:
/// W0, W1, W2, W3, W23, theta_zero, flat, rho_zero, rho_tilde_zero,
/// isotropic_curvature (R != 0 with g(R, R) = 0).
ClassificationReport classify_base(const BaseGeometry& base, const BaseClassifyOptions& opt = {});

}  // namespace hg
