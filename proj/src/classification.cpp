#include "hg/classification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hg {

const char* to_string(Membership m) {
  switch (m) {
    case Membership::Member: return "member";
    case Membership::NonMember: return "non-member";
    case Membership::Inconclusive: return "inconclusive";
  }
  return "?";
}

ClassFlag graded_flag(std::string name, double residual, const Thresholds& t) {
  ClassFlag f;
  f.name = std::move(name);
  f.residual = residual;
  f.member_tol = t.member;
  f.non_member_tol = t.non_member;
  if (residual < t.member) {
    f.membership = Membership::Member;
  } else if (residual > t.non_member) {
    f.membership = Membership::NonMember;
  } else {
    f.membership = Membership::Inconclusive;
  }
  return f;
}

ClassFlag absolute_flag(std::string name, double residual, double tol) {
  ClassFlag f;
  f.name = std::move(name);
  f.residual = residual;
  f.member_tol = tol;
  f.non_member_tol = tol;
  f.membership = residual <= tol ? Membership::Member : Membership::NonMember;
  return f;
}

bool ClassificationReport::has(std::string_view name) const {
  return std::any_of(flags.begin(), flags.end(), [&](const ClassFlag& f) { return f.name == name; });
}

const ClassFlag& ClassificationReport::get(std::string_view name) const {
  for (const auto& f : flags)
    if (f.name == name) return f;
  throw std::out_of_range("classification report has no flag '" + std::string(name) + "'");
}

double structural_scale(std::span<const StructureSample> samples) {
  double m = 1.0;
  for (const auto& s : samples)
    for (double v : s.F.data()) m = std::max(m, std::abs(v));
  return m;
}

double contract(const Tensor<double>& F, const Vec& x, const Vec& y, const Vec& z) {
  const int d = F.dim();
  double r = 0.0;
  for (int i = 0; i < d; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      const double xy = x(i) * y(j);
      if (xy == 0.0) continue;
      for (int k = 0; k < d; ++k) r += F(i, j, k) * xy * z(k);
    }
  }
  return r;
}

Vec lie_form(const StructureSample& s) {
  const int d = s.F.dim();
  Vec t = Vec::Zero(d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t(k) += s.ginv(i, j) * s.F(i, j, k);
  return t;
}

ClassFlag evaluate_identity(std::string name, std::span<const StructureSample> samples,
                            const TripleIdentity& identity, const PredicateOptions& opt) {
  const double scale = structural_scale(samples);
  double worst = 0.0;
  std::vector<double> wp;
  std::vector<std::vector<double>> wv;
  Sampler rng(opt.seed);
  for (const auto& s : samples) {
    const int d = static_cast<int>(s.g.rows());
    const Vec theta = lie_form(s);
    for (int t = 0; t < opt.tuples; ++t) {
      Vec x = rng.vector(d), y = rng.vector(d), z = rng.vector(d);
      const double r = std::abs(identity(s, x, y, z, theta));
      if (r > worst || wp.empty()) {
        worst = std::max(worst, r);
        wp = s.point;
        wv = {std::vector<double>(x.data(), x.data() + d), std::vector<double>(y.data(), y.data() + d),
              std::vector<double>(z.data(), z.data() + d)};
      }
    }
  }
  ClassFlag f = graded_flag(std::move(name), worst / scale, opt.thresholds);
  f.witness_point = std::move(wp);
  f.witness_vectors = std::move(wv);
  return f;
}

std::vector<ClassFlag> norden_flags(std::span<const StructureSample> samples, const std::string& suffix,
                                    const PredicateOptions& opt) {
  std::vector<ClassFlag> out;
  out.push_back(evaluate_identity(
      "W0" + suffix, samples,
      [](const StructureSample& s, const Vec& x, const Vec& y, const Vec& z, const Vec&) {
        return contract(s.F, x, y, z);
      },
      opt));
  out.push_back(evaluate_identity(
      "W1" + suffix, samples,
      [](const StructureSample& s, const Vec& x, const Vec& y, const Vec& z, const Vec& th) {
        const double c = 1.0 / static_cast<double>(s.g.rows());
        const Vec jy = s.J * y, jz = s.J * z;
        auto g = [&](const Vec& a, const Vec& b) { return a.dot(s.g * b); };
        const double rhs = c * (g(x, y) * th.dot(z) + g(x, z) * th.dot(y) + g(x, jy) * th.dot(jz) +
                                g(x, jz) * th.dot(jy));
        return contract(s.F, x, y, z) - rhs;
      },
      opt));
  out.push_back(evaluate_identity(
      "W2" + suffix, samples,
      [](const StructureSample& s, const Vec& x, const Vec& y, const Vec& z, const Vec&) {
        return contract(s.F, x, y, s.J * z) + contract(s.F, y, z, s.J * x) + contract(s.F, z, x, s.J * y);
      },
      opt));
  out.push_back(evaluate_identity(
      "W3" + suffix, samples,
      [](const StructureSample& s, const Vec& x, const Vec& y, const Vec& z, const Vec&) {
        return contract(s.F, x, y, z) + contract(s.F, y, z, x) + contract(s.F, z, x, y);
      },
      opt));
  out.push_back(evaluate_identity(
      "W23" + suffix, samples,
      [](const StructureSample&, const Vec&, const Vec&, const Vec& z, const Vec& th) { return th.dot(z); },
      opt));
  return out;
}

std::vector<ClassFlag> hermitian_flags(std::span<const StructureSample> samples, const std::string& suffix,
                                       const PredicateOptions& opt) {
  std::vector<ClassFlag> out;
  out.push_back(evaluate_identity(
      "K" + suffix, samples,
      [](const StructureSample& s, const Vec& x, const Vec& y, const Vec& z, const Vec&) {
        return contract(s.F, x, y, z);
      },
      opt));
  out.push_back(evaluate_identity(
      "AK" + suffix, samples,
      [](const StructureSample&, const Vec&, const Vec&, const Vec& z, const Vec& th) { return th.dot(z); },
      opt));
  out.push_back(evaluate_identity(
      "W4" + suffix, samples,
      [](const StructureSample& s, const Vec& x, const Vec& y, const Vec& z, const Vec& th) {
        const double c = 1.0 / (2.0 * (static_cast<double>(s.g.rows()) / 2.0 - 1.0));
        const Vec jy = s.J * y, jz = s.J * z;
        auto g = [&](const Vec& a, const Vec& b) { return a.dot(s.g * b); };
        const double rhs = c * (g(x, y) * th.dot(z) - g(x, z) * th.dot(y) - g(x, jy) * th.dot(jz) +
                                g(x, jz) * th.dot(jy));
        return contract(s.F, x, y, z) - rhs;
      },
      opt));
  return out;
}

std::vector<StructureSample> sample_base_structure(const BaseGeometry& base, const JetGeometry& jets,
                                                   const SamplingOptions& sampling) {
  std::vector<StructureSample> out;
  Sampler rng(sampling.seed);
  for (int s = 0; s < sampling.points; ++s) {
    auto p = rng.point(base.dim(), base.domain());
    LocalGeometry lg = jets.at(p);
    out.push_back({p, lg.g, lg.ginv, base.complex_structure(), structural_tensor(lg, base.complex_structure())});
  }
  return out;
}

ClassificationReport classify_base(const BaseGeometry& base, const BaseClassifyOptions& opt) {
  ClassificationReport rep;
  rep.subject = base.name().empty() ? "base" : base.name();
  rep.dim = base.dim();
  JetGeometry jets(base.metric(), 2);
  PredicateOptions popt{opt.sampling.tuples, opt.sampling.seed, opt.thresholds};

  std::vector<StructureSample> samples;
  double max_r = 0.0, max_rho = 0.0, max_tilde = 0.0, max_rr = 0.0, max_r2 = 0.0;
  std::vector<double> wp_r, wp_rho, wp_tilde;
  Sampler rng(opt.sampling.seed);
  const Mat& J = base.complex_structure();
  for (int s = 0; s < opt.sampling.points; ++s) {
    auto p = rng.point(base.dim(), base.domain());
    LocalGeometry lg = jets.at(p);
    samples.push_back({p, lg.g, lg.ginv, J, structural_tensor(lg, J)});
    const double r = lg.max_abs_riemann();
    if (r > max_r || wp_r.empty()) {
      max_r = std::max(max_r, r);
      wp_r = p;
    }
    auto [rho, tilde] = ricci_tensors(lg, J);
    if (rho.cwiseAbs().maxCoeff() >= max_rho) {
      max_rho = rho.cwiseAbs().maxCoeff();
      wp_rho = p;
    }
    if (tilde.cwiseAbs().maxCoeff() >= max_tilde) {
      max_tilde = tilde.cwiseAbs().maxCoeff();
      wp_tilde = p;
    }
    // g(R, R) = R_ijkl R^ijkl
    const int d = lg.dim;
    double rr = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l) {
            double up = 0.0;
            for (int a = 0; a < d; ++a)
              for (int b = 0; b < d; ++b) {
                if (lg.ginv(i, a) == 0.0 || lg.ginv(j, b) == 0.0) continue;
                for (int c = 0; c < d; ++c)
                  for (int e = 0; e < d; ++e)
                    up += lg.ginv(i, a) * lg.ginv(j, b) * lg.ginv(k, c) * lg.ginv(l, e) * lg.riemann(a, b, c, e);
              }
            rr += lg.riemann(i, j, k, l) * up;
          }
    max_rr = std::max(max_rr, std::abs(rr));
    max_r2 = std::max(max_r2, r * r);
  }

  for (auto& f : norden_flags(samples, "", popt)) rep.add(std::move(f));
  ClassFlag theta = rep.get("W23");
  theta.name = "theta_zero";
  rep.add(theta);

  ClassFlag flat = absolute_flag("flat", max_r, opt.flat_tol);
  flat.witness_point = wp_r;
  rep.add(flat);
  const double rscale = std::max(1.0, max_r);
  ClassFlag rho = graded_flag("rho_zero", max_rho / rscale, opt.thresholds);
  rho.witness_point = wp_rho;
  rep.add(rho);
  ClassFlag tilde = graded_flag("rho_tilde_zero", max_tilde / rscale, opt.thresholds);
  tilde.witness_point = wp_tilde;
  rep.add(tilde);
  // Isotropic: curvature present and g(R, R) vanishing relative to |R|^2.
  ClassFlag iso = graded_flag("isotropic_curvature", max_rr / std::max(1.0, max_r2), opt.thresholds);
  if (flat.holds()) iso.membership = Membership::NonMember;
  rep.add(iso);
  return rep;
}

}  // namespace hg
