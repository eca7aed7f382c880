#include "hg/base_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hg/errors.hpp"

namespace hg {

BaseGeometry::BaseGeometry(int n, FieldMatrix metric, Eigen::MatrixXd complex_structure,
                           DomainBox domain, std::string name)
    : n_(n), g_(std::move(metric)), J_(std::move(complex_structure)), domain_(domain),
      name_(std::move(name)) {
  if (n_ < 1) throw GeometryError("base geometry: n must be >= 1");
  const int d = dim();
  if (g_.rank() != 2 || g_.dim() != d) {
    throw GeometryError("base geometry: metric must be a " + std::to_string(d) + "x" +
                        std::to_string(d) + " matrix");
  }
  if (J_.rows() != d || J_.cols() != d) {
    throw GeometryError("base geometry: J must be a " + std::to_string(d) + "x" +
                        std::to_string(d) + " matrix");
  }
  if (!(domain_.lo < domain_.hi)) throw GeometryError("base geometry: empty domain box");
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (g_(i, j).node().max_coordinate >= d) {
        throw GeometryError("base geometry: metric component references coordinate beyond x" +
                            std::to_string(d));
      }
      g_(i, j) = g_(i, j).with_arity(d);
    }
  }
}

Eigen::MatrixXd BaseGeometry::standard_complex_structure(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    J(n + i, i) = 1.0;
    J(i, n + i) = -1.0;
  }
  return J;
}

Eigen::MatrixXd BaseGeometry::metric_at(std::span<const double> p) const {
  const int d = dim();
  std::vector<ScalarField> fields(g_.data().begin(), g_.data().end());
  FieldProgram prog(fields, d);
  auto v = prog.evaluate(p);
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = v[static_cast<std::size_t>(i * d + j)];
  return g;
}

std::pair<int, int> signature(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (g + g.transpose()),
                                                    Eigen::EigenvaluesOnly);
  int pos = 0, neg = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 0) ++pos;
    if (es.eigenvalues()(i) < 0) ++neg;
  }
  return {pos, neg};
}

ValidationReport validate_base(const BaseGeometry& base, const SamplingOptions& sampling) {
  ValidationReport r;
  const int d = base.dim();
  const Eigen::MatrixXd& J = base.complex_structure();
  r.j_square_residual = (J * J + Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff();
  if (r.j_square_residual > 1e-14) {
    r.valid = false;
    r.issues.push_back("J^2 != -I (residual " + std::to_string(r.j_square_residual) + ")");
    return r;
  }

  Sampler sampler(sampling.seed);
  r.min_abs_det = std::numeric_limits<double>::infinity();
  for (int s = 0; s < sampling.points; ++s) {
    auto p = sampler.point(d, base.domain());
    Eigen::MatrixXd g = base.metric_at(p);
    r.symmetry_residual = std::max(r.symmetry_residual, (g - g.transpose()).cwiseAbs().maxCoeff());
    r.compatibility_residual =
        std::max(r.compatibility_residual, (J.transpose() * g * J + g).cwiseAbs().maxCoeff());
    const double det = std::abs(g.determinant());
    r.min_abs_det = std::min(r.min_abs_det, det);
    auto [pos, neg] = signature(g);
    if (det <= 1e-10 && r.signature_ok) {
      std::ostringstream os;
      os << "degenerate metric at sample " << s << " (|det g| = " << det << ")";
      r.issues.push_back(os.str());
    } else if ((pos != base.n() || neg != base.n()) && r.signature_ok) {
      std::ostringstream os;
      os << "signature (" << pos << "," << neg << ") != (" << base.n() << "," << base.n()
         << ") at sample " << s;
      r.issues.push_back(os.str());
      r.signature_ok = false;
    }
    ++r.samples;
  }
  if (r.symmetry_residual > 1e-10) r.issues.push_back("metric is not symmetric");
  if (r.compatibility_residual > 1e-10) {
    r.issues.push_back("metric is not skew-Hermitian: J^T g J != -g (residual " +
                       std::to_string(r.compatibility_residual) + ")");
  }
  if (r.min_abs_det <= 1e-10) r.signature_ok = false;
  r.valid = r.issues.empty();
  return r;
}

void require_valid(const ValidationReport& report) {
  if (report.valid) return;
  std::string msg = "invalid base geometry:";
  for (const auto& i : report.issues) msg += "\n  - " + i;
  throw GeometryError(msg);
}

// ------------------------------------------------------------ symbolic algebra

namespace {

FieldMatrix minor_of(const FieldMatrix& m, int row, int col) {
  const int d = m.dim();
  FieldMatrix r(d - 1, 2);
  for (int i = 0, ri = 0; i < d; ++i) {
    if (i == row) continue;
    for (int j = 0, rj = 0; j < d; ++j) {
      if (j == col) continue;
      r(ri, rj++) = m(i, j);
    }
    ++ri;
  }
  return r;
}

}  // namespace

ScalarField symbolic_determinant(const FieldMatrix& m) {
  const int d = m.dim();
  if (d == 1) return m(0, 0);
  if (d == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  std::vector<ScalarField> terms;
  for (int j = 0; j < d; ++j) {
    if (m(0, j).is_zero()) continue;
    ScalarField t = m(0, j) * symbolic_determinant(minor_of(m, 0, j));
    terms.push_back(j % 2 == 0 ? t : -t);
  }
  return sum(terms);
}

FieldMatrix symbolic_inverse(const FieldMatrix& m) {
  const int d = m.dim();
  if (d > kMaxSymbolicDim) {
    throw GeometryError("symbolic inverse supports dimension <= " +
                        std::to_string(kMaxSymbolicDim));
  }
  int arity = 0;
  for (const auto& f : m.data()) arity = std::max(arity, f.arity());
  ScalarField det = symbolic_determinant(m);
  if (det.is_zero()) throw GeometryError("singular metric: determinant is identically zero");
  FieldMatrix inv(d, 2);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      ScalarField cof = d == 1 ? ScalarField(1.0) : symbolic_determinant(minor_of(m, j, i));
      if ((i + j) % 2 == 1) cof = -cof;
      inv(i, j) = (cof / det).with_arity(arity);
    }
  }
  return inv;
}

CurvatureBundle christoffel(const FieldMatrix& metric) {
  const int d = metric.dim();
  int arity = 0;
  for (const auto& f : metric.data()) arity = std::max(arity, f.arity());
  CurvatureBundle cb;
  cb.dim = d;
  cb.metric = metric;
  cb.inverse_metric = symbolic_inverse(metric);

  // dg(a, i, j) = ∂_a g_ij
  FieldTensor dg(d, 3);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) dg(a, i, j) = dg(a, j, i) = metric(i, j).derivative(a);

  cb.gamma = FieldTensor(d, 3, ScalarField::constant(0.0, arity));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      std::vector<ScalarField> first(static_cast<std::size_t>(d));  // [ij, l]
      for (int l = 0; l < d; ++l) first[l] = dg(i, j, l) + dg(j, i, l) - dg(l, i, j);
      for (int k = 0; k < d; ++k) {
        std::vector<ScalarField> terms;
        for (int l = 0; l < d; ++l) {
          if (cb.inverse_metric(k, l).is_zero() || first[l].is_zero()) continue;
          terms.push_back(cb.inverse_metric(k, l) * first[l]);
        }
        ScalarField v = (0.5 * sum(terms)).with_arity(arity);
        cb.gamma(k, i, j) = v;
        cb.gamma(k, j, i) = v;
      }
    }
  }
  return cb;
}

CurvatureBundle christoffel(const BaseGeometry& base) {
  if (base.dim() > kMaxSymbolicDim) {
    throw GeometryError("symbolic Christoffel symbols require dim M <= " +
                        std::to_string(kMaxSymbolicDim));
  }
  return christoffel(base.metric());
}

CurvatureBundle riemann(CurvatureBundle cb) {
  const int d = cb.dim;
  const auto& G = cb.gamma;
  const int arity = G.flat(0).arity();
  const ScalarField zero = ScalarField::constant(0.0, arity);

  // dG(a, k, i, j) = ∂_a Γ^k_ij
  FieldTensor dG(d, 4, zero);
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) dG(a, k, i, j) = dG(a, k, j, i) = G(k, i, j).derivative(a);

  cb.riemann_up = FieldTensor(d, 4, zero);
  for (int l = 0; l < d; ++l) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          std::vector<ScalarField> terms{dG(i, l, j, k), -dG(j, l, i, k)};
          for (int m = 0; m < d; ++m) {
            if (!G(l, i, m).is_zero() && !G(m, j, k).is_zero()) terms.push_back(G(l, i, m) * G(m, j, k));
            if (!G(l, j, m).is_zero() && !G(m, i, k).is_zero()) terms.push_back(-(G(l, j, m) * G(m, i, k)));
          }
          ScalarField v = sum(terms).with_arity(arity);
          cb.riemann_up(l, i, j, k) = v;
          cb.riemann_up(l, j, i, k) = -v;
        }
      }
    }
  }

  cb.riemann = FieldTensor(d, 4, zero);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      for (int k = 0; k < d; ++k) {
        for (int q = 0; q < d; ++q) {
          std::vector<ScalarField> terms;
          for (int l = 0; l < d; ++l) {
            if (cb.metric(l, q).is_zero() || cb.riemann_up(l, i, j, k).is_zero()) continue;
            terms.push_back(cb.metric(l, q) * cb.riemann_up(l, i, j, k));
          }
          ScalarField v = sum(terms).with_arity(arity);
          cb.riemann(i, j, k, q) = v;
          cb.riemann(j, i, k, q) = -v;
        }
      }
    }
  }
  return cb;
}

CurvatureBundle nabla_riemann(CurvatureBundle cb) {
  if (!cb.has_riemann()) cb = riemann(std::move(cb));
  const int d = cb.dim;
  const auto& G = cb.gamma;
  const auto& R = cb.riemann;
  const int arity = G.flat(0).arity();
  const ScalarField zero = ScalarField::constant(0.0, arity);

  cb.nabla_riemann = FieldTensor(d, 5, zero);
  for (int m = 0; m < d; ++m) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          for (int l = k + 1; l < d; ++l) {
            std::vector<ScalarField> terms{R(i, j, k, l).derivative(m)};
            for (int p = 0; p < d; ++p) {
              auto add = [&](const ScalarField& c, const ScalarField& r) {
                if (!c.is_zero() && !r.is_zero()) terms.push_back(-(c * r));
              };
              add(G(p, m, i), R(p, j, k, l));
              add(G(p, m, j), R(i, p, k, l));
              add(G(p, m, k), R(i, j, p, l));
              add(G(p, m, l), R(i, j, k, p));
            }
            ScalarField v = sum(terms).with_arity(arity);
            cb.nabla_riemann(m, i, j, k, l) = v;
            cb.nabla_riemann(m, j, i, k, l) = -v;
            cb.nabla_riemann(m, i, j, l, k) = -v;
            cb.nabla_riemann(m, j, i, l, k) = v;
          }
        }
      }
    }
  }
  return cb;
}

CurvatureBundle ricci_tensors(CurvatureBundle cb, const Eigen::MatrixXd& J) {
  if (!cb.has_riemann()) cb = riemann(std::move(cb));
  const int d = cb.dim;
  const auto& R = cb.riemann;
  const auto& gi = cb.inverse_metric;
  const int arity = R.flat(0).arity();
  cb.rho = FieldMatrix(d, 2);
  cb.rho_tilde = FieldMatrix(d, 2);
  for (int y = 0; y < d; ++y) {
    for (int z = 0; z < d; ++z) {
      std::vector<ScalarField> rho_terms, tilde_terms;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          if (gi(i, j).is_zero()) continue;
          if (!R(i, y, z, j).is_zero()) rho_terms.push_back(gi(i, j) * R(i, y, z, j));
          for (int m = 0; m < d; ++m) {
            if (J(m, j) == 0.0 || R(i, y, z, m).is_zero()) continue;
            tilde_terms.push_back(J(m, j) * (gi(i, j) * R(i, y, z, m)));
          }
        }
      }
      cb.rho(y, z) = sum(rho_terms).with_arity(arity);
      cb.rho_tilde(y, z) = sum(tilde_terms).with_arity(arity);
    }
  }
  return cb;
}

CurvatureBundle curvature(const BaseGeometry& base) {
  return ricci_tensors(nabla_riemann(riemann(christoffel(base))), base.complex_structure());
}

StructuralData structural_tensor(const BaseGeometry& base, const CurvatureBundle& cb) {
  const int d = base.dim();
  const Eigen::MatrixXd& J = base.complex_structure();
  const auto& G = cb.gamma;
  const auto& g = cb.metric;
  StructuralData s;
  s.F = FieldTensor(d, 3, ScalarField::constant(0.0, d));
  // (∇_i J)^l_j = Γ^l_im J^m_j - Γ^m_ij J^l_m   (J constant in the chart)
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      std::vector<ScalarField> nablaJ(static_cast<std::size_t>(d));
      for (int l = 0; l < d; ++l) {
        std::vector<ScalarField> terms;
        for (int m = 0; m < d; ++m) {
          if (J(m, j) != 0.0 && !G(l, i, m).is_zero()) terms.push_back(J(m, j) * G(l, i, m));
          if (J(l, m) != 0.0 && !G(m, i, j).is_zero()) terms.push_back(-J(l, m) * G(m, i, j));
        }
        nablaJ[l] = sum(terms);
      }
      for (int k = 0; k < d; ++k) {
        std::vector<ScalarField> terms;
        for (int l = 0; l < d; ++l) {
          if (g(l, k).is_zero() || nablaJ[l].is_zero()) continue;
          terms.push_back(g(l, k) * nablaJ[l]);
        }
        s.F(i, j, k) = sum(terms).with_arity(d);
      }
    }
  }
  s.signature_signs.assign(static_cast<std::size_t>(base.n()), 1);
  s.signature_signs.resize(static_cast<std::size_t>(d), -1);
  return s;
}

std::vector<ScalarField> lie_form(const CurvatureBundle& cb, const StructuralData& s) {
  const int d = cb.dim;
  std::vector<ScalarField> theta(static_cast<std::size_t>(d));
  for (int z = 0; z < d; ++z) {
    std::vector<ScalarField> terms;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (!cb.inverse_metric(i, j).is_zero() && !s.F(i, j, z).is_zero())
          terms.push_back(cb.inverse_metric(i, j) * s.F(i, j, z));
    theta[z] = sum(terms).with_arity(cb.metric(0, 0).arity());
  }
  return theta;
}

StructuralData structural_data(const BaseGeometry& base, const CurvatureBundle& cb) {
  StructuralData s = structural_tensor(base, cb);
  s.theta = lie_form(cb, s);
  return s;
}

}  // namespace hg
