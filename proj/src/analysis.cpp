#include "hg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hg/errors.hpp"

namespace hg {

namespace {

using Kind = LiftKind;
constexpr Kind H = LiftKind::Horizontal;
constexpr Kind V = LiftKind::Vertical;

Vec to_vec(std::span<const double> p) {
  Vec v(static_cast<int>(p.size()));
  for (int i = 0; i < v.size(); ++i) v(i) = p[static_cast<std::size_t>(i)];
  return v;
}


Vec unit(int dim, int i) {
  Vec e = Vec::Zero(dim);
  e(i) = 1.0;
  return e;
}

std::string kind_string(std::span<const Kind> ks) {
  std::string s;
  for (Kind k : ks) s += to_char(k);
  return s;
}

}  // namespace

// ------------------------------------------------------------------ jets

FieldJetProgram::FieldJetProgram(std::span<const ScalarField> components, int arity)
    : n_(static_cast<int>(components.size())), arity_(arity) {
  std::vector<ScalarField> out;
  for (const auto& c : components) out.push_back(c.with_arity(std::max(arity, c.arity())));
  std::vector<ScalarField> base = out;
  for (int a = 0; a < arity; ++a) {
    auto d = differentiate_all(base, a);
    out.insert(out.end(), d.begin(), d.end());
  }
  program_ = FieldProgram(out, arity);
}

VectorJet FieldJetProgram::at(std::span<const double> p) const {
  auto v = program_.evaluate(p);
  VectorJet j{Vec(n_), Mat(n_, arity_)};
  for (int k = 0; k < n_; ++k) j.value(k) = v[static_cast<std::size_t>(k)];
  for (int a = 0; a < arity_; ++a)
    for (int k = 0; k < n_; ++k) j.jac(k, a) = v[static_cast<std::size_t>(n_ + a * n_ + k)];
  return j;
}

Vec bracket(const VectorJet& a, const VectorJet& b) { return b.jac * a.value - a.jac * b.value; }

// ------------------------------------------------------------------ direct

namespace {

std::vector<ScalarField> flatten_j(const BundleStructure& bs) {
  std::vector<ScalarField> f;
  for (int a = 1; a <= 3; ++a) f.insert(f.end(), bs.J(a).data().begin(), bs.J(a).data().end());
  return f;
}

}  // namespace

DirectPipeline::DirectPipeline(const BundleStructure& bs, bool curvature)
    : bs_(&bs), metric_(bs.g_hat(), curvature ? 2 : 1), J_(flatten_j(bs), bs.dim()) {}

DirectPoint DirectPipeline::at(std::span<const double> point) const {
  const int N = bs_->dim();
  DirectPoint dp;
  dp.point.assign(point.begin(), point.end());
  dp.hat = metric_.at(point);
  VectorJet j = J_.at(point);
  for (int a = 0; a < 3; ++a) {
    const int off = a * N * N;
    dp.J[a] = Mat(N, N);
    for (int i = 0; i < N; ++i)
      for (int k = 0; k < N; ++k) dp.J[a](i, k) = j.value(off + i * N + k);
    dp.dJ[a].assign(static_cast<std::size_t>(N), Mat(N, N));
    for (int c = 0; c < N; ++c)
      for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) dp.dJ[a][c](i, k) = j.jac(off + i * N + k, c);
  }
  return dp;
}

VectorJet apply_j(const DirectPoint& dp, int alpha, const VectorJet& v) {
  const auto& J = dp.J[alpha - 1];
  const auto& dJ = dp.dJ[alpha - 1];
  VectorJet r{J * v.value, J * v.jac};
  for (int a = 0; a < static_cast<int>(dJ.size()); ++a) r.jac.col(a) += dJ[a] * v.value;
  return r;
}

Vec nijenhuis_direct(const DirectPoint& dp, int alpha, const VectorJet& a, const VectorJet& b) {
  const auto& J = dp.J[alpha - 1];
  const VectorJet ja = apply_j(dp, alpha, a), jb = apply_j(dp, alpha, b);
  return bracket(a, b) + J * bracket(ja, b) + J * bracket(a, jb) - bracket(ja, jb);
}

Vec nijenhuis_direct(const DirectPipeline& pipe, int alpha, std::span<const ScalarField> a,
                     std::span<const ScalarField> b, std::span<const double> point) {
  const int N = pipe.bundle().dim();
  FieldJetProgram pa(a, N), pb(b, N);
  return nijenhuis_direct(pipe.at(point), alpha, pa.at(point), pb.at(point));
}

Vec nabla_direct(const DirectPoint& dp, const VectorJet& a, const VectorJet& b) {
  return b.jac * a.value + dp.hat.christoffel(a.value, b.value);
}

Mat nabla_j_direct(const DirectPoint& dp, int alpha, const Vec& a) {
  const int N = dp.hat.dim;
  const auto& J = dp.J[alpha - 1];
  Mat r = Mat::Zero(N, N);
  for (int c = 0; c < N; ++c)
    if (a(c) != 0.0) r += a(c) * dp.dJ[alpha - 1][c];
  return r + dp.hat.nabla_j(a, J);
}

double f_alpha_direct(const DirectPoint& dp, int alpha, const Vec& a, const Vec& b, const Vec& c) {
  return (nabla_j_direct(dp, alpha, a) * b).dot(dp.hat.g * c);
}

Tensor<double> f_alpha_tensor(const DirectPoint& dp, int alpha) {
  const int N = dp.hat.dim;
  Tensor<double> F(N, 3, 0.0);
  for (int a = 0; a < N; ++a) {
    const Mat gm = dp.hat.g * nabla_j_direct(dp, alpha, unit(N, a));
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) F(a, b, c) = gm(c, b);
  }
  return F;
}

Tensor<double> nijenhuis_tensor(const DirectPoint& dp, int alpha) {
  const int N = dp.hat.dim;
  Tensor<double> T(N, 3, 0.0);
  for (int a = 0; a < N; ++a)
    for (int b = a + 1; b < N; ++b) {
      const VectorJet ea{unit(N, a), Mat::Zero(N, N)}, eb{unit(N, b), Mat::Zero(N, N)};
      const Vec n = nijenhuis_direct(dp, alpha, ea, eb);
      for (int k = 0; k < N; ++k) {
        T(a, b, k) = n(k);
        T(b, a, k) = -n(k);
      }
    }
  return T;
}

// ------------------------------------------------------------------ closed

ClosedPipeline::ClosedPipeline(const BundleStructure& bs) : bs_(&bs), base_(bs.base().metric(), 3) {}

ClosedPoint ClosedPipeline::at(std::span<const double> point) const {
  const int m = bs_->base_dim();
  if (static_cast<int>(point.size()) != 2 * m) {
    throw std::invalid_argument("bundle point must have " + std::to_string(2 * m) + " coordinates");
  }
  ClosedPoint cp;
  cp.point.assign(point.begin(), point.end());
  cp.x.assign(point.begin(), point.begin() + m);
  cp.u = to_vec(point.subspan(static_cast<std::size_t>(m)));
  cp.base = base_.at(cp.x);
  cp.J = bs_->base().complex_structure();
  cp.K = Mat::Zero(m, m);
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < m; ++a) cp.K(k, i) += cp.u(a) * cp.base.gamma(k, i, a);
  return cp;
}

Vec horizontal(const ClosedPoint& cp, const Vec& x) {
  const int m = static_cast<int>(x.size());
  Vec r(2 * m);
  r.head(m) = x;
  r.tail(m) = -cp.K * x;
  return r;
}

Vec vertical(const ClosedPoint&, const Vec& x) {
  const int m = static_cast<int>(x.size());
  Vec r = Vec::Zero(2 * m);
  r.tail(m) = x;
  return r;
}

Vec lifted(const ClosedPoint& cp, LiftKind k, const Vec& x) {
  return k == H ? horizontal(cp, x) : vertical(cp, x);
}

namespace {

// Shorthands for the base objects at the closed point.
struct Base {
  const ClosedPoint& cp;
  Vec R(const Vec& x, const Vec& y, const Vec& z) const { return cp.base.curvature(x, y, z); }
  double R4(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const { return cp.base.curvature4(x, y, z, w); }
  Vec Ru(const Vec& x, const Vec& y) const { return R(x, y, cp.u); }
  Vec nR(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
    return cp.base.nabla_curvature(x, y, z, w);
  }
  double g(const Vec& x, const Vec& y) const { return cp.base.inner(x, y); }
  Vec J(const Vec& x) const { return cp.J * x; }
  Vec nJ(const Vec& x, const Vec& y) const { return cp.base.nabla_j(x, cp.J) * y; }
  double F(const Vec& x, const Vec& y, const Vec& z) const { return g(nJ(x, y), z); }
  Vec Hl(const Vec& x) const { return horizontal(cp, x); }
  Vec Vl(const Vec& x) const { return vertical(cp, x); }
};

Vec covariant(const ClosedPoint& cp, const BaseJet& x, const BaseJet& y) {
  return y.jac * x.value + cp.base.christoffel(x.value, y.value);
}

}  // namespace

Vec bracket_closed(const ClosedPoint& cp, const BaseJet& x, LiftKind kx, const BaseJet& y, LiftKind ky) {
  const Base b{cp};
  if (kx == H && ky == H) return b.Hl(y.jac * x.value - x.jac * y.value) - b.Vl(b.Ru(x.value, y.value));
  if (kx == H && ky == V) return b.Vl(covariant(cp, x, y));
  if (kx == V && ky == H) return -b.Vl(covariant(cp, y, x));
  return Vec::Zero(2 * x.value.size());
}

Vec nabla_closed(const ClosedPoint& cp, const BaseJet& x, LiftKind kx, const BaseJet& y, LiftKind ky) {
  const Base b{cp};
  const Vec& X = x.value;
  const Vec& Y = y.value;
  if (kx == H && ky == H) return b.Hl(covariant(cp, x, y)) - 0.5 * b.Vl(b.Ru(X, Y));
  if (kx == H && ky == V) return 0.5 * b.Hl(b.R(cp.u, Y, X)) + b.Vl(covariant(cp, x, y));
  if (kx == V && ky == H) return 0.5 * b.Hl(b.R(cp.u, X, Y));
  return Vec::Zero(2 * X.size());
}

Vec nijenhuis_closed(const ClosedPoint& cp, int alpha, const Vec& X, LiftKind kx, const Vec& Y, LiftKind ky,
                     FormulaVariant variant) {
  const Base b{cp};
  const bool printed = variant == FormulaVariant::AsPrinted;
  const Vec JX = b.J(X), JY = b.J(Y);
  const bool hh = kx == H && ky == H, hv = kx == H && ky == V, vh = kx == V && ky == H;
  switch (alpha) {
    case 1:
      if (hh) return -b.Vl(b.Ru(X, Y));
      if (hv || vh) return -b.Hl(b.Ru(X, Y));
      return b.Vl(b.Ru(X, Y));
    case 2:
      if (hh) return b.Hl(b.J(b.nJ(X, Y)) - b.J(b.nJ(Y, X))) - b.Vl(b.Ru(X, Y));
      if (hv) return b.Vl(b.J(b.nJ(X, Y)) + b.nJ(JY, X)) - b.Hl(b.J(b.Ru(X, JY)));
      if (vh) return -b.Vl(b.nJ(JX, Y) + b.J(b.nJ(Y, X))) - b.Hl(b.J(b.Ru(JX, Y)));
      if (printed) return -b.Hl(b.nJ(JX, Y) + b.nJ(JY, X)) + b.Vl(b.Ru(JX, JY));
      return -b.Hl(b.nJ(JX, Y) - b.nJ(JY, X)) + b.Vl(b.Ru(JX, JY));
    case 3:
      if (hh) return b.Vl(-b.Ru(X, Y) + b.Ru(JX, JY) + b.J(b.Ru(JX, Y)) + b.J(b.Ru(X, JY)));
      if (hv) return b.Vl(b.nJ(JX, Y) - b.nJ(X, JY));
      if (vh) {
        const Vec v = b.Vl(b.nJ(Y, JX) - b.nJ(JY, X));
        return printed ? Vec(-v) : v;
      }
      return Vec::Zero(2 * X.size());
    default:
      throw std::invalid_argument("alpha must be 1, 2 or 3");
  }
}

double hat_curvature_closed(const ClosedPoint& cp, const Vec& X, const Vec& Y, const Vec& Z, const Vec& W,
                            std::array<LiftKind, 4> kinds, FormulaVariant variant) {
  const Base b{cp};
  const Vec& u = cp.u;
  const std::string key = kind_string(kinds);
  auto again = [&](const Vec& a, const Vec& c, const Vec& d, const Vec& e, const char* k) {
    std::array<LiftKind, 4> ks{};
    for (int i = 0; i < 4; ++i) ks[static_cast<std::size_t>(i)] = k[i] == 'H' ? H : V;
    return hat_curvature_closed(cp, a, c, d, e, ks, variant);
  };
  if (key == "HHHH") {
    const double s = variant == FormulaVariant::AsPrinted ? -0.5 : 0.5;
    return b.R4(X, Y, Z, W) + 0.25 * (b.g(b.Ru(W, X), b.Ru(Y, Z)) - b.g(b.Ru(W, Y), b.Ru(X, Z))) +
           s * b.g(b.Ru(X, Y), b.Ru(Z, W));
  }
  if (key == "HHHV") return -0.5 * b.g(b.nR(X, Y, Z, u) - b.nR(Y, X, Z, u), W);
  if (key == "HHVV") {
    return b.R4(X, Y, Z, W) - 0.25 * (b.g(b.R(u, W, X), b.R(u, Z, Y)) - b.g(b.R(u, W, Y), b.R(u, Z, X)));
  }
  if (key == "HVHH") return 0.5 * b.g(b.nR(X, u, Y, Z), W);
  if (key == "HVHV") return 0.5 * b.R4(X, Z, Y, W) - 0.25 * b.g(b.R(u, Y, Z), b.R(u, W, X));
  if (key == "VVHH") {
    return b.R4(X, Y, Z, W) - 0.25 * (b.g(b.R(u, Y, Z), b.R(u, X, W)) - b.g(b.R(u, X, Z), b.R(u, Y, W)));
  }
  if (key == "VVHV" || key == "HVVV" || key == "VVVV" || key == "VHVV" || key == "VVVH") return 0.0;
  if (key == "HHVH") return -again(X, Y, W, Z, "HHHV");
  if (key == "VHHH") return -again(Y, X, Z, W, "HVHH");
  if (key == "HVVH") return -again(X, Y, W, Z, "HVHV");
  if (key == "VHHV") return -again(Y, X, Z, W, "HVHV");
  if (key == "VHVH") return again(Y, X, W, Z, "HVHV");
  throw std::logic_error("unhandled curvature family " + key);
}

double hat_curvature_closed_general(const ClosedPoint& cp, const Vec& a, const Vec& b, const Vec& c, const Vec& d,
                                    FormulaVariant variant) {
  const int m = static_cast<int>(cp.u.size());
  // A = X^H + Y^V with X = A_top and Y = A_bottom + K A_top.
  auto split = [&](const Vec& v) {
    return std::array<Vec, 2>{v.head(m), Vec(v.tail(m) + cp.K * v.head(m))};
  };
  const std::array<std::array<Vec, 2>, 4> parts{split(a), split(b), split(c), split(d)};
  double r = 0.0;
  for (int mask = 0; mask < 16; ++mask) {
    std::array<LiftKind, 4> ks{};
    std::array<const Vec*, 4> vs{};
    for (int i = 0; i < 4; ++i) {
      const int bit = (mask >> i) & 1;
      ks[static_cast<std::size_t>(i)] = bit ? V : H;
      vs[static_cast<std::size_t>(i)] = &parts[static_cast<std::size_t>(i)][static_cast<std::size_t>(bit)];
    }
    r += hat_curvature_closed(cp, *vs[0], *vs[1], *vs[2], *vs[3], ks, variant);
  }
  return r;
}

bool f_alpha_listed(int alpha, std::array<LiftKind, 3> kinds) {
  const std::string k = kind_string(kinds);
  switch (alpha) {
    case 1: return k == "HHH" || k == "HVV" || k == "VHV" || k == "VVH";
    case 2: return k == "HHH" || k == "HVV" || k == "HHV" || k == "HVH" || k == "VHV" || k == "VVH";
    case 3: return k == "HHH" || k == "HVV" || k == "HHV" || k == "HVH" || k == "VHH";
    default: throw std::invalid_argument("alpha must be 1, 2 or 3");
  }
}

double f_alpha_closed(const ClosedPoint& cp, int alpha, const Vec& X, const Vec& Y, const Vec& Z,
                      std::array<LiftKind, 3> kinds) {
  const Base b{cp};
  const Vec& u = cp.u;
  const std::string k = kind_string(kinds);
  const Vec JY = b.J(Y), JZ = b.J(Z);
  switch (alpha) {
    case 1:
      if (k == "HHH") return -0.5 * b.R4(Y, Z, X, u);
      if (k == "HVV" || k == "VHV" || k == "VVH") return 0.5 * b.R4(Y, Z, X, u);
      return 0.0;
    case 2:
      if (k == "HHH") return -0.5 * b.R4(X, Y, JZ, u) + 0.5 * b.R4(Z, X, JY, u);
      if (k == "HVV") return 0.5 * b.R4(X, JY, Z, u) - 0.5 * b.R4(JZ, X, Y, u);
      if (k == "HHV" || k == "HVH") return b.F(X, Y, Z);
      if (k == "VHV") return 0.5 * b.R4(Y, JZ, X, u);
      if (k == "VVH") return -0.5 * b.R4(JY, Z, X, u);
      return 0.0;
    case 3:
      if (k == "HHH") return -b.F(X, Y, Z);
      if (k == "HVV") return b.F(X, Y, Z);
      if (k == "HHV") return -0.5 * b.R4(X, JY, Z, u) - 0.5 * b.R4(X, Y, JZ, u);
      if (k == "HVH") return 0.5 * b.R4(Z, X, JY, u) + 0.5 * b.R4(JZ, X, Y, u);
      if (k == "VHH") return 0.5 * b.R4(JY, Z, X, u) - 0.5 * b.R4(Y, JZ, X, u);
      return 0.0;
    default:
      throw std::invalid_argument("alpha must be 1, 2 or 3");
  }
}

double theta_alpha(const ClosedPoint& cp, int alpha, const Vec& z, LiftKind kind, const OrthonormalFrame& frame) {
  double t = 0.0;
  for (int i = 0; i < frame.vectors.cols(); ++i) {
    const Vec e = frame.vectors.col(i);
    const double s = frame.signs[static_cast<std::size_t>(i)];
    t += s * (f_alpha_closed(cp, alpha, e, e, z, {H, H, kind}) + f_alpha_closed(cp, alpha, e, e, z, {V, V, kind}));
  }
  return t;
}

double theta_alpha_direct(const DirectPoint& dp, int alpha, const Vec& z) {
  const int N = dp.hat.dim;
  const Vec gz = dp.hat.g * z;
  double t = 0.0;
  for (int a = 0; a < N; ++a) t += gz.dot(nabla_j_direct(dp, alpha, unit(N, a)) * dp.hat.ginv.col(a));
  return t;
}

double f_relation_check(const DirectPoint& dp, int tuples, std::uint64_t seed) {
  const int N = dp.hat.dim;
  Sampler rng(seed);
  double worst = 0.0;
  for (int t = 0; t < tuples; ++t) {
    const Vec a = rng.vector(N), b = rng.vector(N), c = rng.vector(N);
    const double r = f_alpha_direct(dp, 1, a, b, c) - f_alpha_direct(dp, 2, a, dp.J[2] * b, c) -
                     f_alpha_direct(dp, 3, a, b, dp.J[1] * c);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

// --------------------------------------------------------------- results

void CrossCheck::record(double direct, double closed, std::span<const double> point) {
  const double d = std::abs(direct - closed);
  if (!(d <= max_abs_diff) || worst_point.empty()) {
    if (!(d <= max_abs_diff)) max_abs_diff = d;
    worst_point.assign(point.begin(), point.end());
  }
  max_abs_direct = std::max(max_abs_direct, std::abs(direct));
  ++samples;
}

void CrossCheck::finish() {
  discrepancy = max_abs_diff / std::max(1.0, max_abs_direct);
  pass = std::isfinite(discrepancy) && discrepancy <= tolerance;
}

bool AnalysisResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CrossCheck& c) { return c.pass; }) &&
         quaternionic.signature_ok;
}

const CrossCheck* AnalysisResult::find(const std::string& object, const std::string& family) const {
  for (const auto& c : checks)
    if (c.object == object && c.family == family) return &c;
  return nullptr;
}

CrossCheck AnalysisResult::summary(const std::string& object) const {
  CrossCheck s;
  s.object = object;
  s.family = "all";
  bool first = true;
  for (const auto& c : checks) {
    if (c.object != object) continue;
    if (first || c.discrepancy > s.discrepancy) {
      s.discrepancy = c.discrepancy;
      s.worst_point = c.worst_point;
      s.tolerance = c.tolerance;
    }
    first = false;
    s.max_abs_diff = std::max(s.max_abs_diff, c.max_abs_diff);
    s.max_abs_direct = std::max(s.max_abs_direct, c.max_abs_direct);
    s.samples += c.samples;
    s.pass = s.pass && c.pass;
  }
  if (first) throw std::out_of_range("no cross-check rows for '" + object + "'");
  return s;
}

AnalysisContext make_context(const BundleStructure& bs, const DirectPipeline& dp, const ClosedPipeline& cp,
                             int points, std::uint64_t seed) {
  AnalysisContext ctx;
  ctx.bs = &bs;
  ctx.points = bundle_points(bs.base(), points, seed);
  for (const auto& p : ctx.points) {
    ctx.direct.push_back(dp.at(p));
    ctx.closed.push_back(cp.at(p));
  }
  return ctx;
}

BaseVectorField random_base_field(Sampler& rng, int base_dim, bool affine) {
  BaseVectorField f;
  for (int k = 0; k < base_dim; ++k) {
    ScalarField c = ScalarField::constant(rng.uniform(-1.0, 1.0), base_dim);
    if (affine) {
      for (int i = 0; i < base_dim; ++i)
        c = c + ScalarField::constant(rng.uniform(-0.5, 0.5), base_dim) * ScalarField::coordinate(i, base_dim);
    }
    f.push_back(c);
  }
  return f;
}

BaseJet base_jet(const BaseVectorField& f, std::span<const double> x) {
  FieldJetProgram p(f, static_cast<int>(f.size()));
  VectorJet j = p.at(x);
  return {j.value, j.jac};
}

namespace {

constexpr std::array<std::array<LiftKind, 2>, 4> kPairs{{{H, H}, {H, V}, {V, H}, {V, V}}};

CrossCheck& row(AnalysisResult& out, std::string object, std::string family, double tol, bool listed = true) {
  CrossCheck c;
  c.object = std::move(object);
  c.family = std::move(family);
  c.tolerance = tol;
  c.listed = listed;
  out.checks.push_back(std::move(c));
  return out.checks.back();
}

void record_vec(CrossCheck& c, const Vec& direct, const Vec& closed, std::span<const double> p) {
  for (int i = 0; i < direct.size(); ++i) c.record(direct(i), closed(i), p);
}

// Symbolic lifts of random base fields with their base jets, one per tuple.
struct FieldSample {
  FieldJetProgram base;
  std::array<FieldJetProgram, 2> lift;  // H, V
};

std::vector<FieldSample> field_samples(const BundleStructure& bs, int count, std::uint64_t seed, bool affine) {
  Sampler rng(seed);
  std::vector<FieldSample> out;
  const int m = bs.base_dim();
  for (int t = 0; t < count; ++t) {
    BaseVectorField f = random_base_field(rng, m, affine);
    out.push_back({FieldJetProgram(f, m),
                   {FieldJetProgram(lift(bs, f, H).components, bs.dim()),
                    FieldJetProgram(lift(bs, f, V).components, bs.dim())}});
  }
  return out;
}

BaseJet to_base(const VectorJet& j) { return {j.value, j.jac}; }

template <typename DirectFn, typename ClosedFn>
void pair_checks(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out, const std::string& object,
                 double tol, DirectFn direct, ClosedFn closed) {
  const auto fields = field_samples(*ctx.bs, 2 * opt.tuples, opt.seed + 1, opt.affine_fields);
  std::array<CrossCheck*, 4> rows{};
  const std::size_t first = out.checks.size();
  for (const auto& k : kPairs) row(out, object, kind_string(k), tol);
  for (std::size_t r = 0; r < 4; ++r) rows[r] = &out.checks[first + r];
  for (std::size_t p = 0; p < ctx.points.size(); ++p) {
    const auto& pt = ctx.points[p];
    const auto& cp = ctx.closed[p];
    for (int t = 0; t < opt.tuples; ++t) {
      const auto& fx = fields[static_cast<std::size_t>(2 * t)];
      const auto& fy = fields[static_cast<std::size_t>(2 * t + 1)];
      const BaseJet bx = to_base(fx.base.at(cp.x)), by = to_base(fy.base.at(cp.x));
      for (std::size_t r = 0; r < 4; ++r) {
        const auto [kx, ky] = kPairs[r];
        const VectorJet jx = fx.lift[kx == H ? 0 : 1].at(pt), jy = fy.lift[ky == H ? 0 : 1].at(pt);
        record_vec(*rows[r], direct(ctx.direct[p], jx, jy), closed(cp, bx, kx, by, ky), pt);
      }
    }
  }
  for (auto* r : rows) r->finish();
}

}  // namespace

void check_brackets(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out) {
  pair_checks(
      ctx, opt, out, "bracket", opt.tol_first,
      [](const DirectPoint&, const VectorJet& a, const VectorJet& b) { return bracket(a, b); },
      [](const ClosedPoint& cp, const BaseJet& x, Kind kx, const BaseJet& y, Kind ky) {
        return bracket_closed(cp, x, kx, y, ky);
      });
}

void check_nabla(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out) {
  pair_checks(
      ctx, opt, out, "nabla", opt.tol_first,
      [](const DirectPoint& dp, const VectorJet& a, const VectorJet& b) { return nabla_direct(dp, a, b); },
      [](const ClosedPoint& cp, const BaseJet& x, Kind kx, const BaseJet& y, Kind ky) {
        return nabla_closed(cp, x, kx, y, ky);
      });
}

void check_nijenhuis(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out) {
  for (int alpha = 1; alpha <= 3; ++alpha) {
    pair_checks(
        ctx, opt, out, "N" + std::to_string(alpha), opt.tol_first,
        [alpha](const DirectPoint& dp, const VectorJet& a, const VectorJet& b) {
          return nijenhuis_direct(dp, alpha, a, b);
        },
        [alpha](const ClosedPoint& cp, const BaseJet& x, Kind kx, const BaseJet& y, Kind ky) {
          return nijenhuis_closed(cp, alpha, x.value, kx, y.value, ky);
        });
  }
}

void check_curvature(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out) {
  const int m = ctx.bs->base_dim();
  const int N = 2 * m;
  const std::size_t first = out.checks.size();
  std::vector<std::array<LiftKind, 4>> families;
  for (int mask = 0; mask < 16; ++mask) {
    std::array<LiftKind, 4> ks{};
    for (int i = 0; i < 4; ++i) ks[static_cast<std::size_t>(i)] = ((mask >> (3 - i)) & 1) ? V : H;
    families.push_back(ks);
    row(out, "Rhat", kind_string(ks), opt.tol_second);
  }
  CrossCheck& ident = row(out, "Rhat-identities", "closed", opt.tol_algebraic);
  Sampler rng(opt.seed + 2);
  for (std::size_t p = 0; p < ctx.points.size(); ++p) {
    const auto& pt = ctx.points[p];
    const auto& dp = ctx.direct[p];
    const auto& cp = ctx.closed[p];
    const Mat E = ctx.bs->adapted_frame(pt);
    auto lift_direct = [&](Kind k, const Vec& x) {
      Vec v = Vec::Zero(N);
      v.head(m) = x;
      return k == H ? Vec(E * v) : vertical(cp, x);
    };
    for (int t = 0; t < opt.tuples; ++t) {
      const Vec X = rng.vector(m), Y = rng.vector(m), Z = rng.vector(m), W = rng.vector(m);
      for (std::size_t f = 0; f < families.size(); ++f) {
        const auto& ks = families[f];
        const double d = dp.hat.curvature4(lift_direct(ks[0], X), lift_direct(ks[1], Y), lift_direct(ks[2], Z),
                                           lift_direct(ks[3], W));
        out.checks[first + f].record(d, hat_curvature_closed(cp, X, Y, Z, W, ks), pt);
      }
      // Riemann symmetries of the closed assembly on general vectors.
      const Vec A = rng.vector(N), B = rng.vector(N), C = rng.vector(N), D = rng.vector(N);
      auto R = [&](const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
        return hat_curvature_closed_general(cp, a, b, c, d);
      };
      const double r = R(A, B, C, D);
      const double res = std::max({std::abs(r + R(B, A, C, D)), std::abs(r + R(A, B, D, C)),
                                   std::abs(r - R(C, D, A, B)), std::abs(r + R(B, C, A, D) + R(C, A, B, D))});
      ident.record(r, r - res, pt);
    }
  }
  for (std::size_t f = 0; f <= families.size(); ++f) out.checks[first + f].finish();
}

void check_structural(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out) {
  const int m = ctx.bs->base_dim();
  const int N = 2 * m;
  std::vector<std::array<LiftKind, 3>> families;
  for (int mask = 0; mask < 8; ++mask) {
    std::array<LiftKind, 3> ks{};
    for (int i = 0; i < 3; ++i) ks[static_cast<std::size_t>(i)] = ((mask >> (2 - i)) & 1) ? V : H;
    families.push_back(ks);
  }
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const std::size_t first = out.checks.size();
    for (const auto& ks : families)
      row(out, "F" + std::to_string(alpha), kind_string(ks), opt.tol_structural, f_alpha_listed(alpha, ks));
    Sampler rng(opt.seed + 3 + static_cast<std::uint64_t>(alpha));
    for (std::size_t p = 0; p < ctx.points.size(); ++p) {
      const auto& pt = ctx.points[p];
      const auto& dp = ctx.direct[p];
      const auto& cp = ctx.closed[p];
      const Mat E = ctx.bs->adapted_frame(pt);
      auto lift_direct = [&](Kind k, const Vec& x) {
        Vec v = Vec::Zero(N);
        if (k == H) v.head(m) = x; else v.tail(m) = x;
        return Vec(E * v);
      };
      for (int t = 0; t < opt.tuples; ++t) {
        const Vec X = rng.vector(m), Y = rng.vector(m), Z = rng.vector(m);
        for (std::size_t f = 0; f < families.size(); ++f) {
          const auto& ks = families[f];
          const double d = f_alpha_direct(dp, alpha, lift_direct(ks[0], X), lift_direct(ks[1], Y),
                                          lift_direct(ks[2], Z));
          out.checks[first + f].record(d, f_alpha_closed(cp, alpha, X, Y, Z, ks), pt);
        }
      }
    }
    for (std::size_t f = 0; f < families.size(); ++f) out.checks[first + f].finish();
  }
  CrossCheck& rel = row(out, "F-relation", "all", opt.tol_first);
  for (std::size_t p = 0; p < ctx.points.size(); ++p) {
    rel.record(f_relation_check(ctx.direct[p], opt.tuples, opt.seed + 7 + p), 0.0, ctx.points[p]);
  }
  // absolute: the relation is an identity, no scale to normalize by
  rel.max_abs_direct = 0.0;
  rel.finish();
}

void check_lie_forms(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out) {
  const int m = ctx.bs->base_dim();
  const int N = 2 * m;
  const std::size_t first = out.checks.size();
  row(out, "theta1", "H", opt.tol_lie);
  row(out, "theta1", "V", opt.tol_lie);
  row(out, "theta2", "V", opt.tol_lie);
  row(out, "theta3", "H", opt.tol_lie);
  row(out, "theta3", "V", opt.tol_lie);
  const std::size_t frame_first = out.checks.size();
  for (int alpha = 1; alpha <= 3; ++alpha) {
    row(out, "theta-frame", std::to_string(alpha) + "H", opt.tol_lie);
    row(out, "theta-frame", std::to_string(alpha) + "V", opt.tol_lie);
  }
  CrossCheck* rows[5];
  for (std::size_t i = 0; i < 5; ++i) rows[i] = &out.checks[first + i];
  Sampler rng(opt.seed + 11);
  for (std::size_t p = 0; p < ctx.points.size(); ++p) {
    const auto& pt = ctx.points[p];
    const auto& dp = ctx.direct[p];
    const auto& cp = ctx.closed[p];
    const Mat E = ctx.bs->adapted_frame(pt);
    const Vec theta = lie_form(cp.base, structural_tensor(cp.base, cp.J));
    const OrthonormalFrame frame = norden_frame(cp.base.g, cp.J, rng);
    for (int t = 0; t < std::max(1, opt.tuples / 4); ++t) {
      const Vec Z = rng.vector(m);
      Vec zh = Vec::Zero(N), zv = Vec::Zero(N);
      zh.head(m) = Z;
      zv.tail(m) = Z;
      zh = E * zh;
      zv = E * zv;
      rows[0]->record(theta_alpha_direct(dp, 1, zh), 0.0, pt);
      rows[1]->record(theta_alpha_direct(dp, 1, zv), 0.0, pt);
      rows[2]->record(theta_alpha_direct(dp, 2, zv), theta.dot(Z), pt);
      rows[3]->record(theta_alpha_direct(dp, 3, zh), -theta.dot(Z), pt);
      rows[4]->record(theta_alpha_direct(dp, 3, zv), 0.0, pt);
      for (int alpha = 1; alpha <= 3; ++alpha) {
        auto& rh = out.checks[frame_first + static_cast<std::size_t>(2 * (alpha - 1))];
        auto& rv = out.checks[frame_first + static_cast<std::size_t>(2 * (alpha - 1) + 1)];
        rh.record(theta_alpha_direct(dp, alpha, zh), theta_alpha(cp, alpha, Z, H, frame), pt);
        rv.record(theta_alpha_direct(dp, alpha, zv), theta_alpha(cp, alpha, Z, V, frame), pt);
      }
    }
  }
  for (std::size_t i = first; i < out.checks.size(); ++i) out.checks[i].finish();
}

void check_quaternionic(const AnalysisContext& ctx, const AnalysisOptions& opt, AnalysisResult& out) {
  out.quaternionic = check_quaternionic(*ctx.bs, ctx.points);
  CrossCheck& q = row(out, "quaternionic", "all", opt.tol_quaternionic);
  q.max_abs_diff = out.quaternionic.max_residual();
  q.samples = out.quaternionic.samples;
  q.finish();
  q.pass = q.pass && out.quaternionic.signature_ok;

  // ĝ(X^H, Y^H) = ĝ(X^V, Y^V) = g(X, Y), ĝ(X^H, Y^V) = 0
  const int m = ctx.bs->base_dim();
  CrossCheck& fr = row(out, "frame", "all", opt.tol_algebraic);
  Sampler rng(opt.seed + 13);
  for (std::size_t p = 0; p < ctx.points.size(); ++p) {
    const Mat E = ctx.bs->adapted_frame(ctx.points[p]);
    const Mat& g = ctx.direct[p].hat.g;
    const Mat& gb = ctx.closed[p].base.g;
    for (int t = 0; t < opt.tuples; ++t) {
      const Vec X = rng.vector(m), Y = rng.vector(m);
      Vec xh = Vec::Zero(2 * m), yh = xh, xv = xh, yv = xh;
      xh.head(m) = X;
      yh.head(m) = Y;
      xv.tail(m) = X;
      yv.tail(m) = Y;
      xh = E * xh;
      yh = E * yh;
      const double gxy = X.dot(gb * Y);
      fr.record(xh.dot(g * yh), gxy, ctx.points[p]);
      fr.record(xv.dot(g * yv), gxy, ctx.points[p]);
      fr.record(xh.dot(g * yv), 0.0, ctx.points[p]);
    }
  }
  fr.finish();
}

AnalysisResult analyze(const BundleStructure& bs, const AnalysisOptions& opt) {
  DirectPipeline dp(bs);
  ClosedPipeline cp(bs);
  AnalysisContext ctx = make_context(bs, dp, cp, opt.points, opt.seed);
  AnalysisResult out;
  check_quaternionic(ctx, opt, out);
  check_brackets(ctx, opt, out);
  check_nabla(ctx, opt, out);
  check_nijenhuis(ctx, opt, out);
  check_curvature(ctx, opt, out);
  check_structural(ctx, opt, out);
  check_lie_forms(ctx, opt, out);
  return out;
}

// ----------------------------------------------------- classification

ClassificationReport classify_bundle(const BundleStructure& bs, const BundleClassifyOptions& opt) {
  DirectPipeline dp(bs);
  ClosedPipeline cp(bs);
  AnalysisContext ctx = make_context(bs, dp, cp, opt.sampling.points, opt.sampling.seed);
  return classify_bundle(ctx, opt);
}

ClassificationReport classify_bundle(const AnalysisContext& ctx, const BundleClassifyOptions& opt) {
  const BundleStructure& bs = *ctx.bs;
  ClassificationReport rep;
  rep.subject = "TM(" + (bs.base().name().empty() ? std::string("base") : bs.base().name()) + ")";
  rep.dim = bs.dim();
  PredicateOptions popt{opt.sampling.tuples, opt.sampling.seed, opt.thresholds};

  std::array<std::vector<StructureSample>, 3> samples;
  std::array<double, 3> max_n{0.0, 0.0, 0.0};
  std::array<std::vector<double>, 3> wp_n;
  double max_r = 0.0;
  std::vector<double> wp_r;
  for (const auto& dp : ctx.direct) {
    for (int a = 0; a < 3; ++a) {
      samples[static_cast<std::size_t>(a)].push_back(
          {dp.point, dp.hat.g, dp.hat.ginv, dp.J[a], f_alpha_tensor(dp, a + 1)});
      const Tensor<double> nt = nijenhuis_tensor(dp, a + 1);
      double n = 0.0;
      for (double v : nt.data()) n = std::max(n, std::abs(v));
      if (n >= max_n[a]) {
        max_n[a] = n;
        wp_n[a] = dp.point;
      }
    }
    const double r = dp.hat.max_abs_riemann();
    if (r >= max_r) {
      max_r = r;
      wp_r = dp.point;
    }
  }

  for (auto& f : hermitian_flags(samples[0], "_J1", popt)) rep.add(std::move(f));
  for (auto& f : norden_flags(samples[1], "_J2", popt)) rep.add(std::move(f));
  for (auto& f : norden_flags(samples[2], "_J3", popt)) rep.add(std::move(f));
  auto copy = [&](const char* from, const char* to) {
    ClassFlag f = rep.get(from);
    f.name = to;
    rep.add(std::move(f));
  };
  copy("AK_J1", "theta1_zero");
  copy("W23_J2", "theta2_zero");
  copy("W23_J3", "theta3_zero");

  double worst_complex = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double scale = structural_scale(samples[static_cast<std::size_t>(a)]);
    ClassFlag f = graded_flag("complex_J" + std::to_string(a + 1), max_n[a] / scale, opt.thresholds);
    f.witness_point = wp_n[a];
    worst_complex = std::max(worst_complex, f.residual);
    rep.add(std::move(f));
  }
  rep.add(graded_flag("hypercomplex", worst_complex, opt.thresholds));
  rep.add(graded_flag("pseudo_hyper_kaehler",
                      std::max({rep.get("K_J1").residual, rep.get("W0_J2").residual, rep.get("W0_J3").residual}),
                      opt.thresholds));

  ClassFlag flat = absolute_flag("flat", max_r, opt.flat_tol);
  flat.witness_point = wp_r;
  rep.add(flat);

  const QuaternionicReport q = check_quaternionic(bs, ctx.points);
  ClassFlag sas = absolute_flag("sasaki_compatible", q.max_residual(), opt.compat_tol);
  if (!q.signature_ok) sas.membership = Membership::NonMember;
  rep.add(sas);

  // θ_3(Z^H) = -θ(Z), θ_3(Z^V) = 0
  const int m = bs.base_dim();
  double rel = 0.0;
  std::vector<double> wp_rel;
  Sampler rng(opt.sampling.seed + 17);
  for (std::size_t p = 0; p < ctx.points.size(); ++p) {
    const auto& cp = ctx.closed[p];
    const Mat E = bs.adapted_frame(ctx.points[p]);
    const Vec theta = lie_form(cp.base, structural_tensor(cp.base, cp.J));
    for (int t = 0; t < 4; ++t) {
      const Vec Z = rng.vector(m);
      Vec zh = Vec::Zero(2 * m), zv = zh;
      zh.head(m) = Z;
      zv.tail(m) = Z;
      const double r = std::max(std::abs(theta_alpha_direct(ctx.direct[p], 3, E * zh) + theta.dot(Z)),
                                std::abs(theta_alpha_direct(ctx.direct[p], 3, E * zv)));
      if (r >= rel) {
        rel = r;
        wp_rel = ctx.points[p];
      }
    }
  }
  ClassFlag tr = absolute_flag("theta3_relation", rel, opt.lie_tol);
  tr.witness_point = wp_rel;
  rep.add(tr);

  if (opt.locally_symmetric) {
    // ∇̂R̂ = 0, relative to the size of R̂
    JetGeometry third(bs.g_hat(), 3);
    double max_nr = 0.0;
    std::vector<double> wp;
    for (const auto& p : ctx.points) {
      LocalGeometry lg = third.at(p);
      double v = 0.0;
      for (double c : lg.nabla_riemann.data()) v = std::max(v, std::abs(c));
      if (v >= max_nr) {
        max_nr = v;
        wp = p;
      }
    }
    ClassFlag ls = graded_flag("locally_symmetric", max_nr / std::max(1.0, max_r), opt.thresholds);
    ls.witness_point = wp;
    rep.add(ls);
  }
  return rep;
}

// ----------------------------------------------------- theorems

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "confirmed";
    case Verdict::Vacuous: return "vacuous";
    case Verdict::Violated: return "violated";
  }
  return "?";
}

namespace {

// A tri-state proposition with the flags it was built from.
struct Term {
  Membership m = Membership::Member;
  std::vector<std::pair<std::string, double>> residuals;
  std::vector<const ClassFlag*> flags;
};

Term flag(const ClassificationReport& r, const std::string& name, const std::string& prefix) {
  const ClassFlag& f = r.get(name);
  return {f.membership, {{prefix + name, f.residual}}, {&f}};
}

Term truth() { return {}; }

Term combine(std::initializer_list<Term> ts, bool conj) {
  Term out;
  bool any_member = false, any_non = false, any_inc = false;
  for (const auto& t : ts) {
    any_member |= t.m == Membership::Member;
    any_non |= t.m == Membership::NonMember;
    any_inc |= t.m == Membership::Inconclusive;
    out.residuals.insert(out.residuals.end(), t.residuals.begin(), t.residuals.end());
    out.flags.insert(out.flags.end(), t.flags.begin(), t.flags.end());
  }
  if (conj) {
    out.m = any_non ? Membership::NonMember : any_inc ? Membership::Inconclusive : Membership::Member;
  } else {
    out.m = any_member ? Membership::Member : any_inc ? Membership::Inconclusive : Membership::NonMember;
  }
  return out;
}

Term all_of(std::initializer_list<Term> ts) { return combine(ts, true); }
Term any_of(std::initializer_list<Term> ts) { return combine(ts, false); }

void attach_witness(TheoremVerdict& v, const Term& t) {
  for (const ClassFlag* f : t.flags) {
    if (f->witness_point.empty()) continue;
    v.witness_point = f->witness_point;
    v.witness_vectors = f->witness_vectors;
    return;
  }
}

TheoremVerdict make(std::string id, std::string statement, const Term& h, const Term& c, bool iff, bool conv) {
  TheoremVerdict v;
  v.id = std::move(id);
  v.statement = std::move(statement);
  v.equivalence = iff;
  v.convention_dependent = conv;
  v.hypothesis = h.m;
  v.conclusion = c.m;
  v.residuals = h.residuals;
  v.residuals.insert(v.residuals.end(), c.residuals.begin(), c.residuals.end());
  if (iff) {
    if (h.m == Membership::Member && c.m == Membership::Member) {
      v.verdict = Verdict::Confirmed;
      v.witness_side = "affirmative";
    } else if (h.m == Membership::NonMember && c.m == Membership::NonMember) {
      v.verdict = Verdict::Confirmed;
      v.witness_side = "negative";
    } else {
      v.verdict = Verdict::Violated;
    }
  } else if (h.m != Membership::Member) {
    v.verdict = Verdict::Vacuous;
  } else {
    v.verdict = c.m == Membership::Member ? Verdict::Confirmed : Verdict::Violated;
  }
  attach_witness(v, v.verdict == Verdict::Violated && c.m != Membership::Member ? c : h);
  return v;
}

}  // namespace

std::vector<TheoremVerdict> theorem_suite(const ClassificationReport& base, const ClassificationReport& bundle) {
  auto B = [&](const std::string& n) { return flag(base, n, "M."); };
  auto T = [&](const std::string& n) { return flag(bundle, n, "TM."); };
  auto W = [&](int a) { return T(a == 1 ? "W4_J1" : "W1_J" + std::to_string(a)); };
  auto K = [&](int a) { return T(a == 1 ? "K_J1" : "W0_J" + std::to_string(a)); };
  const std::string ks[] = {"", "J1", "J2", "J3"};

  std::vector<TheoremVerdict> out;
  auto imp = [&](std::string id, std::string s, const Term& h, const Term& c, bool conv = false) {
    out.push_back(make(std::move(id), std::move(s), h, c, false, conv));
  };
  auto iff = [&](std::string id, std::string s, const Term& h, const Term& c, bool conv = false) {
    out.push_back(make(std::move(id), std::move(s), h, c, true, conv));
  };

  for (auto [a, b, c] : {std::array<int, 3>{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}) {
    imp("t31." + std::to_string(a) + std::to_string(b),
        "W(" + ks[a] + ") and W(" + ks[b] + ") imply W(" + ks[c] + ")", all_of({W(a), W(b)}), W(c));
  }
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) {
      if (a == b) continue;
      imp("t33." + std::to_string(a) + std::to_string(b),
          "K(" + ks[a] + ") and W(" + ks[b] + ") imply pseudo-hyper-Kaehler", all_of({K(a), W(b)}),
          T("pseudo_hyper_kaehler"));
    }
  imp("R=0", "pseudo-hyper-Kaehler implies flat", T("pseudo_hyper_kaehler"), T("flat"));

  const Term flat_w0 = all_of({B("flat"), B("W0")});
  iff("tH.1", "(TM, J1) complex iff M flat", T("complex_J1"), B("flat"));
  iff("tH.2", "(TM, J2) complex iff M flat and J parallel", T("complex_J2"), flat_w0);
  iff("tH.2'", "(TM, J3) complex iff M flat and J parallel", T("complex_J3"), flat_w0);
  iff("tH.3", "(TM, H) hypercomplex iff M flat and J parallel", T("hypercomplex"), flat_w0);
  iff("tH.cor.1", "(TM, J2) complex iff (TM, J3) complex", T("complex_J2"), T("complex_J3"));
  imp("tH.cor.2", "(TM, J2) or (TM, J3) complex implies (TM, H) hypercomplex",
      any_of({T("complex_J2"), T("complex_J3")}), T("hypercomplex"));

  imp("Sas", "(TM, H, G) is almost hypercomplex pseudo-Hermitian", truth(), T("sasaki_compatible"));
  iff("flat", "TM flat iff M flat", T("flat"), B("flat"));
  if (bundle.has("locally_symmetric")) {
    imp("isotropy", "TM locally symmetric implies R = 0 or g(R, R) = 0", T("locally_symmetric"),
        any_of({B("flat"), B("isotropic_curvature")}));
  }

  imp("lie.1", "theta1 = 0", truth(), T("theta1_zero"));
  iff("lie.2", "theta2 = 0 iff theta = 0 and rho~ = 0", T("theta2_zero"), all_of({B("theta_zero"), B("rho_tilde_zero")}),
      true);
  iff("lie.3", "theta3 = 0 iff theta = 0", T("theta3_zero"), B("theta_zero"));
  imp("lie.theta3", "theta3(Z^H) = -theta(Z) and theta3(Z^V) = 0", truth(), T("theta3_relation"));

  imp("J1.AK", "(TM, J1) almost Kaehler", truth(), T("AK_J1"));
  iff("J1.K", "(TM, J1) Kaehler iff M flat", T("K_J1"), B("flat"));
  iff("kprop.2", "(TM, J2) skew-Kaehler iff M flat and skew-Kaehler", T("W0_J2"), flat_w0);
  iff("kprop.2'", "(TM, J3) skew-Kaehler iff M flat and skew-Kaehler", T("W0_J3"), flat_w0);
  iff("kprop.3", "TM pseudo-hyper-Kaehler iff M flat and skew-Kaehler", T("pseudo_hyper_kaehler"), flat_w0);
  iff("kcor.1", "(TM, J2) skew-Kaehler iff (TM, J3) skew-Kaehler", T("W0_J2"), T("W0_J3"));
  imp("kcor.2", "(TM, J2) or (TM, J3) skew-Kaehler implies pseudo-hyper-Kaehler", any_of({T("W0_J2"), T("W0_J3")}),
      T("pseudo_hyper_kaehler"));
  for (int a = 1; a <= 3; ++a) {
    imp("ccor.1." + std::to_string(a), "(TM, " + ks[a] + ") complex implies Kaehler for " + ks[a],
        T("complex_J" + std::to_string(a)), K(a));
  }
  imp("ccor.2", "hypercomplex implies pseudo-hyper-Kaehler", T("hypercomplex"), T("pseudo_hyper_kaehler"));

  const Term ricci_flat = all_of({B("rho_zero"), B("rho_tilde_zero")});
  iff("cls.1", "TM in W2+W3 (J2) iff M in W2+W3 and rho = rho~ = 0", T("W23_J2"),
      all_of({B("W23"), ricci_flat}), true);
  iff("cls.2", "TM in W3 (J2) iff M in W0 and rho = rho~ = 0", T("W3_J2"), all_of({B("W0"), ricci_flat}), true);
  iff("cls.3", "TM in W2+W3 (J3) iff M in W2+W3", T("W23_J3"), B("W23"));
  iff("cls.4", "TM in W3 (J3) iff M in W0", T("W3_J3"), B("W0"));

  // {W1+W2+W3}(J2) is the whole Norden class and always holds.
  imp("sprop.1", "M in W2+W3 implies TM in AK(J1), W1+W2+W3 (J2), W2+W3 (J3)", B("W23"),
      all_of({T("AK_J1"), truth(), T("W23_J3")}));
  imp("sprop.2", "M in W2+W3 with rho = rho~ = 0 implies TM in AK(J1), W2+W3 (J2), W2+W3 (J3)",
      all_of({B("W23"), ricci_flat}), all_of({T("AK_J1"), T("W23_J2"), T("W23_J3")}), true);
  imp("sprop.3", "M in W2+W3 with R = 0 implies TM in K(J1), W2+W3 (J2), W2+W3 (J3)", all_of({B("W23"), B("flat")}),
      all_of({T("K_J1"), T("W23_J2"), T("W23_J3")}));
  imp("wprop.1", "M in W0 implies TM in AK(J1), W1+W2+W3 (J2), W3 (J3)", B("W0"),
      all_of({T("AK_J1"), truth(), T("W3_J3")}));
  imp("wprop.2", "M in W0 with rho = rho~ = 0 implies TM in AK(J1), W3 (J2), W3 (J3)", all_of({B("W0"), ricci_flat}),
      all_of({T("AK_J1"), T("W3_J2"), T("W3_J3")}), true);
  imp("wprop.3", "M in W0 with R = 0 implies TM in K(J1), W0 (J2), W0 (J3)", all_of({B("W0"), B("flat")}),
      all_of({T("K_J1"), T("W0_J2"), T("W0_J3")}));
  return out;
}

}  // namespace hg
