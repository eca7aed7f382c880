#include "hg/catalog.hpp"

#include <stdexcept>

#include "hg/errors.hpp"

namespace hg {

namespace {

FieldMatrix block_metric(int n, const FieldMatrix& A, const FieldMatrix& B) {
  const int d = 2 * n;
  FieldMatrix g(d, 2, ScalarField::constant(0.0, d));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g(i, j) = A(i, j).with_arity(d);
      g(i, n + j) = B(i, j).with_arity(d);
      g(n + i, j) = B(i, j).with_arity(d);
      g(n + i, n + j) = (-A(i, j)).with_arity(d);
    }
  return g;
}

FieldMatrix parse_block(const std::vector<std::string>& src, int n, const char* what) {
  if (static_cast<int>(src.size()) != n * n) {
    throw std::invalid_argument(std::string("norden-block: ") + what + " needs " + std::to_string(n * n) +
                                " entries");
  }
  FieldMatrix m(n, 2, ScalarField::constant(0.0, 2 * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = parse_field(src[static_cast<std::size_t>(i * n + j)], 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!structurally_equal(simplify(m(i, j)), simplify(m(j, i)))) {
        throw GeometryError(std::string("norden-block: ") + what + " is not symmetric at (" + std::to_string(i + 1) +
                            "," + std::to_string(j + 1) + ")");
      }
    }
  return m;
}

void preset_blocks(const std::string& preset, int n, std::vector<std::string>& A, std::vector<std::string>& B) {
  auto diag = [&](std::vector<std::string> d) {
    std::vector<std::string> m(static_cast<std::size_t>(n * n), "0");
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i * n + i)] = d[static_cast<std::size_t>(i)];
    return m;
  };
  if (preset.empty() || preset == "default") {
    if (n == 1) {
      A = {"1 + x1^2"};
      B = {"x1*x2/2"};
    } else {
      std::vector<std::string> d(static_cast<std::size_t>(n), "1");
      d[0] = "1 + x1^2";
      A = diag(d);
      B = diag(std::vector<std::string>(static_cast<std::size_t>(n), "0"));
    }
    return;
  }
  if (preset == "holomorphic-hyperbolic") {
    // real part of dz1^2 + exp(2 z1) dz2^2, z_k = x_k + i x_{n+k}
    if (n != 2) throw std::invalid_argument("preset holomorphic-hyperbolic requires n = 2");
    A = diag({"1", "exp(2*x1)*cos(2*x3)"});
    B = diag({"0", "-exp(2*x1)*sin(2*x3)"});
    return;
  }
  throw std::invalid_argument("unknown norden-block preset '" + preset + "'");
}

}  // namespace

std::vector<std::string> generator_names() { return {"flat-standard", "conformal-flat", "norden-block"}; }
std::vector<std::string> norden_presets() { return {"default", "holomorphic-hyperbolic"}; }

BaseGeometry builtin(const std::string& name, const CatalogParams& p) {
  const int n = p.n;
  if (n < 1 || n > kMaxSymbolicDim / 2) {
    throw std::invalid_argument("catalog: n must be between 1 and " + std::to_string(kMaxSymbolicDim / 2));
  }
  const int d = 2 * n;
  const Eigen::MatrixXd J = BaseGeometry::standard_complex_structure(n);
  FieldMatrix g(d, 2, ScalarField::constant(0.0, d));
  std::string label = name + "(" + std::to_string(n);

  if (name == "flat-standard") {
    for (int i = 0; i < d; ++i) g(i, i) = ScalarField::constant(i < n ? 1.0 : -1.0, d);
  } else if (name == "conformal-flat") {
    const std::string src = p.f.empty() ? "x1^2/2" : p.f;
    const ScalarField f = parse_field(src, d);
    const ScalarField c = exp(ScalarField::constant(2.0, d) * f);
    for (int i = 0; i < d; ++i) g(i, i) = i < n ? c : -c;
    label += ", f=" + src;
  } else if (name == "norden-block") {
    std::vector<std::string> A = p.A, B = p.B;
    if (A.empty() && B.empty()) {
      preset_blocks(p.preset, n, A, B);
      if (!p.preset.empty()) label += ", " + p.preset;
    } else {
      if (!p.preset.empty()) throw std::invalid_argument("norden-block: give either a preset or A and B");
      if (A.empty()) throw std::invalid_argument("norden-block: A is required");
      if (B.empty()) B.assign(static_cast<std::size_t>(n * n), "0");
    }
    g = block_metric(n, parse_block(A, n, "A"), parse_block(B, n, "B"));
  } else {
    throw std::invalid_argument("unknown catalog generator '" + name + "'");
  }
  label += ")";

  BaseGeometry base(n, std::move(g), J, p.domain, label);
  require_valid(validate_base(base));
  return base;
}

namespace {

CatalogEntry entry(std::string label, std::string gen, CatalogParams p, std::string desc, bool flat, bool parallel,
                   std::vector<ExpectedProperty> ex) {
  return {std::move(label), std::move(gen), std::move(p), std::move(desc), flat, parallel, std::move(ex)};
}

CatalogParams with_n(int n) {
  CatalogParams p;
  p.n = n;
  return p;
}

}  // namespace

std::vector<CatalogEntry> catalog_suite() {
  std::vector<CatalogEntry> s;
  const std::vector<ExpectedProperty> phk = {
      {"base", "W0", true},         {"base", "flat", true},         {"bundle", "K_J1", true},
      {"bundle", "W0_J2", true},    {"bundle", "W0_J3", true},      {"bundle", "flat", true},
      {"bundle", "hypercomplex", true}, {"bundle", "pseudo_hyper_kaehler", true}};
  s.push_back(entry("flat-standard-1", "flat-standard", with_n(1), "flat, J parallel", true, true, phk));
  s.push_back(entry("flat-standard-2", "flat-standard", with_n(2), "flat, J parallel, TM of dimension 8", true, true,
                    phk));

  CatalogParams cf = with_n(1);
  cf.f = "x1^2/2";
  s.push_back(entry("conformal-flat-1", "conformal-flat", cf, "curved, theta nonzero", false, false,
                    {{"base", "flat", false},
                     {"base", "W0", false},
                     {"bundle", "AK_J1", true},
                     {"bundle", "complex_J1", false},
                     {"bundle", "hypercomplex", false},
                     {"bundle", "theta3_relation", true}}));
  CatalogParams cl = with_n(1);
  cl.f = "x1";
  s.push_back(entry("conformal-linear-1", "conformal-flat", cl, "flat with J not parallel", true, false,
                    {{"base", "flat", true},
                     {"base", "W0", false},
                     {"bundle", "flat", true},
                     {"bundle", "complex_J1", true},
                     {"bundle", "K_J1", true},
                     {"bundle", "complex_J2", false},
                     {"bundle", "hypercomplex", false}}));
  CatalogParams cf2 = with_n(2);
  cf2.f = "x1";
  s.push_back(entry("conformal-flat-2", "conformal-flat", cf2, "curved, TM of dimension 8", false, false,
                    {{"base", "flat", false},
                     {"bundle", "AK_J1", true},
                     {"bundle", "hypercomplex", false},
                     {"bundle", "theta3_relation", true}}));
  s.push_back(entry("norden-block-1", "norden-block", with_n(1), "curved, A and B both varying", false, false,
                    {{"base", "flat", false}, {"bundle", "AK_J1", true}, {"bundle", "theta3_relation", true}}));
  s.push_back(entry("norden-block-2", "norden-block", with_n(2), "curved, theta nonzero", false, false,
                    {{"base", "flat", false},
                     {"base", "theta_zero", false},
                     {"bundle", "AK_J1", true},
                     {"bundle", "theta2_zero", false},
                     {"bundle", "theta3_relation", true}}));
  CatalogParams hh = with_n(2);
  hh.preset = "holomorphic-hyperbolic";
  s.push_back(entry("holomorphic-hyperbolic", "norden-block", hh, "curved, J parallel (holomorphic metric)", false,
                    true,
                    {{"base", "W0", true},
                     {"base", "flat", false},
                     {"bundle", "AK_J1", true},
                     {"bundle", "W23_J3", true},
                     {"bundle", "W3_J3", true},
                     {"bundle", "W23_J2", false},
                     {"bundle", "hypercomplex", false}}));
  // no special curvature shape: every Riemann identity of the closed forms has power here
  CatalogParams gen = with_n(2);
  gen.A = {"1+x1^2", "x2*x3/2", "x2*x3/2", "1+x4^2/3"};
  gen.B = {"x3/2", "x1*x4/4", "x1*x4/4", "0"};
  s.push_back(entry("norden-block-generic", "norden-block", gen, "curved, generic A and B", false, false,
                    {{"base", "flat", false},
                     {"base", "theta_zero", false},
                     {"bundle", "AK_J1", true},
                     {"bundle", "hypercomplex", false},
                     {"bundle", "theta3_relation", true}}));
  return s;
}

const std::vector<ExpectedProperty>& expected_properties(const CatalogEntry& entry) { return entry.expected; }

CatalogEntry catalog_entry(const std::string& label, int n) {
  for (auto& e : catalog_suite()) {
    if (e.label == label) return e;
  }
  for (const auto& g : generator_names()) {
    if (g != label) continue;
    const int nn = n > 0 ? n : 1;
    for (auto& e : catalog_suite())
      if (e.generator == g && e.params.n == nn && e.params.preset.empty() &&
          (g != "conformal-flat" || e.params.f == "x1^2/2"))
        return e;
    CatalogEntry e;
    e.label = g + "-" + std::to_string(nn);
    e.generator = g;
    e.params.n = nn;
    e.description = "generator default";
    return e;
  }
  for (const auto& pr : norden_presets()) {
    if (pr != label) continue;
    CatalogEntry e;
    e.label = pr;
    e.generator = "norden-block";
    e.params.n = n > 0 ? n : 2;
    e.params.preset = pr;
    return e;
  }
  throw std::invalid_argument("unknown catalog entry '" + label + "'");
}

}  // namespace hg
