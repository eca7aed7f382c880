#include "hg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "hg/errors.hpp"
#include "hg/report.hpp"

namespace hg {

using nlohmann::ordered_json;

namespace {

struct Common {
  std::string catalog;
  std::string config;
  std::string preset;
  std::string f;
  int n = 0;
  int points = 0;
  int tuples = 0;
  std::uint64_t seed = 0;
  double tol_alg = 0.0, tol_d1 = 0.0, tol_d2 = 0.0;
  bool json = false;
  std::string out;
};

struct TensorArgs {
  std::string object;
  std::string point;
  std::string kinds;
  std::string vectors;
};

void add_common(CLI::App* app, Common& c, std::vector<CLI::Option*>& opts) {
  auto* cat = app->add_option("--catalog", c.catalog, "catalog entry or generator name ('all' for the suite)");
  auto* cfg = app->add_option("--config", c.config, "manifold configuration file");
  cat->excludes(cfg);
  cfg->excludes(cat);
  opts.push_back(app->add_option("--n", c.n, "complex dimension n of the base (1 or 2)")->check(CLI::Range(1, 2)));
  app->add_option("--preset", c.preset, "norden-block preset");
  app->add_option("--f", c.f, "conformal-flat exponent");
  opts.push_back(app->add_option("--points", c.points, "sample points")->check(CLI::PositiveNumber));
  opts.push_back(app->add_option("--tuples", c.tuples, "random vector tuples per point")->check(CLI::PositiveNumber));
  opts.push_back(app->add_option("--seed", c.seed, "sampling seed (default: HG_SEED or 42)"));
  opts.push_back(app->add_option("--tol-alg", c.tol_alg, "algebraic tolerance")->check(CLI::PositiveNumber));
  opts.push_back(app->add_option("--tol-d1", c.tol_d1, "first-derivative tolerance")->check(CLI::PositiveNumber));
  opts.push_back(app->add_option("--tol-d2", c.tol_d2, "second-derivative tolerance")->check(CLI::PositiveNumber));
  app->add_flag("--json", c.json, "emit JSON");
  app->add_option("--out", c.out, "write the report to a file");
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double d = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0' || !std::isfinite(d)) {
      throw ConfigError(std::string(what) + ": '" + item + "' is not a number");
    }
    v.push_back(d);
  }
  return v;
}

// A manifold to process with its label and sampling/tolerance settings.
struct Job {
  std::string label;
  BaseGeometry base;
  RunSettings settings;
};

// n_hint: dimension implied by other arguments, used when --n is absent.
std::vector<Job> resolve(const Common& c, const CLI::App* app, int n_hint = 0) {
  if (c.catalog.empty() == c.config.empty()) throw ConfigError("exactly one of --catalog or --config is required");
  RunSettings base_settings;
  base_settings.sampling.points = 16;
  base_settings.sampling.tuples = 16;
  base_settings.sampling.seed = 42;
  if (const char* env = std::getenv("HG_SEED")) {
    char* end = nullptr;
    const unsigned long long s = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw ConfigError("HG_SEED must be a non-negative integer");
    base_settings.sampling.seed = s;
  }

  std::vector<Job> jobs;
  if (!c.config.empty()) {
    ManifoldConfig cfg = load_config(c.config);
    if (app->count("--n") && c.n != cfg.n) throw ConfigError("--n conflicts with [manifold] n of the config");
    RunSettings s = base_settings;
    // explicit values from the file win over the defaults and HG_SEED
    ManifoldConfig defaults;
    if (cfg.sampling.points != defaults.sampling.points) s.sampling.points = cfg.sampling.points;
    if (cfg.sampling.tuples != defaults.sampling.tuples) s.sampling.tuples = cfg.sampling.tuples;
    if (cfg.sampling.seed != defaults.sampling.seed) s.sampling.seed = cfg.sampling.seed;
    s.tolerances = cfg.tolerances;
    jobs.push_back({cfg.name.empty() ? c.config : cfg.name, build_base(cfg), s});
  } else {
    std::vector<CatalogEntry> entries;
    if (c.catalog == "all") {
      if (app->count("--n") || !c.preset.empty() || !c.f.empty()) {
        throw ConfigError("--catalog all does not take --n, --preset or --f");
      }
      entries = catalog_suite();
    } else {
      try {
        entries.push_back(catalog_entry(c.catalog, c.n > 0 ? c.n : n_hint));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      auto& e = entries.back();
      if (c.n > 0 && e.params.n != c.n) throw ConfigError("--n conflicts with catalog entry '" + c.catalog + "'");
      if (!c.preset.empty()) {
        if (e.generator != "norden-block") throw ConfigError("--preset applies to norden-block only");
        e.params.preset = c.preset;
        e.label += ":" + c.preset;
      }
      if (!c.f.empty()) {
        if (e.generator != "conformal-flat") throw ConfigError("--f applies to conformal-flat only");
        e.params.f = c.f;
        e.label += ":f=" + c.f;
      }
    }
    for (const auto& e : entries) {
      try {
        jobs.push_back({e.label, e.build(), base_settings});
      } catch (const ParseError& err) {
        throw ConfigError(std::string("catalog parameter: ") + err.what());
      } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
      }
    }
  }
  for (auto& j : jobs) {
    auto& s = j.settings;
    if (app->count("--points")) s.sampling.points = c.points;
    if (app->count("--tuples")) s.sampling.tuples = c.tuples;
    if (app->count("--seed")) s.sampling.seed = c.seed;
    if (app->count("--tol-alg")) s.tolerances.algebraic = c.tol_alg;
    if (app->count("--tol-d1")) s.tolerances.first_order = c.tol_d1;
    if (app->count("--tol-d2")) s.tolerances.second_order = c.tol_d2;
  }
  return jobs;
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + c.out + "'");
  f << text;
}

int cmd_report(const Common& c, const CLI::App* app, bool verify, std::ostream& out) {
  auto jobs = resolve(c, app);
  int code = kExitOk;
  ordered_json all = ordered_json::array();
  std::string text;
  for (auto& j : jobs) {
    Report r = verify ? run_verify(j.base, j.settings) : run_classify(j.base, j.settings);
    r.subject = j.label;
    if (verify) code = std::max(code, r.exit_code());
    if (c.json) {
      all.push_back(to_json(r));
    } else {
      text += to_text(r);
      if (jobs.size() > 1) text += "\n";
    }
  }
  if (c.json) {
    const ordered_json doc =
        all.size() == 1 ? all[0] : ordered_json{{"schema_version", 1}, {"reports", all}};
    text = dump_json(doc);
  }
  emit(c, text, out);
  return code;
}

// ------------------------------------------------------------------ tensor

struct Row {
  std::vector<int> index;
  double direct = 0.0;
  std::optional<double> closed;
};

std::vector<LiftKind> parse_kinds(const std::string& s, std::size_t want) {
  if (s.size() != want) {
    throw ConfigError("--kinds needs " + std::to_string(want) + " letters from {H, V} for this object");
  }
  std::vector<LiftKind> k;
  for (char ch : s) {
    if (ch == 'H' || ch == 'h') {
      k.push_back(LiftKind::Horizontal);
    } else if (ch == 'V' || ch == 'v') {
      k.push_back(LiftKind::Vertical);
    } else {
      throw ConfigError("--kinds: '" + std::string(1, ch) + "' is not H or V");
    }
  }
  return k;
}

int cmd_tensor(const Common& c, const TensorArgs& t, const CLI::App* app, std::ostream& out) {
  const bool base_object = t.object == "gamma" || t.object == "riemann" || t.object == "nabla_riemann";
  int n_hint = 0;
  if (!t.point.empty()) {
    const auto commas = static_cast<int>(std::count(t.point.begin(), t.point.end(), ','));
    const int per_n = base_object ? 2 : 4;
    if ((commas + 1) % per_n == 0 && (commas + 1) / per_n <= 2) n_hint = (commas + 1) / per_n;
  }
  auto jobs = resolve(c, app, n_hint);
  if (jobs.size() != 1) throw ConfigError("tensor needs a single manifold");
  const Job& job = jobs[0];
  const BaseGeometry& base = job.base;
  const int m = base.dim();
  const int N = 2 * m;
  const auto& tol = job.settings.tolerances;
  const std::string& obj = t.object;

  static const std::vector<std::string> objects = {
      "gamma", "riemann", "nabla_riemann", "ghat", "J1", "J2", "J3", "N1", "N2", "N3",
      "Fhat1", "Fhat2", "Fhat3", "theta1", "theta2", "theta3", "rhat"};
  if (std::find(objects.begin(), objects.end(), obj) == objects.end()) {
    std::string list;
    for (const auto& o : objects) list += (list.empty() ? "" : ", ") + o;
    throw ConfigError("unknown object '" + obj + "' (expected one of " + list + ")");
  }

  std::vector<double> point;
  if (t.point.empty()) {
    point = bundle_points(base, 2, job.settings.sampling.seed)[1];
    if (base_object) point.resize(static_cast<std::size_t>(m));
  } else {
    point = parse_list(t.point, "--point");
    const int want = base_object ? m : N;
    if (static_cast<int>(point.size()) != want && !(base_object && static_cast<int>(point.size()) == N)) {
      throw ConfigError("--point needs " + std::to_string(want) + " coordinates for " + obj);
    }
    if (base_object) point.resize(static_cast<std::size_t>(m));
  }

  std::vector<Vec> vectors;
  if (!t.vectors.empty()) {
    std::stringstream ss(t.vectors);
    std::string item;
    while (std::getline(ss, item, ';')) {
      auto v = parse_list(item, "--vectors");
      if (static_cast<int>(v.size()) != m) throw ConfigError("--vectors: each vector needs " + std::to_string(m) + " entries");
      vectors.push_back(Eigen::Map<Vec>(v.data(), m));
    }
  }
  auto need_vectors = [&](std::size_t k) {
    if (vectors.empty()) {
      Sampler rng(job.settings.sampling.seed);
      for (std::size_t i = 0; i < k; ++i) vectors.push_back(rng.vector(m));
    }
    if (vectors.size() != k) throw ConfigError("--vectors: " + std::to_string(k) + " base vectors required");
  };

  std::vector<Row> rows;
  double tolerance = tol.algebraic;
  const double tiny = 1e-15;
  auto keep = [&](Row r) {
    if (std::abs(r.direct) > tiny || (r.closed && std::abs(*r.closed) > tiny)) rows.push_back(std::move(r));
  };

  if (base_object) {
    JetGeometry jets(base.metric(), obj == "gamma" ? 1 : obj == "riemann" ? 2 : 3);
    const LocalGeometry d = jets.at(point);
    CurvatureBundle cb = christoffel(base);
    if (obj != "gamma") cb = riemann(std::move(cb));
    if (obj == "nabla_riemann") cb = nabla_riemann(std::move(cb));
    const LocalGeometry s = CurvatureEvaluator(cb).at(point);
    const Tensor<double>& A = obj == "gamma" ? d.gamma : obj == "riemann" ? d.riemann : d.nabla_riemann;
    const Tensor<double>& B = obj == "gamma" ? s.gamma : obj == "riemann" ? s.riemann : s.nabla_riemann;
    tolerance = obj == "gamma" ? tol.first_order : tol.second_order;
    std::vector<int> idx(static_cast<std::size_t>(A.rank()), 0);
    for (std::size_t f = 0; f < A.size(); ++f) {
      std::size_t rest = f;
      for (int r = A.rank() - 1; r >= 0; --r) {
        idx[static_cast<std::size_t>(r)] = static_cast<int>(rest % static_cast<std::size_t>(m));
        rest /= static_cast<std::size_t>(m);
      }
      keep({idx, A.flat(f), B.flat(f)});
    }
  } else {
    BundleStructure bs(base);
    ClosedPipeline closed_pipe(bs);
    const ClosedPoint cp = closed_pipe.at(point);
    const Mat E = bs.adapted_frame(point);
    Mat Ec = Mat::Identity(N, N);
    Ec.block(m, 0, m, m) = -cp.K;
    const Mat Ec_inv = Ec.inverse();
    auto lift_direct = [&](LiftKind k, const Vec& x) {
      Vec v = Vec::Zero(N);
      if (k == LiftKind::Horizontal) v.head(m) = x; else v.tail(m) = x;
      return Vec(E * v);
    };
    if (obj == "ghat" || obj[0] == 'J') {
      const FieldMatrix& F = obj == "ghat" ? bs.g_hat() : bs.J(obj[1] - '0');
      std::vector<ScalarField> fields(F.data().begin(), F.data().end());
      const auto vals = FieldProgram(fields, N).evaluate(point);
      Mat closed;
      if (obj == "ghat") {
        Mat D = Mat::Zero(N, N);
        D.block(0, 0, m, m) = cp.base.g;
        D.block(m, m, m, m) = cp.base.g;
        closed = Ec_inv.transpose() * D * Ec_inv;
      } else {
        closed = Ec * bs.J_frame(obj[1] - '0') * Ec_inv;
      }
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) keep({{i, j}, vals[static_cast<std::size_t>(i * N + j)], closed(i, j)});
    } else {
      DirectPipeline dpipe(bs, obj == "rhat");
      const DirectPoint dp = dpipe.at(point);
      if (obj[0] == 'N') {
        const int alpha = obj[1] - '0';
        tolerance = tol.first_order;
        if (t.kinds.empty()) {
          const Tensor<double> T = nijenhuis_tensor(dp, alpha);
          for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
              for (int k = 0; k < N; ++k) keep({{a, b, k}, T(a, b, k), std::nullopt});
        } else {
          const auto ks = parse_kinds(t.kinds, 2);
          need_vectors(2);
          const auto fx = lift(bs, constant_field(vectors[0], m), ks[0]);
          const auto fy = lift(bs, constant_field(vectors[1], m), ks[1]);
          const Vec d = nijenhuis_direct(dp, alpha, FieldJetProgram(fx.components, N).at(point),
                                         FieldJetProgram(fy.components, N).at(point));
          const Vec cl = nijenhuis_closed(cp, alpha, vectors[0], ks[0], vectors[1], ks[1]);
          for (int k = 0; k < N; ++k) rows.push_back({{k}, d(k), cl(k)});
        }
      } else if (obj[0] == 'F') {
        const int alpha = obj[4] - '0';
        tolerance = job.settings.tol_structural;
        if (t.kinds.empty()) {
          const Tensor<double> T = f_alpha_tensor(dp, alpha);
          for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
              for (int k = 0; k < N; ++k) keep({{a, b, k}, T(a, b, k), std::nullopt});
        } else {
          const auto ks = parse_kinds(t.kinds, 3);
          need_vectors(3);
          const double d = f_alpha_direct(dp, alpha, lift_direct(ks[0], vectors[0]), lift_direct(ks[1], vectors[1]),
                                          lift_direct(ks[2], vectors[2]));
          rows.push_back({{}, d, f_alpha_closed(cp, alpha, vectors[0], vectors[1], vectors[2], {ks[0], ks[1], ks[2]})});
        }
      } else if (obj[0] == 't') {
        const int alpha = obj[5] - '0';
        tolerance = job.settings.tol_lie;
        Sampler rng(job.settings.sampling.seed);
        const OrthonormalFrame frame = norden_frame(cp.base.g, cp.J, rng);
        for (int i = 0; i < m; ++i) {
          const Vec e = Vec::Unit(m, i);
          rows.push_back({{0, i}, theta_alpha_direct(dp, alpha, lift_direct(LiftKind::Horizontal, e)),
                          theta_alpha(cp, alpha, e, LiftKind::Horizontal, frame)});
          rows.push_back({{1, i}, theta_alpha_direct(dp, alpha, lift_direct(LiftKind::Vertical, e)),
                          theta_alpha(cp, alpha, e, LiftKind::Vertical, frame)});
        }
      } else {
        tolerance = tol.second_order;
        if (t.kinds.empty()) {
          const Tensor<double>& R = dp.hat.riemann;
          for (std::size_t f = 0; f < R.size(); ++f) {
            std::vector<int> idx(4);
            std::size_t rest = f;
            for (int r = 3; r >= 0; --r) {
              idx[static_cast<std::size_t>(r)] = static_cast<int>(rest % static_cast<std::size_t>(N));
              rest /= static_cast<std::size_t>(N);
            }
            keep({idx, R.flat(f), std::nullopt});
          }
        } else {
          const auto ks = parse_kinds(t.kinds, 4);
          need_vectors(4);
          const double d = dp.hat.curvature4(lift_direct(ks[0], vectors[0]), lift_direct(ks[1], vectors[1]),
                                             lift_direct(ks[2], vectors[2]), lift_direct(ks[3], vectors[3]));
          rows.push_back({{}, d,
                          hat_curvature_closed(cp, vectors[0], vectors[1], vectors[2], vectors[3],
                                               {ks[0], ks[1], ks[2], ks[3]})});
        }
      }
    }
  }

  double max_diff = 0.0, max_direct = 0.0;
  bool compared = false;
  for (const auto& r : rows) {
    max_direct = std::max(max_direct, std::abs(r.direct));
    if (r.closed) {
      compared = true;
      max_diff = std::max(max_diff, std::abs(r.direct - *r.closed));
    }
  }
  const double discrepancy = max_diff / std::max(1.0, max_direct);
  const bool pass = discrepancy <= tolerance;

  std::string text;
  if (c.json) {
    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = "tensor";
    j["subject"] = job.label;
    j["object"] = obj;
    j["point"] = point;
    j["kinds"] = t.kinds;
    ordered_json vs = ordered_json::array();
    for (const auto& v : vectors) vs.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    j["vectors"] = vs;
    ordered_json comps = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json e;
      e["index"] = r.index;
      e["direct"] = r.direct;
      if (r.closed) {
        e["closed"] = *r.closed;
        e["diff"] = std::abs(r.direct - *r.closed);
      } else {
        e["closed"] = nullptr;
      }
      comps.push_back(e);
    }
    j["components"] = comps;
    j["compared"] = compared;
    j["discrepancy"] = discrepancy;
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    text = dump_json(j);
  } else {
    std::ostringstream o;
    o << obj << " on " << job.label << " at (";
    for (std::size_t i = 0; i < point.size(); ++i) o << (i ? ", " : "") << point[i];
    o << ")";
    if (!t.kinds.empty()) o << " kinds " << t.kinds;
    o << "\n";
    if (rows.empty()) o << "  all components vanish\n";
    for (const auto& r : rows) {
      std::string idx;
      for (int i : r.index) idx += (idx.empty() ? "" : ",") + std::to_string(i);
      char line[160];
      if (r.closed) {
        std::snprintf(line, sizeof line, "  [%s]  direct % .12e  closed % .12e  diff %.2e\n", idx.c_str(), r.direct,
                      *r.closed, std::abs(r.direct - *r.closed));
      } else {
        std::snprintf(line, sizeof line, "  [%s]  direct % .12e\n", idx.c_str(), r.direct);
      }
      o << line;
    }
    if (compared) {
      o << "discrepancy " << format_number(discrepancy) << "  tol " << format_number(tolerance) << "  "
        << (pass ? "pass" : "FAIL") << "\n";
    }
    text = o.str();
  }
  emit(c, text, out);
  return pass ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tangent bundles of almost complex manifolds with Norden metric: hypercomplex structure, "
               "Sasaki metric, classification and theorem checks",
               "sasaki-hg"};
  app.require_subcommand(1);
  Common common;
  TensorArgs targs;
  std::vector<CLI::Option*> unused;
  auto* verify = app.add_subcommand("verify", "validate, cross-check both pipelines and run the theorem suite");
  auto* classify = app.add_subcommand("classify", "base and bundle classification only");
  auto* tensor = app.add_subcommand("tensor", "print one object from both pipelines");
  for (auto* sub : {verify, classify, tensor}) add_common(sub, common, unused);
  tensor->add_option("object", targs.object, "gamma | riemann | nabla_riemann | ghat | J1..J3 | N1..N3 | "
                                             "Fhat1..Fhat3 | theta1..theta3 | rhat")
      ->required();
  tensor->add_option("--point", targs.point, "comma-separated coordinates");
  tensor->add_option("--kinds", targs.kinds, "lift kinds, e.g. HV for N, HHV for Fhat, HVHV for rhat");
  tensor->add_option("--vectors", targs.vectors, "base vectors 'a,b;c,d;...'");

  std::vector<std::string> argv_store{"sasaki-hg"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*verify) return cmd_report(common, verify, true, out);
    if (*classify) return cmd_report(common, classify, false, out);
    return cmd_tensor(common, targs, tensor, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "syntax error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GeometryError& e) {
    err << "invalid geometry: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << " at point (";
    for (std::size_t i = 0; i < e.point().size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.17g", i ? ", " : "", e.point()[i]);
      err << buf;
    }
    err << ")\n";
    return kExitDomain;
  }
}

}  // namespace hg
