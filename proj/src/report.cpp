#include "hg/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hg {

using nlohmann::ordered_json;

AnalysisOptions analysis_options(const RunSettings& s) {
  AnalysisOptions o;
  o.points = s.sampling.points;
  o.tuples = s.sampling.tuples;
  o.seed = s.sampling.seed;
  o.tol_algebraic = s.tolerances.algebraic;
  o.tol_first = s.tolerances.first_order;
  o.tol_second = s.tolerances.second_order;
  o.tol_structural = s.tol_structural;
  o.tol_lie = s.tol_lie;
  o.tol_quaternionic = s.tol_quaternionic;
  return o;
}

int Report::failed_checks() const {
  if (!analysis) return 0;
  int n = 0;
  for (const auto& c : analysis->checks) n += c.pass ? 0 : 1;
  return n;
}

int Report::violated() const {
  int n = 0;
  for (const auto& t : theorems) n += t.verdict == Verdict::Violated ? 1 : 0;
  return n;
}

int Report::exit_code() const { return failed_checks() == 0 && violated() == 0 && validation.valid ? 0 : 1; }

namespace {

using Clock = std::chrono::steady_clock;

Report classify_common(const BaseGeometry& base, const RunSettings& s, const AnalysisContext& ctx) {
  Report r;
  r.subject = base.name();
  r.n = base.n();
  r.settings = s;
  r.validation = validate_base(base, s.sampling);
  BaseClassifyOptions bo;
  bo.sampling = s.sampling;
  bo.thresholds = s.thresholds;
  r.base = classify_base(base, bo);
  BundleClassifyOptions to;
  to.sampling = s.sampling;
  to.thresholds = s.thresholds;
  to.lie_tol = s.tol_lie;
  to.compat_tol = s.tol_quaternionic;
  r.bundle = classify_bundle(ctx, to);
  return r;
}

}  // namespace

Report run_verify(const BaseGeometry& base, const RunSettings& s) {
  const auto t0 = Clock::now();
  BundleStructure bs(base);
  DirectPipeline dp(bs);
  ClosedPipeline cp(bs);
  const AnalysisOptions opt = analysis_options(s);
  AnalysisContext ctx = make_context(bs, dp, cp, opt.points, opt.seed);
  Report r = classify_common(base, s, ctx);
  r.command = "verify";
  AnalysisResult a;
  check_quaternionic(ctx, opt, a);
  check_brackets(ctx, opt, a);
  check_nabla(ctx, opt, a);
  check_nijenhuis(ctx, opt, a);
  check_curvature(ctx, opt, a);
  check_structural(ctx, opt, a);
  check_lie_forms(ctx, opt, a);
  r.analysis = std::move(a);
  r.theorems = theorem_suite(r.base, r.bundle);
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

Report run_classify(const BaseGeometry& base, const RunSettings& s) {
  const auto t0 = Clock::now();
  BundleStructure bs(base);
  DirectPipeline dp(bs);
  ClosedPipeline cp(bs);
  AnalysisContext ctx = make_context(bs, dp, cp, s.sampling.points, s.sampling.seed);
  Report r = classify_common(base, s, ctx);
  r.command = "classify";
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

namespace {

void write_json(const ordered_json& j, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + ordered_json(k).dump() + ": ";
        write_json(v, depth + 1, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(j[i], depth + 1, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const ordered_json& j) {
  std::string out;
  write_json(j, 0, out);
  out += "\n";
  return out;
}

ordered_json to_json(const ClassificationReport& r) {
  ordered_json j;
  j["subject"] = r.subject;
  j["dim"] = r.dim;
  ordered_json flags = ordered_json::object();
  for (const auto& f : r.flags) flags[f.name] = f.holds();
  j["flags"] = flags;
  ordered_json details = ordered_json::array();
  for (const auto& f : r.flags) {
    ordered_json d;
    d["name"] = f.name;
    d["membership"] = to_string(f.membership);
    d["residual"] = f.residual;
    d["member_tol"] = f.member_tol;
    d["non_member_tol"] = f.non_member_tol;
    d["witness_point"] = f.witness_point;
    details.push_back(d);
  }
  j["details"] = details;
  return j;
}

ordered_json to_json(const CrossCheck& c) {
  ordered_json j;
  j["object"] = c.object;
  j["family"] = c.family;
  j["listed"] = c.listed;
  j["max_abs_diff"] = c.max_abs_diff;
  j["max_abs_direct"] = c.max_abs_direct;
  j["discrepancy"] = c.discrepancy;
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  j["samples"] = c.samples;
  j["worst_point"] = c.worst_point;
  return j;
}

ordered_json to_json(const TheoremVerdict& v) {
  ordered_json j;
  j["id"] = v.id;
  j["statement"] = v.statement;
  j["kind"] = v.equivalence ? "iff" : "implication";
  j["convention_dependent"] = v.convention_dependent;
  j["hypothesis"] = to_string(v.hypothesis);
  j["conclusion"] = to_string(v.conclusion);
  j["verdict"] = to_string(v.verdict);
  j["witness_side"] = v.witness_side;
  ordered_json res = ordered_json::array();
  for (const auto& [name, value] : v.residuals) res.push_back({{"flag", name}, {"residual", value}});
  j["residuals"] = res;
  j["witness_point"] = v.witness_point;
  return j;
}

ordered_json to_json(const Report& r) {
  ordered_json j;
  j["schema_version"] = 1;
  j["command"] = r.command;
  j["subject"] = r.subject;
  j["n"] = r.n;
  j["base_dim"] = 2 * r.n;
  j["bundle_dim"] = 4 * r.n;
  const auto& s = r.settings;
  j["settings"] = {{"points", s.sampling.points},
                   {"tuples", s.sampling.tuples},
                   {"seed", s.sampling.seed},
                   {"tolerances",
                    {{"algebraic", s.tolerances.algebraic},
                     {"first_order", s.tolerances.first_order},
                     {"second_order", s.tolerances.second_order},
                     {"structural", s.tol_structural},
                     {"lie", s.tol_lie},
                     {"quaternionic", s.tol_quaternionic},
                     {"member", s.thresholds.member},
                     {"non_member", s.thresholds.non_member}}}};
  j["conventions"] = {{"curvature", "R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]"},
                      {"rho_tilde", "rho~(y,z) = g^ij R(e_i, y, z, J e_j)"}};
  const auto& v = r.validation;
  j["validation"] = {{"valid", v.valid},
                     {"j_square_residual", v.j_square_residual},
                     {"symmetry_residual", v.symmetry_residual},
                     {"compatibility_residual", v.compatibility_residual},
                     {"min_abs_det", v.min_abs_det},
                     {"signature_ok", v.signature_ok},
                     {"tolerances", {{"j_square", 1e-14}, {"symmetry", 1e-10}, {"compatibility", 1e-10}, {"min_abs_det", 1e-10}}},
                     {"samples", v.samples},
                     {"issues", v.issues}};
  j["base_classification"] = to_json(r.base);
  j["bundle_classification"] = to_json(r.bundle);
  if (r.analysis) {
    ordered_json rows = ordered_json::array();
    for (const auto& c : r.analysis->checks) rows.push_back(to_json(c));
    j["cross_checks"] = rows;
    const auto& q = r.analysis->quaternionic;
    j["quaternionic"] = {{"square", q.square_residual},
                         {"product", q.product_residual},
                         {"anticommute", q.anticommute_residual},
                         {"compatibility", q.compatibility_residual},
                         {"forms", q.forms_residual},
                         {"signature_ok", q.signature_ok},
                         {"samples", q.samples}};
    ordered_json th = ordered_json::array();
    for (const auto& t : r.theorems) th.push_back(to_json(t));
    j["theorems"] = th;
    j["summary"] = {{"failed_cross_checks", r.failed_checks()},
                    {"violated_theorems", r.violated()},
                    {"exit_code", r.exit_code()}};
  }
  return j;
}

std::string to_text(const Report& r) {
  std::ostringstream o;
  const auto& s = r.settings;
  o << r.command << ": " << r.subject << "  (base dim " << 2 * r.n << ", TM dim " << 4 * r.n << ")\n";
  o << "sampling: points=" << s.sampling.points << " tuples=" << s.sampling.tuples << " seed=" << s.sampling.seed
    << "\n";
  o << "\nvalidation: " << (r.validation.valid ? "ok" : "FAILED") << "\n";
  for (const auto& i : r.validation.issues) o << "  " << i << "\n";

  auto flags = [&](const ClassificationReport& c, const char* title) {
    o << "\n" << title << " (" << c.subject << ")\n";
    for (const auto& f : c.flags) {
      char line[160];
      std::snprintf(line, sizeof line, "  %-22s %-12s residual %s  (member < %s, non-member > %s)\n", f.name.c_str(),
                    to_string(f.membership), format_number(f.residual).c_str(), format_number(f.member_tol).c_str(),
                    format_number(f.non_member_tol).c_str());
      o << line;
    }
  };
  flags(r.base, "base classification");
  flags(r.bundle, "bundle classification");

  if (r.analysis) {
    o << "\ncross-checks (direct vs closed)\n";
    for (const auto& c : r.analysis->checks) {
      char line[200];
      std::snprintf(line, sizeof line, "  %-16s %-7s %s discrepancy %s  tol %s  %s\n", c.object.c_str(),
                    c.family.c_str(), c.listed ? "     " : "(zero)", format_number(c.discrepancy).c_str(),
                    format_number(c.tolerance).c_str(), c.pass ? "pass" : "FAIL");
      o << line;
    }
    o << "\ntheorems\n";
    for (const auto& t : r.theorems) {
      char line[240];
      std::snprintf(line, sizeof line, "  %-10s %-10s %-12s %s%s\n", t.id.c_str(), to_string(t.verdict),
                    t.witness_side.c_str(), t.statement.c_str(),
                    t.convention_dependent ? "  [depends on rho~ convention]" : "");
      o << line;
    }
    o << "\nsummary: " << r.failed_checks() << " failed cross-checks, " << r.violated() << " violated theorems\n";
  }
  char line[64];
  std::snprintf(line, sizeof line, "time: %.2f s\n", r.seconds);
  o << line;
  return o.str();
}

}  // namespace hg
