#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hg/cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hg::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "hg-cli-tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

// Scoped HG_SEED
struct SeedEnv {
  explicit SeedEnv(const char* v) {
    if (v) ::setenv("HG_SEED", v, 1); else ::unsetenv("HG_SEED");
  }
  ~SeedEnv() { ::unsetenv("HG_SEED"); }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("verify flat-standard in dimension 8") {
  SeedEnv env(nullptr);
  const Run r = run({"verify", "--catalog", "flat-standard", "--n", "2", "--json"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["bundle_dim"] == 8);
  CHECK(j["bundle_classification"]["flags"]["pseudo_hyper_kaehler"] == true);
  CHECK(j["summary"]["violated_theorems"] == 0);
  CHECK(j["summary"]["failed_cross_checks"] == 0);
  for (const auto& c : j["cross_checks"]) {
    CHECK(c.contains("tolerance"));
    CHECK(c["pass"] == true);
  }
}

TEST_CASE("verify conformal-flat reports a non-hypercomplex bundle") {
  SeedEnv env(nullptr);
  const Run r = run({"verify", "--catalog", "conformal-flat", "--seed", "7", "--json"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["settings"]["seed"] == 7);
  CHECK(j["bundle_classification"]["flags"]["hypercomplex"] == false);
}

TEST_CASE("classify emits both classifications and no cross-checks") {
  SeedEnv env(nullptr);
  const Run flat = run({"classify", "--catalog", "flat-standard", "--json"});
  CHECK(flat.code == 0);
  const json f = json::parse(flat.out);
  CHECK(f["bundle_classification"]["flags"]["K_J1"] == true);
  CHECK(f["bundle_classification"]["flags"]["W0_J2"] == true);
  CHECK(f["bundle_classification"]["flags"]["W0_J3"] == true);
  CHECK_FALSE(f.contains("cross_checks"));
  CHECK_FALSE(f.contains("theorems"));

  const json nb = json::parse(run({"classify", "--catalog", "norden-block", "--json"}).out);
  CHECK(nb["bundle_classification"]["flags"]["AK_J1"] == true);
  CHECK(nb["bundle_classification"]["flags"]["theta2_zero"] == false);
  for (const auto& d : nb["bundle_classification"]["details"]) {
    CHECK(d.contains("residual"));
    CHECK(d.contains("member_tol"));
    CHECK(d.contains("non_member_tol"));
  }
}

TEST_CASE("JSON reports are byte-identical across runs and carry no timing") {
  SeedEnv env(nullptr);
  const Run a = run({"verify", "--catalog", "norden-block", "--seed", "42", "--json"});
  const Run b = run({"verify", "--catalog", "norden-block", "--seed", "42", "--json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("seconds") == std::string::npos);
  CHECK(a.out.find("time") == std::string::npos);
  const Run c = run({"verify", "--catalog", "norden-block", "--seed", "43", "--json"});
  CHECK(c.out != a.out);
  // floats carry 17 significant digits
  CHECK(a.out.find("9.9999999999999995e-07") != std::string::npos);
}

TEST_CASE("seed precedence: flag over config over HG_SEED over 42") {
  auto seed_of = [](const Run& r) { return json::parse(r.out)["settings"]["seed"].get<std::uint64_t>(); };
  {
    SeedEnv env(nullptr);
    CHECK(seed_of(run({"classify", "--catalog", "flat-standard", "--json"})) == 42);
  }
  SeedEnv env("9");
  CHECK(seed_of(run({"classify", "--catalog", "flat-standard", "--json"})) == 9);
  CHECK(seed_of(run({"classify", "--catalog", "flat-standard", "--json", "--seed", "5"})) == 5);
  const std::string cfg = write_temp("seeded.cfg", "[manifold]\ncatalog = flat-standard\n[sampling]\nseed = 11\n");
  CHECK(seed_of(run({"classify", "--config", cfg, "--json"})) == 11);
  CHECK(seed_of(run({"classify", "--config", cfg, "--json", "--seed", "5"})) == 5);
  SeedEnv bad("abc");
  CHECK(run({"classify", "--catalog", "flat-standard"}).code == 2);
}

TEST_CASE("config files") {
  SeedEnv env(nullptr);
  const std::string good = write_temp("good.cfg",
                                      "# conformal Norden plane\n[manifold]\nname = plane\nn = 1\nJ = standard\n"
                                      "[metric]\ng11 = exp(2*x1)\ng12 = 0\ng22 = -exp(2*x1)\n"
                                      "[domain]\nlo = -0.4\nhi = 0.4\n[sampling]\npoints = 8\ntuples = 8\n"
                                      "[tolerances]\nalgebraic = 1e-9\nfirst_order = 1e-7\nsecond_order = 1e-5\n");
  const Run r = run({"verify", "--config", good, "--json"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["subject"] == "plane");
  CHECK(j["settings"]["points"] == 8);

  const std::string explicit_j = write_temp("j.cfg", "[manifold]\nn = 1\nJ = 0 -1; 1 0\n[metric]\ng11 = 1\ng22 = -1\n");
  CHECK(run({"classify", "--config", explicit_j}).code == 0);
  const std::string cat = write_temp("cat.cfg", "[manifold]\nn = 2\ncatalog = norden-block\npreset = holomorphic-hyperbolic\n");
  CHECK(run({"classify", "--config", cat}).code == 0);
}

TEST_CASE("broken configs exit with code 2 and a located message") {
  SeedEnv env(nullptr);
  const Run syntax = run({"verify", "--config", write_temp("broken.cfg", "[manifold]\nn = 1\n[metric]\ng11 = 1 +\ng22 = -1\n")});
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("g11") != std::string::npos);
  CHECK(syntax.err.find("offset 3") != std::string::npos);

  const std::vector<std::pair<std::string, std::string>> cases = {
      {"unknown-key.cfg", "[manifold]\nn = 1\ncolour = red\n[metric]\ng11 = 1\ng22 = -1\n"},
      {"unknown-section.cfg", "[manifold]\nn = 1\n[metrics]\ng11 = 1\n"},
      {"bad-number.cfg", "[manifold]\nn = one\n[metric]\ng11 = 1\ng22 = -1\n"},
      {"dimension.cfg", "[manifold]\nn = 3\n[metric]\ng11 = 1\n"},
      {"coordinate.cfg", "[manifold]\nn = 1\n[metric]\ng11 = 1 + x3\ng22 = -1\n"},
      {"asymmetric.cfg", "[manifold]\nn = 1\n[metric]\ng11 = 1\ng12 = x1\ng21 = x2\ng22 = -1\n"},
      {"no-metric.cfg", "[manifold]\nn = 1\n"},
      {"bad-j.cfg", "[manifold]\nn = 1\nJ = 0 1\n[metric]\ng11 = 1\ng22 = -1\n"},
      {"not-complex.cfg", "[manifold]\nn = 1\nJ = 0 2; 1 0\n[metric]\ng11 = 1\ng22 = -1\n"},
      {"incompatible.cfg", "[manifold]\nn = 1\n[metric]\ng11 = 1\ng22 = 1\n"},
      {"degenerate.cfg", "[manifold]\nn = 1\n[metric]\ng11 = 0\ng22 = 0\n"},
      {"domain.cfg", "[manifold]\nn = 1\n[metric]\ng11 = 1\ng22 = -1\n[domain]\nlo = 1\nhi = 0\n"},
      {"ini.cfg", "[manifold\nn = 1\n"},
      {"twice.cfg", "[manifold]\nn = 1\n[metric]\ng11 = 1\ng_11 = 2\ng22 = -1\n"},
  };
  for (const auto& [name, text] : cases) {
    const Run r = run({"verify", "--config", write_temp(name, text)});
    CHECK_MESSAGE(r.code == 2, name << ": " << r.err);
    CHECK_FALSE(r.err.empty());
  }
  CHECK(run({"verify", "--config", "/nonexistent/hg.cfg"}).code == 2);
}

TEST_CASE("domain errors exit with code 3 and print the point") {
  SeedEnv env(nullptr);
  const Run r = run({"verify", "--config", write_temp("log.cfg", "[manifold]\nn = 1\n[metric]\ng11 = log(x1 - 5)\ng22 = -1\n")});
  CHECK(r.code == 3);
  CHECK(r.err.find("at point (") != std::string::npos);
}

TEST_CASE("usage errors") {
  SeedEnv env(nullptr);
  CHECK(run({}).code == 2);
  CHECK(run({"verify"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"verify", "--catalog", "flat-standard", "--config", "x.cfg"}).code == 2);
  CHECK(run({"verify", "--catalog", "nope"}).code == 2);
  CHECK(run({"verify", "--catalog", "flat-standard", "--n", "3"}).code == 2);
  CHECK(run({"verify", "--catalog", "flat-standard", "--points", "0"}).code == 2);
  CHECK(run({"verify", "--catalog", "flat-standard-1", "--n", "2"}).code == 2);
  CHECK(run({"tensor", "bogus", "--catalog", "flat-standard"}).code == 2);
  CHECK(run({"tensor", "ghat", "--catalog", "flat-standard", "--point", "1,2,3"}).code == 2);
  CHECK(run({"tensor", "N1", "--catalog", "flat-standard", "--kinds", "HX"}).code == 2);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("verify") != std::string::npos);
}

TEST_CASE("tensor inspection") {
  SeedEnv env(nullptr);
  const Run g = run({"tensor", "ghat", "--catalog", "flat-standard", "--point", "0,0,0,0,1,0,0,0", "--json"});
  CHECK(g.code == 0);
  const json gj = json::parse(g.out);
  CHECK(gj["pass"] == true);
  int diag = 0;
  for (const auto& c : gj["components"]) {
    CHECK(c["index"][0] == c["index"][1]);
    CHECK(std::abs(c["direct"].get<double>()) == 1.0);
    ++diag;
  }
  CHECK(diag == 8);

  const json t1 = json::parse(run({"tensor", "theta1", "--catalog", "norden-block-2", "--json"}).out);
  for (const auto& c : t1["components"]) CHECK(std::abs(c["direct"].get<double>()) <= 1e-8);

  const json n3 = json::parse(run({"tensor", "N3", "--catalog", "conformal-flat", "--kinds", "VV", "--json"}).out);
  for (const auto& c : n3["components"]) {
    CHECK(c["direct"].get<double>() == 0.0);
    CHECK(c["closed"].get<double>() == 0.0);
  }

  for (const char* obj : {"gamma", "riemann", "nabla_riemann", "J1", "J2", "J3", "N1", "Fhat2", "theta3", "rhat"}) {
    const Run r = run({"tensor", obj, "--catalog", "norden-block"});
    CHECK_MESSAGE(r.code == 0, obj << r.err);
  }
  CHECK(run({"tensor", "rhat", "--catalog", "norden-block-2", "--kinds", "HHHV"}).code == 0);
  CHECK(run({"tensor", "Fhat1", "--catalog", "conformal-flat", "--kinds", "HVH", "--vectors", "1,0;0,1;1,1"}).code == 0);
}

TEST_CASE("--out writes the report to a file and --catalog all covers the suite") {
  SeedEnv env(nullptr);
  const auto path = (std::filesystem::temp_directory_path() / "hg-cli-tests" / "all.json").string();
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  const Run r = run({"verify", "--catalog", "all", "--points", "4", "--tuples", "4", "--json", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const json j = json::parse(in);
  CHECK(j["reports"].size() >= 8);
}

TEST_CASE("text report") {
  SeedEnv env(nullptr);
  const Run r = run({"verify", "--catalog", "conformal-flat"});
  CHECK(r.code == 0);
  CHECK(r.out.find("summary: 0 failed cross-checks, 0 violated theorems") != std::string::npos);
  CHECK(r.out.find("time:") != std::string::npos);
}

}  // TEST_SUITE
