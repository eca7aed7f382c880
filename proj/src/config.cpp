#include "hg/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hg/errors.hpp"

namespace hg {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string r = s.substr(b, e - b + 1);
  if (r.size() >= 2 && r.front() == '"' && r.back() == '"') r = r.substr(1, r.size() - 2);
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

template <typename T>
T number(const pt::ptree& sec, const std::string& section, const std::string& key, T fallback) {
  auto v = sec.get_optional<std::string>(key);
  if (!v) return fallback;
  const std::string s = trim(*v);
  std::istringstream in(s);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) throw ConfigError("[" + section + "] " + key + ": '" + s + "' is not a valid number");
  return out;
}

void check_keys(const pt::ptree& sec, const std::string& section, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : sec) {
    bool ok = false;
    for (const char* allowed : keys) ok |= k == allowed;
    if (!ok) throw ConfigError("[" + section + "] unknown key '" + k + "'");
  }
}

Eigen::MatrixXd parse_matrix(const std::string& s, int dim) {
  const auto rows = split(s, ';');
  if (static_cast<int>(rows.size()) != dim) {
    throw ConfigError("[manifold] J: expected " + std::to_string(dim) + " rows separated by ';'");
  }
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    std::istringstream in(rows[static_cast<std::size_t>(i)]);
    for (int j = 0; j < dim; ++j) {
      if (!(in >> m(i, j))) throw ConfigError("[manifold] J: row " + std::to_string(i + 1) + " is malformed");
    }
    std::string rest;
    if (in >> rest) throw ConfigError("[manifold] J: row " + std::to_string(i + 1) + " has too many entries");
  }
  return m;
}

}  // namespace

ManifoldConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.message(), e.line());
  }
  for (const auto& [name, sec] : tree) {
    if (name != "manifold" && name != "metric" && name != "domain" && name != "sampling" && name != "tolerances") {
      throw ConfigError("unknown section [" + name + "]");
    }
    if (!sec.data().empty()) throw ConfigError("key '" + name + "' outside of any section");
  }

  ManifoldConfig cfg;
  const pt::ptree empty;
  const pt::ptree& man = tree.get_child("manifold", empty);
  check_keys(man, "manifold", {"name", "n", "J", "catalog", "f", "preset", "A", "B"});
  cfg.name = trim(man.get<std::string>("name", ""));
  cfg.n = number<int>(man, "manifold", "n", 1);
  if (cfg.n < 1 || cfg.n > kMaxSymbolicDim / 2) {
    throw ConfigError("[manifold] n must be between 1 and " + std::to_string(kMaxSymbolicDim / 2));
  }
  const int dim = 2 * cfg.n;
  const std::string J = trim(man.get<std::string>("J", "standard"));
  if (J != "standard") cfg.J = parse_matrix(J, dim);
  cfg.catalog = trim(man.get<std::string>("catalog", ""));
  cfg.params.n = cfg.n;
  cfg.params.f = trim(man.get<std::string>("f", ""));
  cfg.params.preset = trim(man.get<std::string>("preset", ""));
  if (auto a = man.get_optional<std::string>("A")) cfg.params.A = split(*a, ';');
  if (auto b = man.get_optional<std::string>("B")) cfg.params.B = split(*b, ';');

  const pt::ptree& met = tree.get_child("metric", empty);
  if (cfg.catalog.empty()) {
    if (met.empty()) throw ConfigError("either [manifold] catalog or a [metric] section is required");
    cfg.metric.assign(static_cast<std::size_t>(dim * dim), "");
    for (const auto& [key, val] : met) {
      std::string k = key;
      k.erase(std::remove(k.begin(), k.end(), '_'), k.end());
      if (k.size() != 3 || k[0] != 'g' || k[1] < '1' || k[2] < '1' || k[1] - '0' > dim || k[2] - '0' > dim) {
        throw ConfigError("[metric] unknown key '" + key + "' (expected gIJ with 1 <= I, J <= " +
                          std::to_string(dim) + ")");
      }
      const int i = k[1] - '1', j = k[2] - '1';
      auto& slot = cfg.metric[static_cast<std::size_t>(i * dim + j)];
      if (!slot.empty()) throw ConfigError("[metric] g" + std::to_string(i + 1) + std::to_string(j + 1) + " given twice");
      slot = trim(val.data());
      if (slot.empty()) throw ConfigError("[metric] " + key + " is empty");
    }
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        auto& a = cfg.metric[static_cast<std::size_t>(i * dim + j)];
        auto& b = cfg.metric[static_cast<std::size_t>(j * dim + i)];
        if (a.empty()) a = b;
        if (b.empty()) b = a;
      }
  } else if (!met.empty()) {
    throw ConfigError("[metric] cannot be combined with [manifold] catalog");
  }

  const pt::ptree& dom = tree.get_child("domain", empty);
  check_keys(dom, "domain", {"lo", "hi"});
  cfg.domain.lo = number<double>(dom, "domain", "lo", cfg.domain.lo);
  cfg.domain.hi = number<double>(dom, "domain", "hi", cfg.domain.hi);
  if (!(cfg.domain.lo < cfg.domain.hi)) throw ConfigError("[domain] lo must be below hi");
  cfg.params.domain = cfg.domain;

  const pt::ptree& smp = tree.get_child("sampling", empty);
  check_keys(smp, "sampling", {"points", "tuples", "seed"});
  cfg.sampling.points = number<int>(smp, "sampling", "points", cfg.sampling.points);
  cfg.sampling.tuples = number<int>(smp, "sampling", "tuples", cfg.sampling.tuples);
  cfg.sampling.seed = number<std::uint64_t>(smp, "sampling", "seed", cfg.sampling.seed);
  if (cfg.sampling.points < 1 || cfg.sampling.tuples < 1) throw ConfigError("[sampling] points and tuples must be >= 1");

  const pt::ptree& tol = tree.get_child("tolerances", empty);
  check_keys(tol, "tolerances", {"algebraic", "first_order", "second_order"});
  cfg.tolerances.algebraic = number<double>(tol, "tolerances", "algebraic", cfg.tolerances.algebraic);
  cfg.tolerances.first_order = number<double>(tol, "tolerances", "first_order", cfg.tolerances.first_order);
  cfg.tolerances.second_order = number<double>(tol, "tolerances", "second_order", cfg.tolerances.second_order);
  return cfg;
}

ManifoldConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

BaseGeometry build_base(const ManifoldConfig& cfg) {
  if (!cfg.catalog.empty()) {
    if (cfg.J) throw ConfigError("[manifold] J cannot be combined with catalog");
    try {
      return builtin(cfg.catalog, cfg.params);
    } catch (const ParseError& e) {
      throw ConfigError(std::string("[manifold] catalog parameter: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  const int dim = 2 * cfg.n;
  FieldMatrix g(dim, 2, ScalarField::constant(0.0, dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const std::string& src = cfg.metric[static_cast<std::size_t>(i * dim + j)];
      if (src.empty()) continue;
      try {
        g(i, j) = parse_field(src, dim);
      } catch (const ParseError& e) {
        throw ConfigError("[metric] g" + std::to_string(i + 1) + std::to_string(j + 1) + " = '" + src + "': " +
                          e.what());
      }
    }
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (!structurally_equal(simplify(g(i, j)), simplify(g(j, i)))) {
        throw ConfigError("[metric] g" + std::to_string(i + 1) + std::to_string(j + 1) + " and g" +
                          std::to_string(j + 1) + std::to_string(i + 1) + " differ");
      }
  const Eigen::MatrixXd J = cfg.J ? *cfg.J : BaseGeometry::standard_complex_structure(cfg.n);
  BaseGeometry base(cfg.n, std::move(g), J, cfg.domain, cfg.name.empty() ? "config" : cfg.name);
  require_valid(validate_base(base, cfg.sampling));
  return base;
}

}  // namespace hg
