#include "hg/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "hg/errors.hpp"

namespace hg {

Point::Point(std::vector<double> coordinates) : coords_(std::move(coordinates)) {
  for (double c : coords_) {
    if (!std::isfinite(c)) throw std::invalid_argument("Point: non-finite coordinate");
  }
}

Point::Point(std::initializer_list<double> coordinates)
    : Point(std::vector<double>(coordinates)) {}

namespace {

NodePtr make_node(NodeKind kind, std::vector<NodePtr> args, double value = 0.0,
                  int index = 0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->value = value;
  n->index = index;
  n->max_coordinate = kind == NodeKind::Coordinate ? index : -1;
  for (const auto& a : args) n->max_coordinate = std::max(n->max_coordinate, a->max_coordinate);
  n->args = std::move(args);
  return n;
}

NodePtr make_const(double v) { return make_node(NodeKind::Constant, {}, v); }

bool is_const(const NodePtr& n) { return n->kind == NodeKind::Constant; }
bool is_const(const NodePtr& n, double v) { return is_const(n) && n->value == v; }

NodePtr make_neg(const NodePtr& a);

NodePtr make_sum(const std::vector<NodePtr>& terms) {
  std::vector<NodePtr> flat;
  double c = 0.0;
  bool has_const = false;
  for (const auto& t : terms) {
    if (t->kind == NodeKind::Sum) {
      for (const auto& s : t->args) {
        if (is_const(s)) {
          c += s->value;
          has_const = true;
        } else {
          flat.push_back(s);
        }
      }
    } else if (is_const(t)) {
      c += t->value;
      has_const = true;
    } else {
      flat.push_back(t);
    }
  }
  if (has_const && c != 0.0) flat.push_back(make_const(c));
  if (flat.empty()) return make_const(0.0);
  if (flat.size() == 1) return flat.front();
  return make_node(NodeKind::Sum, std::move(flat));
}

NodePtr make_product(const std::vector<NodePtr>& factors) {
  std::vector<NodePtr> flat;
  double c = 1.0;
  auto absorb = [&](const NodePtr& f, auto&& self) -> void {
    if (is_const(f)) {
      c *= f->value;
    } else if (f->kind == NodeKind::Product) {
      for (const auto& g : f->args) self(g, self);
    } else if (f->kind == NodeKind::Negation) {
      c = -c;
      self(f->args.front(), self);
    } else {
      flat.push_back(f);
    }
  };
  for (const auto& f : factors) absorb(f, absorb);
  if (c == 0.0) return make_const(0.0);
  if (flat.empty()) return make_const(c);
  NodePtr body = flat.size() == 1 ? flat.front() : make_node(NodeKind::Product, flat);
  if (c == 1.0) return body;
  if (c == -1.0) return make_node(NodeKind::Negation, {body});
  flat.insert(flat.begin(), make_const(c));
  return make_node(NodeKind::Product, std::move(flat));
}

NodePtr make_neg(const NodePtr& a) {
  if (is_const(a)) return make_const(-a->value);
  if (a->kind == NodeKind::Negation) return a->args.front();
  if (a->kind == NodeKind::Product && is_const(a->args.front())) {
    std::vector<NodePtr> f = a->args;
    f.front() = make_const(-f.front()->value);
    return make_product(f);
  }
  return make_node(NodeKind::Negation, {a});
}

NodePtr make_quotient(const NodePtr& a, const NodePtr& b) {
  if (is_const(b, 1.0)) return a;
  if (is_const(a, 0.0)) return a;
  if (is_const(b, -1.0)) return make_neg(a);
  if (is_const(a) && is_const(b) && std::abs(b->value) >= 1e-300) {
    return make_const(a->value / b->value);
  }
  if (a->kind == NodeKind::Negation) return make_neg(make_quotient(a->args.front(), b));
  return make_node(NodeKind::Quotient, {a, b});
}

NodePtr make_power(const NodePtr& a, int n) {
  if (n == 0) return make_const(1.0);
  if (n == 1) return a;
  if (is_const(a)) {
    if (a->value != 0.0 || n > 0) return make_const(std::pow(a->value, n));
  }
  if (a->kind == NodeKind::Power) return make_power(a->args.front(), a->index * n);
  if (a->kind == NodeKind::Negation) {
    NodePtr p = make_power(a->args.front(), n);
    return n % 2 == 0 ? p : make_neg(p);
  }
  return make_node(NodeKind::Power, {a}, 0.0, n);
}

double apply_unary(NodeKind k, double x) {
  switch (k) {
    case NodeKind::Sin: return std::sin(x);
    case NodeKind::Cos: return std::cos(x);
    case NodeKind::Exp: return std::exp(x);
    case NodeKind::Log: return std::log(x);
    case NodeKind::Sinh: return std::sinh(x);
    case NodeKind::Cosh: return std::cosh(x);
    default: throw std::logic_error("not a unary function node");
  }
}

NodePtr make_unary(NodeKind k, const NodePtr& a) {
  if (is_const(a) && !(k == NodeKind::Log && a->value <= 0.0)) {
    double v = apply_unary(k, a->value);
    if (std::isfinite(v)) return make_const(v);
  }
  return make_node(k, {a});
}

// Rebuild a node from (possibly new) children through the smart constructors.
NodePtr rebuild(const Node& n, std::vector<NodePtr> args) {
  switch (n.kind) {
    case NodeKind::Constant:
    case NodeKind::Coordinate: return make_node(n.kind, {}, n.value, n.index);
    case NodeKind::Sum: return make_sum(args);
    case NodeKind::Product: return make_product(args);
    case NodeKind::Negation: return make_neg(args[0]);
    case NodeKind::Quotient: return make_quotient(args[0], args[1]);
    case NodeKind::Power: return make_power(args[0], n.index);
    default: return make_unary(n.kind, args[0]);
  }
}

class Differentiator {
 public:
  explicit Differentiator(int coord) : coord_(coord) {}

  NodePtr operator()(const NodePtr& n) {
    if (n->max_coordinate < coord_ && n->kind != NodeKind::Coordinate) return zero();
    if (auto it = memo_.find(n.get()); it != memo_.end()) return it->second;
    NodePtr d = compute(n);
    memo_.emplace(n.get(), d);
    return d;
  }

 private:
  NodePtr zero() { return make_const(0.0); }

  NodePtr compute(const NodePtr& n) {
    const auto& a = n->args;
    switch (n->kind) {
      case NodeKind::Constant: return zero();
      case NodeKind::Coordinate: return make_const(n->index == coord_ ? 1.0 : 0.0);
      case NodeKind::Sum: {
        std::vector<NodePtr> terms;
        for (const auto& t : a) terms.push_back((*this)(t));
        return make_sum(terms);
      }
      case NodeKind::Product: {
        std::vector<NodePtr> terms;
        for (std::size_t i = 0; i < a.size(); ++i) {
          NodePtr di = (*this)(a[i]);
          if (is_const(di, 0.0)) continue;
          std::vector<NodePtr> f{di};
          for (std::size_t j = 0; j < a.size(); ++j) {
            if (j != i) f.push_back(a[j]);
          }
          terms.push_back(make_product(f));
        }
        return make_sum(terms);
      }
      case NodeKind::Negation: return make_neg((*this)(a[0]));
      case NodeKind::Quotient: {
        NodePtr dn = (*this)(a[0]);
        NodePtr dd = (*this)(a[1]);
        if (is_const(dd, 0.0)) return make_quotient(dn, a[1]);
        NodePtr num = make_sum({make_product({dn, a[1]}), make_neg(make_product({a[0], dd}))});
        return make_quotient(num, make_power(a[1], 2));
      }
      case NodeKind::Power: {
        const int k = n->index;
        return make_product({make_const(static_cast<double>(k)), make_power(a[0], k - 1),
                             (*this)(a[0])});
      }
      case NodeKind::Sin:
        return make_product({make_unary(NodeKind::Cos, a[0]), (*this)(a[0])});
      case NodeKind::Cos:
        return make_neg(make_product({make_unary(NodeKind::Sin, a[0]), (*this)(a[0])}));
      case NodeKind::Exp: return make_product({n, (*this)(a[0])});
      case NodeKind::Log: return make_quotient((*this)(a[0]), a[0]);
      case NodeKind::Sinh:
        return make_product({make_unary(NodeKind::Cosh, a[0]), (*this)(a[0])});
      case NodeKind::Cosh:
        return make_product({make_unary(NodeKind::Sinh, a[0]), (*this)(a[0])});
    }
    throw std::logic_error("unhandled node kind");
  }

  int coord_;
  std::unordered_map<const Node*, NodePtr> memo_;
};

// ---------------------------------------------------------------- printing

int precedence(const Node& n) {
  switch (n.kind) {
    case NodeKind::Sum: return 1;
    case NodeKind::Product:
    case NodeKind::Quotient: return 2;
    case NodeKind::Negation: return 3;
    case NodeKind::Power: return 4;
    case NodeKind::Constant: return n.value < 0.0 ? 3 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the short form when it round-trips.
  for (int p = 1; p < 17; ++p) {
    char shortbuf[40];
    std::snprintf(shortbuf, sizeof shortbuf, "%.*g", p, v);
    if (std::strtod(shortbuf, nullptr) == v) return shortbuf;
  }
  return buf;
}

const char* function_name(NodeKind k) {
  switch (k) {
    case NodeKind::Sin: return "sin";
    case NodeKind::Cos: return "cos";
    case NodeKind::Exp: return "exp";
    case NodeKind::Log: return "log";
    case NodeKind::Sinh: return "sinh";
    case NodeKind::Cosh: return "cosh";
    default: return "?";
  }
}

void print(const Node& n, int base_dim, std::string& out);

void print_wrapped(const Node& n, int min_prec, int base_dim, std::string& out) {
  if (precedence(n) < min_prec) {
    out += '(';
    print(n, base_dim, out);
    out += ')';
  } else {
    print(n, base_dim, out);
  }
}

void print(const Node& n, int base_dim, std::string& out) {
  switch (n.kind) {
    case NodeKind::Constant: out += format_number(n.value); return;
    case NodeKind::Coordinate:
      if (base_dim > 0 && n.index >= base_dim) {
        out += "y" + std::to_string(n.index - base_dim + 1);
      } else {
        out += "x" + std::to_string(n.index + 1);
      }
      return;
    case NodeKind::Sum:
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        const Node& t = *n.args[i];
        if (i > 0) {
          if (t.kind == NodeKind::Negation) {
            out += " - ";
            print_wrapped(*t.args[0], 2, base_dim, out);
            continue;
          }
          if (t.kind == NodeKind::Constant && t.value < 0.0) {
            out += " - " + format_number(-t.value);
            continue;
          }
          out += " + ";
        }
        print_wrapped(t, 2, base_dim, out);
      }
      return;
    case NodeKind::Product:
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i > 0) out += "*";
        // Quotients inside products are parenthesised so that a*(b/c)*d
        // re-parses to the same tree.
        print_wrapped(*n.args[i], i == 0 ? 2 : 3, base_dim, out);
      }
      return;
    case NodeKind::Quotient:
      print_wrapped(*n.args[0], 2, base_dim, out);
      out += "/";
      print_wrapped(*n.args[1], 3, base_dim, out);
      return;
    case NodeKind::Negation:
      out += "-";
      print_wrapped(*n.args[0], 3, base_dim, out);
      return;
    case NodeKind::Power:
      print_wrapped(*n.args[0], 5, base_dim, out);
      out += "^" + std::to_string(n.index);
      return;
    default:
      out += function_name(n.kind);
      out += '(';
      print(*n.args[0], base_dim, out);
      out += ')';
      return;
  }
}

void collect(const NodePtr& n, std::unordered_set<const Node*>& seen) {
  if (!seen.insert(n.get()).second) return;
  for (const auto& a : n->args) collect(a, seen);
}

}  // namespace

// ------------------------------------------------------------ ScalarField

ScalarField::ScalarField() : node_(make_const(0.0)), arity_(0) {}
ScalarField::ScalarField(double value) : node_(make_const(value)), arity_(0) {}
ScalarField::ScalarField(NodePtr node, int arity) : node_(std::move(node)), arity_(arity) {}

ScalarField ScalarField::constant(double value, int arity) {
  return ScalarField(make_const(value), arity);
}

ScalarField ScalarField::coordinate(int index, int arity) {
  if (index < 0 || index >= arity) throw std::out_of_range("coordinate index out of range");
  return ScalarField(make_node(NodeKind::Coordinate, {}, 0.0, index), arity);
}

ScalarField ScalarField::with_arity(int arity) const {
  if (arity <= node_->max_coordinate) {
    throw std::invalid_argument("with_arity: field references coordinates beyond new arity");
  }
  return ScalarField(node_, arity);
}

ScalarField ScalarField::derivative(int coord) const {
  if (coord < 0 || coord >= arity_) {
    throw std::out_of_range("differentiate: coordinate " + std::to_string(coord + 1) +
                            " out of range for arity " + std::to_string(arity_));
  }
  Differentiator d(coord);
  return ScalarField(d(node_), arity_);
}

double ScalarField::evaluate(std::span<const double> p) const {
  ScalarField self = *this;
  FieldProgram prog(std::span<const ScalarField>(&self, 1), arity_);
  double out = 0.0;
  prog.evaluate(p, std::span<double>(&out, 1));
  return out;
}

std::string ScalarField::to_string(int base_dim) const {
  std::string out;
  print(*node_, base_dim, out);
  return out;
}

std::size_t ScalarField::node_count() const {
  std::unordered_set<const Node*> seen;
  collect(node_, seen);
  return seen.size();
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return ScalarField(make_sum({a.node_, b.node_}), std::max(a.arity_, b.arity_));
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return ScalarField(make_sum({a.node_, make_neg(b.node_)}), std::max(a.arity_, b.arity_));
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return ScalarField(make_product({a.node_, b.node_}), std::max(a.arity_, b.arity_));
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  return ScalarField(make_quotient(a.node_, b.node_), std::max(a.arity_, b.arity_));
}
ScalarField operator-(const ScalarField& a) { return ScalarField(make_neg(a.node_), a.arity_); }

class FieldBuilder {
 public:
  static ScalarField wrap(NodePtr n, int arity) { return ScalarField(std::move(n), arity); }
};

ScalarField pow(const ScalarField& base, int exponent) {
  return FieldBuilder::wrap(make_power(base.node_ptr(), exponent), base.arity());
}
ScalarField sin(const ScalarField& f) {
  return FieldBuilder::wrap(make_unary(NodeKind::Sin, f.node_ptr()), f.arity());
}
ScalarField cos(const ScalarField& f) {
  return FieldBuilder::wrap(make_unary(NodeKind::Cos, f.node_ptr()), f.arity());
}
ScalarField exp(const ScalarField& f) {
  return FieldBuilder::wrap(make_unary(NodeKind::Exp, f.node_ptr()), f.arity());
}
ScalarField log(const ScalarField& f) {
  return FieldBuilder::wrap(make_unary(NodeKind::Log, f.node_ptr()), f.arity());
}
ScalarField sinh(const ScalarField& f) {
  return FieldBuilder::wrap(make_unary(NodeKind::Sinh, f.node_ptr()), f.arity());
}
ScalarField cosh(const ScalarField& f) {
  return FieldBuilder::wrap(make_unary(NodeKind::Cosh, f.node_ptr()), f.arity());
}

ScalarField sum(std::span<const ScalarField> terms) {
  std::vector<NodePtr> nodes;
  int arity = 0;
  nodes.reserve(terms.size());
  for (const auto& t : terms) {
    nodes.push_back(t.node_ptr());
    arity = std::max(arity, t.arity());
  }
  return FieldBuilder::wrap(make_sum(nodes), arity);
}

ScalarField differentiate(const ScalarField& f, int coord) { return f.derivative(coord); }

std::vector<ScalarField> differentiate_all(std::span<const ScalarField> fields, int coord) {
  Differentiator d(coord);
  std::vector<ScalarField> out;
  out.reserve(fields.size());
  for (const auto& f : fields) {
    if (coord < 0 || coord >= f.arity()) {
      throw std::out_of_range("differentiate: coordinate " + std::to_string(coord + 1) +
                              " out of range for arity " + std::to_string(f.arity()));
    }
    out.push_back(FieldBuilder::wrap(d(f.node_ptr()), f.arity()));
  }
  return out;
}

double evaluate(const ScalarField& f, const Point& p) { return f.evaluate(p); }

ScalarField simplify(const ScalarField& f) {
  std::unordered_map<const Node*, NodePtr> memo;
  std::function<NodePtr(const NodePtr&)> go = [&](const NodePtr& n) -> NodePtr {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    std::vector<NodePtr> args;
    args.reserve(n->args.size());
    for (const auto& a : n->args) args.push_back(go(a));
    NodePtr r = rebuild(*n, std::move(args));
    memo.emplace(n.get(), r);
    return r;
  };
  return FieldBuilder::wrap(go(f.node_ptr()), f.arity());
}

bool structurally_equal(const ScalarField& a, const ScalarField& b) {
  std::function<bool(const Node&, const Node&)> eq = [&](const Node& x, const Node& y) {
    if (&x == &y) return true;
    if (x.kind != y.kind || x.index != y.index || x.value != y.value ||
        x.args.size() != y.args.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x.args.size(); ++i) {
      if (!eq(*x.args[i], *y.args[i])) return false;
    }
    return true;
  };
  return eq(a.node(), b.node());
}

// ------------------------------------------------------------ FieldProgram

FieldProgram::FieldProgram(std::span<const ScalarField> outputs, int arity) : arity_(arity) {
  // Pointer identity first, then structural identity of (kind, payload,
  // operand slots), so equal subtrees built separately share one slot.
  std::unordered_map<const Node*, int> slot;
  std::unordered_map<std::string, int> structural;
  std::function<int(const NodePtr&)> emit = [&](const NodePtr& n) -> int {
    if (auto it = slot.find(n.get()); it != slot.end()) return it->second;
    std::vector<int> ops;
    ops.reserve(n->args.size());
    for (const auto& a : n->args) ops.push_back(emit(a));
    std::string key(sizeof(NodeKind) + sizeof(int) + sizeof(double) + ops.size() * sizeof(int), '\0');
    char* w = key.data();
    std::memcpy(w, &n->kind, sizeof(NodeKind));
    w += sizeof(NodeKind);
    std::memcpy(w, &n->index, sizeof(int));
    w += sizeof(int);
    std::memcpy(w, &n->value, sizeof(double));
    w += sizeof(double);
    if (!ops.empty()) std::memcpy(w, ops.data(), ops.size() * sizeof(int));
    if (auto it = structural.find(key); it != structural.end()) {
      slot.emplace(n.get(), it->second);
      return it->second;
    }
    Instruction ins{n->kind, n->index, n->value, static_cast<int>(operands_.size()),
                    static_cast<int>(ops.size())};
    operands_.insert(operands_.end(), ops.begin(), ops.end());
    code_.push_back(ins);
    int s = static_cast<int>(code_.size()) - 1;
    slot.emplace(n.get(), s);
    structural.emplace(std::move(key), s);
    return s;
  };
  for (const auto& f : outputs) {
    if (f.node().max_coordinate >= arity) {
      throw std::invalid_argument("FieldProgram: field references coordinates beyond arity");
    }
    outputs_.push_back(emit(f.node_ptr()));
  }
}

void FieldProgram::evaluate(std::span<const double> p, std::span<double> out) const {
  if (static_cast<int>(p.size()) != arity_) {
    throw std::invalid_argument("evaluate: point has " + std::to_string(p.size()) +
                                " coordinates, field arity is " + std::to_string(arity_));
  }
  if (out.size() < outputs_.size()) throw std::invalid_argument("evaluate: output too small");
  auto fail = [&](const std::string& what) {
    throw DomainError(what, std::vector<double>(p.begin(), p.end()));
  };
  std::vector<double> v(code_.size());
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instruction& ins = code_[i];
    const int* op = operands_.data() + ins.first;
    double r = 0.0;
    switch (ins.kind) {
      case NodeKind::Constant: r = ins.value; break;
      case NodeKind::Coordinate: r = p[static_cast<std::size_t>(ins.index)]; break;
      case NodeKind::Sum:
        r = v[op[0]];
        for (int k = 1; k < ins.count; ++k) r += v[op[k]];
        break;
      case NodeKind::Product:
        r = v[op[0]];
        for (int k = 1; k < ins.count; ++k) r *= v[op[k]];
        break;
      case NodeKind::Negation: r = -v[op[0]]; break;
      case NodeKind::Quotient:
        if (std::abs(v[op[1]]) < 1e-300) fail("division by value with magnitude < 1e-300");
        r = v[op[0]] / v[op[1]];
        break;
      case NodeKind::Power:
        if (ins.index < 0 && std::abs(v[op[0]]) < 1e-300) {
          fail("division by value with magnitude < 1e-300");
        }
        r = std::pow(v[op[0]], ins.index);
        break;
      case NodeKind::Log:
        if (!(v[op[0]] > 0.0)) fail("log of non-positive argument");
        r = std::log(v[op[0]]);
        break;
      default: r = apply_unary(ins.kind, v[op[0]]); break;
    }
    if (!std::isfinite(r)) fail("non-finite value during evaluation");
    v[i] = r;
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = v[outputs_[k]];
}

std::vector<double> FieldProgram::evaluate(std::span<const double> p) const {
  std::vector<double> out(outputs_.size());
  evaluate(p, out);
  return out;
}

}  // namespace hg
