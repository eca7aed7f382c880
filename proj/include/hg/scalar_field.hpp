#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hg {

enum class NodeKind : std::uint8_t {
  Constant,
  Coordinate,
  Sum,
  Product,
  Negation,
  Quotient,
  Power,
  Sin,
  Cos,
  Exp,
  Log,
  Sinh,
  Cosh,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// One node of an expression tree. Nodes are never mutated after
/// construction, so subtrees are shared freely between fields.
struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;  // Constant
  int index = 0;       // Coordinate: 0-based coordinate; Power: exponent
  std::vector<NodePtr> args;
  int max_coordinate = -1;  // largest coordinate referenced below, -1 if none
};

/// A point of a chart. Entries are required to be finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coordinates);
  Point(std::initializer_list<double> coordinates);

  std::size_t size() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coordinates() const noexcept { return coords_; }
  const std::vector<double>& vector() const noexcept { return coords_; }

 private:
  std::vector<double> coords_;
};

/// Immutable expression over chart coordinates x1..xN (0-based internally).
///
/// Construction through the arithmetic operators and elementary functions
/// applies local simplification (constant folding, 0/1 identities,
/// flattening of sums and products), so every field built through this
/// interface is already in simplified form.
///
/// The arity is the number of chart coordinates the field lives on.
/// Combining fields of different arity yields the larger arity, which is the
/// pull-back along the projection TM -> M when base coordinates come first.
class ScalarField {
 public:
  ScalarField();  // the constant 0 with arity 0
  ScalarField(double value);  // NOLINT: implicit constant

  static ScalarField constant(double value, int arity = 0);
  static ScalarField coordinate(int index, int arity);

  int arity() const noexcept { return arity_; }
  NodeKind kind() const noexcept { return node_->kind; }
  const Node& node() const noexcept { return *node_; }
  const NodePtr& node_ptr() const noexcept { return node_; }

  bool is_constant() const noexcept { return node_->kind == NodeKind::Constant; }
  bool is_zero() const noexcept { return is_constant() && node_->value == 0.0; }
  bool is_one() const noexcept { return is_constant() && node_->value == 1.0; }
  double constant_value() const noexcept { return node_->value; }

  /// Same tree with a larger arity (the tree itself is unchanged).
  ScalarField with_arity(int arity) const;

  /// Exact partial derivative with respect to 0-based coordinate `coord`.
  ScalarField derivative(int coord) const;

  /// Evaluate at `p`; p.size() must equal arity(). Throws DomainError.
  double evaluate(std::span<const double> p) const;
  double evaluate(const Point& p) const { return evaluate(p.coordinates()); }

  /// Source text that parse_field accepts. With `base_dim > 0` coordinates
  /// beyond base_dim print as y1, y2, ... (report form, not re-parseable).
  std::string to_string(int base_dim = 0) const;

  /// Number of distinct nodes in the tree.
  std::size_t node_count() const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a);

  ScalarField& operator+=(const ScalarField& b) { return *this = *this + b; }
  ScalarField& operator-=(const ScalarField& b) { return *this = *this - b; }
  ScalarField& operator*=(const ScalarField& b) { return *this = *this * b; }

 private:
  ScalarField(NodePtr node, int arity);
  friend class FieldBuilder;

  NodePtr node_;
  int arity_ = 0;
};

ScalarField pow(const ScalarField& base, int exponent);
ScalarField sin(const ScalarField& f);
ScalarField cos(const ScalarField& f);
ScalarField exp(const ScalarField& f);
ScalarField log(const ScalarField& f);
ScalarField sinh(const ScalarField& f);
ScalarField cosh(const ScalarField& f);

/// Sum of many terms with a single flattening pass.
ScalarField sum(std::span<const ScalarField> terms);

/// Parse `source` (grammar in README) over `arity` coordinates x1..x<arity>.
/// Throws ParseError on malformed input or out-of-range coordinates and
/// std::invalid_argument when arity < 1.
ScalarField parse_field(std::string_view source, int arity);

/// Partial derivative; `coord` is 0-based. Throws std::out_of_range.
ScalarField differentiate(const ScalarField& f, int coord);

/// Derivatives of many fields with respect to one coordinate. Subtrees shared
/// between the inputs stay shared in the outputs.
std::vector<ScalarField> differentiate_all(std::span<const ScalarField> fields, int coord);

double evaluate(const ScalarField& f, const Point& p);

/// Re-run the bottom-up simplification pass over an arbitrary tree.
ScalarField simplify(const ScalarField& f);

/// Node-for-node equality of two trees (constants compared exactly).
bool structurally_equal(const ScalarField& a, const ScalarField& b);

/// A batch of fields flattened into a single instruction sequence with shared
/// subtrees evaluated once. Evaluation order is fixed, so results are
/// bit-identical for identical inputs.
class FieldProgram {
 public:
  FieldProgram() = default;
  FieldProgram(std::span<const ScalarField> outputs, int arity);

  int arity() const noexcept { return arity_; }
  std::size_t output_count() const noexcept { return outputs_.size(); }
  std::size_t instruction_count() const noexcept { return code_.size(); }

  /// Writes output_count() values into `out`. Throws DomainError.
  void evaluate(std::span<const double> p, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> p) const;

 private:
  struct Instruction {
    NodeKind kind;
    int index;       // coordinate / exponent
    double value;    // constant
    int first;       // start in operands_
    int count;       // operand count
  };
  std::vector<Instruction> code_;
  std::vector<int> operands_;
  std::vector<int> outputs_;
  int arity_ = 0;
};

}  // namespace hg
