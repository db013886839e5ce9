#pragma once

// Scalar expression language for metric entries, warping profiles,
// potentials, conformal factors and vector-field components.
//
// Grammar (docs/expressions.md has the full EBNF):
//
//   expr    := term { ('+' | '-') term }
//   term    := unary { ('*' | '/') unary }
//   unary   := '-' unary | power
//   power   := primary { '^' int }
//   int     := ['-'] digits | '(' ['-'] digits ')'
//   primary := number | identifier | func '(' expr ')' | '(' expr ')'
//
// Identifiers must be declared coordinates, declared parameters, the
// positional aliases x0..x3, or the constant `pi`. Unknown names are a parse
// error so malformed specs fail before any evaluation.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bachlab/jet.hpp"

namespace bachlab {

using ParamMap = std::map<std::string, double, std::less<>>;

struct Symbols {
  std::vector<std::string> coordinates;
  std::vector<std::string> parameters;
};

enum class ExprKind { Number, Var, Param, Neg, Add, Sub, Mul, Div, Pow, Func };

struct ExprNode {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;
  int var = -1;          // Var: coordinate index
  std::string name;      // Var/Param: identifier as written
  ElemFn fn = ElemFn::Sin;
  int exponent = 0;      // Pow
  std::shared_ptr<const ExprNode> lhs, rhs;  // unary ops use lhs
};

/// Immutable expression tree; copies share nodes.
class Expr {
 public:
  Expr();  // the literal 0
  explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}

  static Expr parse(std::string_view text, const Symbols& symbols);
  static Expr number(double v);

  const ExprNode& root() const { return *root_; }
  ExprKind kind() const { return root_->kind; }

  /// Re-parsable text with minimal parentheses.
  std::string to_string() const;
  bool same_tree(const Expr& o) const;

  /// Largest coordinate index referenced, or -1.
  int max_var() const;
  std::vector<std::string> parameters() const;
  bool is_constant() const { return max_var() < 0; }

  /// Direct floating-point evaluation.
  double eval(std::span<const double> point, const ParamMap& params) const;

 private:
  std::shared_ptr<const ExprNode> root_;
};

/// Jet of `e` at `point` in a `dim`-variable chart. Coordinate k of the
/// expression is jet variable coord_map[k] (identity when empty), which is
/// how factor expressions are embedded into product charts.
Jet eval_jet(const Expr& e, std::span<const double> point, const ParamMap& params, int dim, int order,
             std::span<const int> coord_map = {});

}  // namespace bachlab
