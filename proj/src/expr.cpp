#include "bachlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "bachlab/error.hpp"

namespace bachlab {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Number;
  n->number = v;
  return n;
}

NodePtr make_unary(ExprKind k, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_binary(ExprKind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool lookup_function(std::string_view name, ElemFn& fn) {
  static const std::pair<std::string_view, ElemFn> table[] = {
      {"sin", ElemFn::Sin},   {"cos", ElemFn::Cos},   {"exp", ElemFn::Exp}, {"sinh", ElemFn::Sinh},
      {"cosh", ElemFn::Cosh}, {"sqrt", ElemFn::Sqrt}, {"log", ElemFn::Log},
  };
  for (const auto& [n, f] : table)
    if (n == name) {
      fn = f;
      return true;
    }
  return false;
}

class Parser {
 public:
  Parser(std::string_view text, const Symbols& symbols) : s_(text), sym_(symbols) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("syntax error: " + msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = make_binary(ExprKind::Add, lhs, term());
      else if (accept('-')) lhs = make_binary(ExprKind::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = make_binary(ExprKind::Mul, lhs, unary());
      else if (accept('/')) lhs = make_binary(ExprKind::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(ExprKind::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    while (accept('^')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::Pow;
      n->lhs = base;
      n->exponent = integer_exponent();
      base = n;
    }
    return base;
  }

  int integer_exponent() {
    skip_ws();
    const bool paren = accept('(');
    const bool neg = accept('-');
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !(std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      fail("exponent must be an integer literal");
    std::size_t end = pos_;
    while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '.')) ++end;
    const std::string_view tok = s_.substr(start, end - start);
    if (!std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("non-integer exponent '" + std::string(tok) + "'", start);
    if (tok.size() > 6) throw ParseError("exponent too large", start);
    pos_ = end;
    int v = std::stoi(std::string(tok));
    if (paren) expect(')');
    return neg ? -v : v;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
        pos_ = p;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    const std::string tok(s_.substr(start, pos_ - start));
    if (tok == ".") throw ParseError("syntax error: malformed number", start);
    return make_number(std::stod(tok));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name(s_.substr(start, pos_ - start));

    ElemFn fn;
    if (lookup_function(name, fn)) {
      if (!accept('(')) throw ParseError("syntax error: expected '(' after function '" + name + "'", pos_);
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::Func;
      n->fn = fn;
      n->lhs = expr();
      expect(')');
      return n;
    }
    for (std::size_t i = 0; i < sym_.coordinates.size(); ++i)
      if (sym_.coordinates[i] == name) return var(static_cast<int>(i), name);
    for (const auto& p : sym_.parameters)
      if (p == name) {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::Param;
        n->name = name;
        return n;
      }
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '0' && name[1] <= '3') {
      const int i = name[1] - '0';
      if (i < static_cast<int>(sym_.coordinates.size()) || sym_.coordinates.empty()) return var(i, name);
    }
    if (name == "pi") return make_number(std::numbers::pi);
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  NodePtr var(int i, const std::string& name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Var;
    n->var = i;
    n->name = name;
    return n;
  }

  std::string_view s_;
  const Symbols& sym_;
  std::size_t pos_ = 0;
};

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

void print(const ExprNode& n, std::string& out) {
  auto child = [&out](const ExprNode& c, bool parens) {
    if (parens) out += '(';
    print(c, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case ExprKind::Number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += buf;
      // a bare integer-valued literal stays a plain number token
      break;
    }
    case ExprKind::Var:
    case ExprKind::Param: out += n.name; break;
    case ExprKind::Neg:
      out += '-';
      child(*n.lhs, precedence(*n.lhs) < 3);
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      const int p = precedence(n);
      child(*n.lhs, precedence(*n.lhs) < p);
      out += n.kind == ExprKind::Add ? " + " : n.kind == ExprKind::Sub ? " - " : n.kind == ExprKind::Mul ? "*" : "/";
      child(*n.rhs, precedence(*n.rhs) <= p && precedence(*n.rhs) != 3);
      break;
    }
    case ExprKind::Pow:
      child(*n.lhs, precedence(*n.lhs) < 5);
      out += '^';
      if (n.exponent < 0) out += "(" + std::to_string(n.exponent) + ")";
      else out += std::to_string(n.exponent);
      break;
    case ExprKind::Func:
      out += to_string(n.fn);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      break;
  }
}

bool same(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Number: return a.number == b.number;
    case ExprKind::Var: return a.var == b.var;
    case ExprKind::Param: return a.name == b.name;
    case ExprKind::Pow: return a.exponent == b.exponent && same(*a.lhs, *b.lhs);
    case ExprKind::Func: return a.fn == b.fn && same(*a.lhs, *b.lhs);
    case ExprKind::Neg: return same(*a.lhs, *b.lhs);
    default: return same(*a.lhs, *b.lhs) && same(*a.rhs, *b.rhs);
  }
}

double param_value(const ExprNode& n, const ParamMap& params) {
  auto it = params.find(n.name);
  if (it == params.end()) throw SpecError("unbound parameter '" + n.name + "'");
  return it->second;
}

double eval_double(const ExprNode& n, std::span<const double> x, const ParamMap& params) {
  switch (n.kind) {
    case ExprKind::Number: return n.number;
    case ExprKind::Var:
      if (n.var >= static_cast<int>(x.size())) throw SpecError("expression uses coordinate '" + n.name + "' beyond the point dimension");
      return x[static_cast<std::size_t>(n.var)];
    case ExprKind::Param: return param_value(n, params);
    case ExprKind::Neg: return -eval_double(*n.lhs, x, params);
    case ExprKind::Add: return eval_double(*n.lhs, x, params) + eval_double(*n.rhs, x, params);
    case ExprKind::Sub: return eval_double(*n.lhs, x, params) - eval_double(*n.rhs, x, params);
    case ExprKind::Mul: return eval_double(*n.lhs, x, params) * eval_double(*n.rhs, x, params);
    case ExprKind::Div: {
      const double d = eval_double(*n.rhs, x, params);
      if (d == 0.0) throw DomainError("division by zero");
      return eval_double(*n.lhs, x, params) / d;
    }
    case ExprKind::Pow: {
      const double b = eval_double(*n.lhs, x, params);
      if (b == 0.0 && n.exponent < 0) throw DomainError("negative power of zero");
      return std::pow(b, n.exponent);
    }
    case ExprKind::Func: {
      const double a = eval_double(*n.lhs, x, params);
      switch (n.fn) {
        case ElemFn::Sin: return std::sin(a);
        case ElemFn::Cos: return std::cos(a);
        case ElemFn::Exp: return std::exp(a);
        case ElemFn::Sinh: return std::sinh(a);
        case ElemFn::Cosh: return std::cosh(a);
        case ElemFn::Sqrt:
          if (!(a > 0.0)) throw DomainError("sqrt of non-positive value");
          return std::sqrt(a);
        case ElemFn::Log:
          if (!(a > 0.0)) throw DomainError("log of non-positive value");
          return std::log(a);
      }
    }
  }
  return 0.0;
}

struct JetEval {
  std::span<const double> point;
  const ParamMap& params;
  int dim;
  int order;
  std::span<const int> map;

  Jet operator()(const ExprNode& n) const {
    switch (n.kind) {
      case ExprKind::Number: return Jet::constant(n.number, dim, order);
      case ExprKind::Var: {
        const int g = map.empty() ? n.var : (n.var < static_cast<int>(map.size()) ? map[static_cast<std::size_t>(n.var)] : -1);
        if (g < 0 || g >= dim) throw SpecError("expression coordinate '" + n.name + "' is not a chart coordinate");
        return Jet::variable(g, point[static_cast<std::size_t>(g)], dim, order);
      }
      case ExprKind::Param: return Jet::constant(param_value(n, params), dim, order);
      case ExprKind::Neg: return -(*this)(*n.lhs);
      case ExprKind::Add: return (*this)(*n.lhs) + (*this)(*n.rhs);
      case ExprKind::Sub: return (*this)(*n.lhs) - (*this)(*n.rhs);
      case ExprKind::Mul: {
        // constant factors skip the Cauchy product
        if (n.lhs->kind == ExprKind::Number) return n.lhs->number * (*this)(*n.rhs);
        if (n.rhs->kind == ExprKind::Number) return (*this)(*n.lhs) * n.rhs->number;
        return (*this)(*n.lhs) * (*this)(*n.rhs);
      }
      case ExprKind::Div: {
        if (n.rhs->kind == ExprKind::Number) {
          if (n.rhs->number == 0.0) throw DomainError("division by zero");
          return (*this)(*n.lhs) / n.rhs->number;
        }
        return (*this)(*n.lhs) / (*this)(*n.rhs);
      }
      case ExprKind::Pow: return pow((*this)(*n.lhs), n.exponent);
      case ExprKind::Func: return compose(n.fn, (*this)(*n.lhs));
    }
    return Jet(dim, order);
  }
};

void collect_params(const ExprNode& n, std::set<std::string>& out) {
  if (n.kind == ExprKind::Param) out.insert(n.name);
  if (n.lhs) collect_params(*n.lhs, out);
  if (n.rhs) collect_params(*n.rhs, out);
}

int max_var_of(const ExprNode& n) {
  int m = n.kind == ExprKind::Var ? n.var : -1;
  if (n.lhs) m = std::max(m, max_var_of(*n.lhs));
  if (n.rhs) m = std::max(m, max_var_of(*n.rhs));
  return m;
}

}  // namespace

Expr::Expr() : root_(make_number(0.0)) {}

Expr Expr::parse(std::string_view text, const Symbols& symbols) { return Expr(Parser(text, symbols).parse()); }

Expr Expr::number(double v) { return Expr(make_number(v)); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool Expr::same_tree(const Expr& o) const { return same(*root_, *o.root_); }

int Expr::max_var() const { return max_var_of(*root_); }

std::vector<std::string> Expr::parameters() const {
  std::set<std::string> s;
  collect_params(*root_, s);
  return {s.begin(), s.end()};
}

double Expr::eval(std::span<const double> point, const ParamMap& params) const {
  return eval_double(*root_, point, params);
}

Jet eval_jet(const Expr& e, std::span<const double> point, const ParamMap& params, int dim, int order,
             std::span<const int> coord_map) {
  if (static_cast<int>(point.size()) != dim)
    throw SpecError("point has " + std::to_string(point.size()) + " coordinates, chart has " + std::to_string(dim));
  return JetEval{point, params, dim, order, coord_map}(e.root());
}

}  // namespace bachlab
