#include "tforge/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace tforge {

int SymbolTable::coordinateIndex(const std::string& name) const {
  for (int i = 0; i < 4; ++i)
    if (coordinates[static_cast<std::size_t>(i)] == name) return i;
  return -1;
}

bool SymbolTable::isParameter(const std::string& name) const {
  for (const auto& p : parameters)
    if (p == name) return true;
  return false;
}

enum class Op { Const, Coord, Param, Neg, Sin, Cos, Exp, Ln, Sqrt, Add, Sub, Mul, Div, Pow };

struct Expression::Node {
  Op op;
  double cval = 0.0;
  int coord = -1;
  std::string param;
  NodePtr a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr mkConst(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->cval = v;
  return n;
}

NodePtr mkCoord(int idx, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Coord;
  n->coord = idx;
  n->param = std::move(name);  // display name
  return n;
}

NodePtr mkParam(std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Param;
  n->param = std::move(name);
  return n;
}

bool constOf(const NodePtr& n, double& v) {
  if (n->op == Op::Const) {
    v = n->cval;
    return true;
  }
  return false;
}

NodePtr mkUnary(Op op, NodePtr a);
NodePtr mkBinary(Op op, NodePtr a, NodePtr b);

NodePtr mkNeg(NodePtr a) {
  double v;
  if (constOf(a, v)) return mkConst(-v);
  if (a->op == Op::Neg) return a->a;
  return mkUnary(Op::Neg, std::move(a));
}

NodePtr mkAdd(NodePtr a, NodePtr b) {
  double va, vb;
  if (constOf(a, va) && constOf(b, vb)) return mkConst(va + vb);
  if (constOf(a, va) && va == 0.0) return b;
  if (constOf(b, vb) && vb == 0.0) return a;
  return mkBinary(Op::Add, std::move(a), std::move(b));
}

NodePtr mkSub(NodePtr a, NodePtr b) {
  double va, vb;
  if (constOf(a, va) && constOf(b, vb)) return mkConst(va - vb);
  if (constOf(b, vb) && vb == 0.0) return a;
  if (constOf(a, va) && va == 0.0) return mkNeg(std::move(b));
  return mkBinary(Op::Sub, std::move(a), std::move(b));
}

NodePtr mkMul(NodePtr a, NodePtr b) {
  double va, vb;
  if (constOf(a, va) && constOf(b, vb)) return mkConst(va * vb);
  if (constOf(a, va)) {
    if (va == 0.0) return mkConst(0.0);
    if (va == 1.0) return b;
    if (va == -1.0) return mkNeg(std::move(b));
  }
  if (constOf(b, vb)) {
    if (vb == 0.0) return mkConst(0.0);
    if (vb == 1.0) return a;
    if (vb == -1.0) return mkNeg(std::move(a));
  }
  return mkBinary(Op::Mul, std::move(a), std::move(b));
}

NodePtr mkDiv(NodePtr a, NodePtr b) {
  double va, vb;
  // Division by a zero constant is kept so the error surfaces at evaluation.
  if (constOf(b, vb) && vb != 0.0) {
    if (constOf(a, va)) return mkConst(va / vb);
    if (vb == 1.0) return a;
  }
  if (constOf(a, va) && va == 0.0 && !(constOf(b, vb) && vb == 0.0)) return mkConst(0.0);
  return mkBinary(Op::Div, std::move(a), std::move(b));
}

bool isIntegral(double v) { return std::isfinite(v) && v == std::floor(v); }

NodePtr mkPow(NodePtr a, NodePtr b) {
  double va, vb;
  if (constOf(b, vb)) {
    if (vb == 1.0) return a;
    if (vb == 0.0) return mkConst(1.0);
    if (constOf(a, va)) {
      if (va > 0.0 || (va != 0.0 && isIntegral(vb)))
        return mkConst(std::pow(va, vb));
    }
  }
  return mkBinary(Op::Pow, std::move(a), std::move(b));
}

NodePtr mkFn(Op op, NodePtr a) {
  double v;
  if (constOf(a, v)) {
    switch (op) {
      case Op::Sin: return mkConst(std::sin(v));
      case Op::Cos: return mkConst(std::cos(v));
      case Op::Exp: return mkConst(std::exp(v));
      case Op::Ln:
        if (v > 0.0) return mkConst(std::log(v));
        break;
      case Op::Sqrt:
        if (v >= 0.0) return mkConst(std::sqrt(v));
        break;
      default: break;
    }
  }
  return mkUnary(op, std::move(a));
}

NodePtr mkUnary(Op op, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  return NodePtr(n);
}

NodePtr mkBinary(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return NodePtr(n);
}

std::string render(const NodePtr& n);

double evalNode(const NodePtr& n, const std::array<double, 4>& x, const Params& params) {
  switch (n->op) {
    case Op::Const: return n->cval;
    case Op::Coord: return x[static_cast<std::size_t>(n->coord)];
    case Op::Param: {
      auto it = params.find(n->param);
      if (it == params.end())
        throw EvalError("unknown parameter '" + n->param + "'", render(n));
      return it->second;
    }
    case Op::Neg: return -evalNode(n->a, x, params);
    case Op::Sin: return std::sin(evalNode(n->a, x, params));
    case Op::Cos: return std::cos(evalNode(n->a, x, params));
    case Op::Exp: return std::exp(evalNode(n->a, x, params));
    case Op::Ln: {
      double v = evalNode(n->a, x, params);
      if (v <= 0.0) throw EvalError("logarithm of non-positive value", render(n));
      return std::log(v);
    }
    case Op::Sqrt: {
      double v = evalNode(n->a, x, params);
      if (v < 0.0) throw EvalError("square root of negative value", render(n));
      return std::sqrt(v);
    }
    case Op::Add: return evalNode(n->a, x, params) + evalNode(n->b, x, params);
    case Op::Sub: return evalNode(n->a, x, params) - evalNode(n->b, x, params);
    case Op::Mul: return evalNode(n->a, x, params) * evalNode(n->b, x, params);
    case Op::Div: {
      double num = evalNode(n->a, x, params);
      double den = evalNode(n->b, x, params);
      if (den == 0.0) throw EvalError("division by zero", render(n));
      return num / den;
    }
    case Op::Pow: {
      double base = evalNode(n->a, x, params);
      double ex = evalNode(n->b, x, params);
      if (!isIntegral(ex) && base <= 0.0)
        throw EvalError("non-integer power requires positive base", render(n));
      if (base == 0.0 && ex < 0.0)
        throw EvalError("zero raised to negative power", render(n));
      return std::pow(base, ex);
    }
  }
  return 0.0;
}

NodePtr derivNode(const NodePtr& n, int coord) {
  switch (n->op) {
    case Op::Const:
    case Op::Param: return mkConst(0.0);
    case Op::Coord: return mkConst(n->coord == coord ? 1.0 : 0.0);
    case Op::Neg: return mkNeg(derivNode(n->a, coord));
    case Op::Sin: return mkMul(mkFn(Op::Cos, n->a), derivNode(n->a, coord));
    case Op::Cos: return mkNeg(mkMul(mkFn(Op::Sin, n->a), derivNode(n->a, coord)));
    case Op::Exp: return mkMul(mkFn(Op::Exp, n->a), derivNode(n->a, coord));
    case Op::Ln: return mkDiv(derivNode(n->a, coord), n->a);
    case Op::Sqrt:
      return mkDiv(derivNode(n->a, coord), mkMul(mkConst(2.0), mkFn(Op::Sqrt, n->a)));
    case Op::Add: return mkAdd(derivNode(n->a, coord), derivNode(n->b, coord));
    case Op::Sub: return mkSub(derivNode(n->a, coord), derivNode(n->b, coord));
    case Op::Mul:
      return mkAdd(mkMul(derivNode(n->a, coord), n->b), mkMul(n->a, derivNode(n->b, coord)));
    case Op::Div:
      return mkSub(mkDiv(derivNode(n->a, coord), n->b),
                   mkDiv(mkMul(n->a, derivNode(n->b, coord)), mkMul(n->b, n->b)));
    case Op::Pow: {
      double c;
      if (constOf(n->b, c)) {
        // d(u^c) = c u^(c-1) u'
        return mkMul(mkMul(n->b, mkPow(n->a, mkConst(c - 1.0))), derivNode(n->a, coord));
      }
      // d(u^v) = u^v (v' ln u + v u'/u)
      NodePtr self = mkPow(n->a, n->b);
      NodePtr t1 = mkMul(derivNode(n->b, coord), mkFn(Op::Ln, n->a));
      NodePtr t2 = mkDiv(mkMul(n->b, derivNode(n->a, coord)), n->a);
      return mkMul(self, mkAdd(t1, t2));
    }
  }
  return mkConst(0.0);
}

NodePtr bindNode(const NodePtr& n, const Params& params) {
  switch (n->op) {
    case Op::Const:
    case Op::Coord: return n;
    case Op::Param: {
      auto it = params.find(n->param);
      return it == params.end() ? n : mkConst(it->second);
    }
    case Op::Neg: return mkNeg(bindNode(n->a, params));
    case Op::Sin: return mkFn(Op::Sin, bindNode(n->a, params));
    case Op::Cos: return mkFn(Op::Cos, bindNode(n->a, params));
    case Op::Exp: return mkFn(Op::Exp, bindNode(n->a, params));
    case Op::Ln: return mkFn(Op::Ln, bindNode(n->a, params));
    case Op::Sqrt: return mkFn(Op::Sqrt, bindNode(n->a, params));
    case Op::Add: return mkAdd(bindNode(n->a, params), bindNode(n->b, params));
    case Op::Sub: return mkSub(bindNode(n->a, params), bindNode(n->b, params));
    case Op::Mul: return mkMul(bindNode(n->a, params), bindNode(n->b, params));
    case Op::Div: return mkDiv(bindNode(n->a, params), bindNode(n->b, params));
    case Op::Pow: return mkPow(bindNode(n->a, params), bindNode(n->b, params));
  }
  return n;
}

// Precedence levels for printing: higher binds tighter.
int level(const NodePtr& n) {
  switch (n->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

std::string renderNum(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // prefer the shortest representation that round-trips
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return s;
}

std::string wrap(const NodePtr& n, int minLevel) {
  std::string s = render(n);
  if (level(n) < minLevel) return "(" + s + ")";
  return s;
}

std::string render(const NodePtr& n) {
  switch (n->op) {
    case Op::Const:
      if (n->cval < 0.0) return "(" + renderNum(n->cval) + ")";
      return renderNum(n->cval);
    case Op::Coord:
      return n->param.empty() ? "$" + std::to_string(n->coord) : n->param;
    case Op::Param: return n->param;
    case Op::Neg: return "-" + wrap(n->a, 4);
    case Op::Sin: return "sin(" + render(n->a) + ")";
    case Op::Cos: return "cos(" + render(n->a) + ")";
    case Op::Exp: return "exp(" + render(n->a) + ")";
    case Op::Ln: return "ln(" + render(n->a) + ")";
    case Op::Sqrt: return "sqrt(" + render(n->a) + ")";
    case Op::Add: return wrap(n->a, 1) + " + " + wrap(n->b, 1);
    case Op::Sub: return wrap(n->a, 1) + " - " + wrap(n->b, 2);
    case Op::Mul: return wrap(n->a, 2) + "*" + wrap(n->b, 2);
    case Op::Div: return wrap(n->a, 2) + "/" + wrap(n->b, 3);
    case Op::Pow: return wrap(n->a, 5) + "^" + wrap(n->b, 4);
  }
  return "?";
}

// ---- parser ----------------------------------------------------------

struct Parser {
  const std::string& text;
  const SymbolTable& symbols;
  std::size_t pos = 0;  // 0-based scan position

  explicit Parser(const std::string& t, const SymbolTable& s) : text(t), symbols(s) {}

  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    throw ParseError(at + 1, msg);  // report 1-based offsets
  }

  void skipSpace() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool peekIs(char c) {
    skipSpace();
    return pos < text.size() && text[pos] == c;
  }

  bool accept(char c) {
    if (peekIs(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  NodePtr parseFull() {
    NodePtr e = parseAddSub();
    skipSpace();
    if (pos != text.size()) fail(pos, "unexpected trailing input");
    return e;
  }

  NodePtr parseAddSub() {
    NodePtr lhs = parseMulDiv();
    for (;;) {
      if (accept('+')) lhs = mkAdd(lhs, parseMulDiv());
      else if (accept('-')) lhs = mkSub(lhs, parseMulDiv());
      else return lhs;
    }
  }

  NodePtr parseMulDiv() {
    NodePtr lhs = parseUnary();
    for (;;) {
      if (accept('*')) lhs = mkMul(lhs, parseUnary());
      else if (accept('/')) lhs = mkDiv(lhs, parseUnary());
      else return lhs;
    }
  }

  NodePtr parseUnary() {
    if (accept('-')) return mkNeg(parseUnary());
    return parsePower();
  }

  NodePtr parsePower() {
    NodePtr base = parsePrimary();
    if (accept('^')) return mkPow(base, parseUnary());
    return base;
  }

  NodePtr parsePrimary() {
    skipSpace();
    if (pos >= text.size()) fail(pos, "expected operand");
    char c = text[pos];
    if (c == '(') {
      ++pos;
      NodePtr e = parseAddSub();
      if (!accept(')')) fail(pos, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parseNumber();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parseIdent();
    fail(pos, std::string("unexpected character '") + c + "'");
  }

  NodePtr parseNumber() {
    const char* start = text.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) fail(pos, "malformed number");
    pos += static_cast<std::size_t>(end - start);
    return mkConst(v);
  }

  NodePtr parseIdent() {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    std::string name = text.substr(start, pos - start);

    static const std::pair<const char*, Op> fns[] = {
        {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"ln", Op::Ln}, {"sqrt", Op::Sqrt}};
    for (const auto& [fname, op] : fns) {
      if (name == fname) {
        if (!accept('(')) fail(pos, "expected '(' after '" + name + "'");
        NodePtr arg = parseAddSub();
        if (!accept(')')) fail(pos, "expected ')'");
        return mkFn(op, arg);
      }
    }
    int ci = symbols.coordinateIndex(name);
    if (ci >= 0) return mkCoord(ci, name);
    if (symbols.isParameter(name)) return mkParam(name);
    if (name == "pi") return mkConst(M_PI);
    fail(start, "undeclared symbol '" + name + "'");
  }
};

}  // namespace

Expression::Expression() : node_(mkConst(0.0)) {}
Expression::~Expression() = default;

Expression Expression::parse(const std::string& text, const SymbolTable& symbols) {
  Parser p(text, symbols);
  return Expression(p.parseFull());
}

Expression Expression::constant(double v) { return Expression(mkConst(v)); }

Expression Expression::coordinate(int index) {
  if (index < 0 || index > 3) throw Error("coordinate index out of range");
  return Expression(mkCoord(index, ""));
}

Expression Expression::parameter(const std::string& name) { return Expression(mkParam(name)); }

double Expression::evaluate(const std::array<double, 4>& x, const Params& params) const {
  return evalNode(node_, x, params);
}

Expression Expression::derivative(int coord) const {
  if (coord < 0 || coord > 3) throw Error("coordinate index out of range");
  return Expression(derivNode(node_, coord));
}

Expression Expression::bind(const Params& params) const {
  return Expression(bindNode(node_, params));
}

bool Expression::isConstant(double* value) const {
  if (node_->op != Op::Const) return false;
  if (value) *value = node_->cval;
  return true;
}

std::string Expression::str() const { return render(node_); }

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(mkAdd(a.node_, b.node_));
}
Expression operator-(const Expression& a, const Expression& b) {
  return Expression(mkSub(a.node_, b.node_));
}
Expression operator*(const Expression& a, const Expression& b) {
  return Expression(mkMul(a.node_, b.node_));
}
Expression operator/(const Expression& a, const Expression& b) {
  return Expression(mkDiv(a.node_, b.node_));
}
Expression operator-(const Expression& a) { return Expression(mkNeg(a.node_)); }
Expression pow(const Expression& a, const Expression& b) {
  return Expression(mkPow(a.node_, b.node_));
}
Expression sin(const Expression& a) { return Expression(mkFn(Op::Sin, a.node_)); }
Expression cos(const Expression& a) { return Expression(mkFn(Op::Cos, a.node_)); }
Expression exp(const Expression& a) { return Expression(mkFn(Op::Exp, a.node_)); }
Expression ln(const Expression& a) { return Expression(mkFn(Op::Ln, a.node_)); }
Expression sqrt(const Expression& a) { return Expression(mkFn(Op::Sqrt, a.node_)); }

}  // namespace tforge
