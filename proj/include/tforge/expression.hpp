#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tforge/errors.hpp"

namespace tforge {

// Names an expression may reference: exactly four coordinates plus any
// number of named parameters. "pi" is built in unless shadowed.
struct SymbolTable {
  std::array<std::string, 4> coordinates;
  std::vector<std::string> parameters;

  int coordinateIndex(const std::string& name) const;
  bool isParameter(const std::string& name) const;
};

using Params = std::map<std::string, double>;

// Immutable scalar expression over four coordinates and named parameters.
// Closed under derivative(); construction folds constants and drops
// 0/1 identities but performs no other rewriting.
class Expression {
 public:
  struct Node;  // implementation detail, defined in expression.cpp
  using NodePtr = std::shared_ptr<const Node>;

  Expression();  // constant 0
  ~Expression();
  Expression(const Expression&) = default;
  Expression(Expression&&) noexcept = default;
  Expression& operator=(const Expression&) = default;
  Expression& operator=(Expression&&) noexcept = default;

  static Expression parse(const std::string& text, const SymbolTable& symbols);
  static Expression constant(double v);
  static Expression coordinate(int index);  // 0..3
  static Expression parameter(const std::string& name);

  double evaluate(const std::array<double, 4>& x, const Params& params = {}) const;
  Expression derivative(int coord) const;
  Expression bind(const Params& params) const;  // substitute parameters
  bool isConstant(double* value = nullptr) const;
  std::string str() const;

  friend Expression operator+(const Expression&, const Expression&);
  friend Expression operator-(const Expression&, const Expression&);
  friend Expression operator*(const Expression&, const Expression&);
  friend Expression operator/(const Expression&, const Expression&);
  friend Expression operator-(const Expression&);
  friend Expression pow(const Expression&, const Expression&);
  friend Expression sin(const Expression&);
  friend Expression cos(const Expression&);
  friend Expression exp(const Expression&);
  friend Expression ln(const Expression&);
  friend Expression sqrt(const Expression&);

 private:
  explicit Expression(NodePtr n) : node_(std::move(n)) {}
  NodePtr node_;
};

}  // namespace tforge
