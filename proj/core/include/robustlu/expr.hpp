#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "robustlu/setcalc.hpp"

namespace robustlu {

/// Syntax or declaration error in an expression string; position is the
/// 0-based character offset where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Raised by grad_check when a max/min/abs kink is active at the point.
class KinkActiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Constant, Var, Param, Sum, Product, Power, Negate, Max, Min, Abs };

/// Default absolute tolerance on branch values when deciding which max/min/abs
/// branches are active.
inline constexpr double kDefaultTolActive = 1e-9;

/// Immutable expression tree over decision variables x1..xn and uncertainty
/// parameters v1..vq. Copies share the tree.
class Expr {
 public:
  struct Node;

  static Expr constant(double c);
  static Expr var(std::size_t index);    // 0-based
  static Expr param(std::size_t index);  // 0-based
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, int exponent);
  static Expr negate(Expr e);
  static Expr max(std::vector<Expr> branches);
  static Expr min(std::vector<Expr> branches);
  static Expr abs(Expr e);

  NodeKind kind() const;
  double constant_value() const;
  std::size_t index() const;
  int exponent() const;
  const std::vector<Expr>& children() const;

  /// Declared dimensions; eval() requires exact matches.
  std::size_t n_vars() const { return n_vars_; }
  std::size_t n_params() const { return n_params_; }
  Expr with_dims(std::size_t n_vars, std::size_t n_params) const;

  double eval(const Vector& x, const Vector& v) const;

  /// Canonical text; parse(to_string()) reproduces the tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
  std::size_t n_vars_ = 0;
  std::size_t n_params_ = 0;
};

/// Parse the expression grammar: numbers, x1..xN, v1..vK, + - * ^ (positive
/// integer exponents), max(a, b, ...), min(a, b, ...), abs(a), parentheses.
/// Subtraction becomes a sum with a negated term; negated literals fold.
Expr parse(std::string_view text, std::size_t n_vars, std::size_t n_params);

struct SubdiffResult {
  Polytope polytope;
  /// False when a kink rule fired with more than one active branch.
  bool is_exact;
};

/// Subdifferential surrogate with respect to x: exact gradients on smooth
/// nodes, Minkowski sums for sums and products, and the convex hull of the
/// active branches at max/min/abs kinks.
SubdiffResult subdiff(const Expr& e, const Vector& x, const Vector& v,
                      double tol_active = kDefaultTolActive);

/// Largest relative deviation |fd_i - g_i| / max(1, |g_i|) between the
/// gradient and central differences with step h. Throws KinkActiveError if a
/// kink is active at x.
double grad_check(const Expr& e, const Vector& x, const Vector& v, double h,
                  double tol_active = kDefaultTolActive);

}  // namespace robustlu
