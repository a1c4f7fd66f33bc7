#include "robustlu/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "robustlu/format.hpp"

namespace robustlu {

struct Expr::Node {
  NodeKind kind;
  double value = 0.0;
  std::size_t index = 0;
  int exponent = 1;
  std::vector<Expr> children;
};

namespace {

std::size_t required_vars(const std::vector<Expr>& cs) {
  std::size_t n = 0;
  for (const auto& c : cs) n = std::max(n, c.n_vars());
  return n;
}

std::size_t required_params(const std::vector<Expr>& cs) {
  std::size_t n = 0;
  for (const auto& c : cs) n = std::max(n, c.n_params());
  return n;
}

}  // namespace

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {
  switch (node_->kind) {
    case NodeKind::Var:
      n_vars_ = node_->index + 1;
      break;
    case NodeKind::Param:
      n_params_ = node_->index + 1;
      break;
    default:
      n_vars_ = required_vars(node_->children);
      n_params_ = required_params(node_->children);
  }
}

Expr Expr::constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("expression constant must be finite");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Constant, c, 0, 1, {}}));
}

Expr Expr::var(std::size_t index) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Var, 0.0, index, 1, {}}));
}

Expr Expr::param(std::size_t index) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Param, 0.0, index, 1, {}}));
}

namespace {

std::vector<Expr> flatten(std::vector<Expr> items, NodeKind kind) {
  std::vector<Expr> out;
  for (auto& e : items) {
    if (e.kind() == kind) {
      out.insert(out.end(), e.children().begin(), e.children().end());
    } else {
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) throw std::invalid_argument("sum needs at least one term");
  if (terms.size() == 1) return terms.front();
  return Expr(std::make_shared<const Node>(
      Node{NodeKind::Sum, 0.0, 0, 1, flatten(std::move(terms), NodeKind::Sum)}));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) throw std::invalid_argument("product needs at least one factor");
  if (factors.size() == 1) return factors.front();
  return Expr(std::make_shared<const Node>(
      Node{NodeKind::Product, 0.0, 0, 1, flatten(std::move(factors), NodeKind::Product)}));
}

Expr Expr::power(Expr base, int exponent) {
  if (exponent < 1) throw std::invalid_argument("power exponent must be a positive integer");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Power, 0.0, 0, exponent, {std::move(base)}}));
}

Expr Expr::negate(Expr e) {
  if (e.kind() == NodeKind::Constant) return constant(-e.constant_value());
  return Expr(std::make_shared<const Node>(Node{NodeKind::Negate, 0.0, 0, 1, {std::move(e)}}));
}

Expr Expr::max(std::vector<Expr> branches) {
  if (branches.size() < 2) throw std::invalid_argument("max needs at least two branches");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Max, 0.0, 0, 1, std::move(branches)}));
}

Expr Expr::min(std::vector<Expr> branches) {
  if (branches.size() < 2) throw std::invalid_argument("min needs at least two branches");
  return Expr(std::make_shared<const Node>(Node{NodeKind::Min, 0.0, 0, 1, std::move(branches)}));
}

Expr Expr::abs(Expr e) {
  return Expr(std::make_shared<const Node>(Node{NodeKind::Abs, 0.0, 0, 1, {std::move(e)}}));
}

NodeKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
std::size_t Expr::index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
const std::vector<Expr>& Expr::children() const { return node_->children; }

Expr Expr::with_dims(std::size_t n_vars, std::size_t n_params) const {
  if (n_vars < n_vars_ || n_params < n_params_) {
    throw std::invalid_argument("declared dimensions smaller than the expression requires");
  }
  Expr out = *this;
  out.n_vars_ = n_vars;
  out.n_params_ = n_params;
  return out;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::Constant:
      return a.constant_value() == b.constant_value();
    case NodeKind::Var:
    case NodeKind::Param:
      return a.index() == b.index();
    case NodeKind::Power:
      if (a.exponent() != b.exponent()) return false;
      break;
    default:
      break;
  }
  return a.children() == b.children();
}

// ---------------------------------------------------------------- eval

namespace {

double ipow(double base, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= base;
  return out;
}

double eval_node(const Expr& e, const Vector& x, const Vector& v) {
  switch (e.kind()) {
    case NodeKind::Constant:
      return e.constant_value();
    case NodeKind::Var:
      return x[static_cast<Eigen::Index>(e.index())];
    case NodeKind::Param:
      return v[static_cast<Eigen::Index>(e.index())];
    case NodeKind::Sum: {
      double s = 0.0;
      for (const auto& c : e.children()) s += eval_node(c, x, v);
      return s;
    }
    case NodeKind::Product: {
      double p = 1.0;
      for (const auto& c : e.children()) p *= eval_node(c, x, v);
      return p;
    }
    case NodeKind::Power:
      return ipow(eval_node(e.children().front(), x, v), e.exponent());
    case NodeKind::Negate:
      return -eval_node(e.children().front(), x, v);
    case NodeKind::Max: {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& c : e.children()) m = std::max(m, eval_node(c, x, v));
      return m;
    }
    case NodeKind::Min: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& c : e.children()) m = std::min(m, eval_node(c, x, v));
      return m;
    }
    case NodeKind::Abs:
      return std::abs(eval_node(e.children().front(), x, v));
  }
  return 0.0;
}

void check_dims(const Expr& e, const Vector& x, const Vector& v) {
  if (static_cast<std::size_t>(x.size()) != e.n_vars() || static_cast<std::size_t>(v.size()) != e.n_params()) {
    throw std::invalid_argument("expression evaluated with mismatched dimensions: expected " +
                                std::to_string(e.n_vars()) + " variables and " +
                                std::to_string(e.n_params()) + " parameters");
  }
}

}  // namespace

double Expr::eval(const Vector& x, const Vector& v) const {
  check_dims(*this, x, v);
  return eval_node(*this, x, v);
}

// ---------------------------------------------------------------- printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Sum:
      return 1;
    case NodeKind::Product:
      return 2;
    case NodeKind::Negate:
      return 3;
    case NodeKind::Constant:
      return e.constant_value() < 0.0 ? 3 : 5;
    case NodeKind::Power:
      return 4;
    default:
      return 5;
  }
}

std::string print(const Expr& e, int required);

std::string join_args(const std::vector<Expr>& cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i > 0) out += ", ";
    out += print(cs[i], 0);
  }
  return out;
}

std::string raw(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::Constant:
      return format_number(e.constant_value());
    case NodeKind::Var:
      return "x" + std::to_string(e.index() + 1);
    case NodeKind::Param:
      return "v" + std::to_string(e.index() + 1);
    case NodeKind::Sum: {
      const auto& cs = e.children();
      std::string out = print(cs.front(), 2);
      for (std::size_t i = 1; i < cs.size(); ++i) {
        const auto& c = cs[i];
        if (c.kind() == NodeKind::Negate) {
          out += " - " + print(c.children().front(), 2);
        } else if (c.kind() == NodeKind::Constant && c.constant_value() < 0.0) {
          out += " - " + format_number(-c.constant_value());
        } else {
          out += " + " + print(c, 2);
        }
      }
      return out;
    }
    case NodeKind::Product: {
      std::string out;
      for (std::size_t i = 0; i < e.children().size(); ++i) {
        if (i > 0) out += "*";
        out += print(e.children()[i], 3);
      }
      return out;
    }
    case NodeKind::Power:
      return print(e.children().front(), 5) + "^" + std::to_string(e.exponent());
    case NodeKind::Negate:
      return "-" + print(e.children().front(), 3);
    case NodeKind::Max:
      return "max(" + join_args(e.children()) + ")";
    case NodeKind::Min:
      return "min(" + join_args(e.children()) + ")";
    case NodeKind::Abs:
      return "abs(" + join_args(e.children()) + ")";
  }
  return {};
}

std::string print(const Expr& e, int required) {
  std::string s = raw(e);
  if (precedence(e) < required) return "(" + s + ")";
  return s;
}

}  // namespace

std::string Expr::to_string() const { return print(*this, 0); }

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::size_t n_vars, std::size_t n_params)
      : s_(text), n_vars_(n_vars), n_params_(n_params) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail(std::string("unexpected character '") + s_[pos_] + "'");
    return e.with_dims(n_vars_, n_params_);
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_expr() {
    std::vector<Expr> terms{parse_term()};
    while (true) {
      if (eat('+')) {
        terms.push_back(parse_term());
      } else if (eat('-')) {
        terms.push_back(Expr::negate(parse_term()));
      } else {
        break;
      }
    }
    return Expr::sum(std::move(terms));
  }

  Expr parse_term() {
    std::vector<Expr> factors{parse_unary()};
    while (eat('*')) factors.push_back(parse_unary());
    return Expr::product(std::move(factors));
  }

  Expr parse_unary() {
    if (eat('-')) return Expr::negate(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (eat('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected a positive integer exponent");
      int k = 0;
      const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, k);
      if (res.ec != std::errc() || k < 1) {
        pos_ = start;
        fail("exponent must be a positive integer");
      }
      if (eat('^')) fail("chained exponents are not supported");
      return Expr::power(std::move(base), k);
    }
    return base;
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return pos_ > b;
    };
    bool any = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      any = digits() || any;
    }
    if (!any) {
      pos_ = start;
      fail("malformed number");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (!digits()) fail("malformed exponent in number");
    }
    double value = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_ || !std::isfinite(value)) {
      pos_ = start;
      fail("malformed number");
    }
    return Expr::constant(value);
  }

  std::vector<Expr> parse_args() {
    expect('(');
    std::vector<Expr> args{parse_expr()};
    while (eat(',')) args.push_back(parse_expr());
    expect(')');
    return args;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string_view word = s_.substr(start, pos_ - start);
      if (word == "x" || word == "v") return parse_symbol(word[0], start);
      if (word == "max" || word == "min") {
        const std::size_t at = pos_;
        auto args = parse_args();
        if (args.size() < 2) {
          pos_ = at;
          fail(std::string(word) + " needs at least two arguments");
        }
        return word == "max" ? Expr::max(std::move(args)) : Expr::min(std::move(args));
      }
      if (word == "abs") {
        const std::size_t at = pos_;
        auto args = parse_args();
        if (args.size() != 1) {
          pos_ = at;
          fail("abs takes exactly one argument");
        }
        return Expr::abs(std::move(args.front()));
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(word) + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Expr parse_symbol(char kind, std::size_t start) {
    const std::size_t digits_at = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (digits_at == pos_) {
      pos_ = start;
      fail(std::string("expected an index after '") + kind + "'");
    }
    std::size_t idx = 0;
    std::from_chars(s_.data() + digits_at, s_.data() + pos_, idx);
    const std::size_t limit = kind == 'x' ? n_vars_ : n_params_;
    if (idx < 1 || idx > limit) {
      pos_ = start;
      fail(std::string("undeclared ") + (kind == 'x' ? "variable" : "parameter") + " " + kind +
           std::to_string(idx));
    }
    return kind == 'x' ? Expr::var(idx - 1) : Expr::param(idx - 1);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t n_vars_;
  std::size_t n_params_;
};

}  // namespace

Expr parse(std::string_view text, std::size_t n_vars, std::size_t n_params) {
  return Parser(text, n_vars, n_params).run();
}

// ---------------------------------------------------------------- subdiff

namespace {

struct Local {
  double value;
  std::vector<Vector> verts;
  bool exact;
};

void push_unique(std::vector<Vector>& set, Vector v) {
  for (const auto& w : set) {
    if (w == v) return;
  }
  set.push_back(std::move(v));
}

std::vector<Vector> minkowski(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  std::vector<Vector> out;
  for (const auto& p : a) {
    for (const auto& q : b) push_unique(out, p + q);
  }
  return out;
}

std::vector<Vector> scaled(const std::vector<Vector>& a, double k) {
  std::vector<Vector> out;
  for (const auto& p : a) push_unique(out, k * p);
  return out;
}

Local sd(const Expr& e, const Vector& x, const Vector& v, double tol) {
  const auto n = x.size();
  switch (e.kind()) {
    case NodeKind::Constant:
    case NodeKind::Param:
      return {eval_node(e, x, v), {Vector::Zero(n)}, true};
    case NodeKind::Var: {
      Vector g = Vector::Zero(n);
      g[static_cast<Eigen::Index>(e.index())] = 1.0;
      return {x[static_cast<Eigen::Index>(e.index())], {g}, true};
    }
    case NodeKind::Sum: {
      Local acc{0.0, {Vector::Zero(n)}, true};
      for (const auto& c : e.children()) {
        Local l = sd(c, x, v, tol);
        acc.value += l.value;
        acc.verts = minkowski(acc.verts, l.verts);
        acc.exact = acc.exact && l.exact;
      }
      return acc;
    }
    case NodeKind::Product: {
      std::vector<Local> parts;
      for (const auto& c : e.children()) parts.push_back(sd(c, x, v, tol));
      const std::size_t k = parts.size();
      std::vector<double> prefix(k + 1, 1.0);
      std::vector<double> suffix(k + 1, 1.0);
      for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] * parts[i].value;
      for (std::size_t i = k; i > 0; --i) suffix[i - 1] = suffix[i] * parts[i - 1].value;
      Local acc{prefix[k], {Vector::Zero(n)}, true};
      for (std::size_t i = 0; i < k; ++i) {
        acc.verts = minkowski(acc.verts, scaled(parts[i].verts, prefix[i] * suffix[i + 1]));
        acc.exact = acc.exact && parts[i].exact;
      }
      return acc;
    }
    case NodeKind::Power: {
      Local b = sd(e.children().front(), x, v, tol);
      const int k = e.exponent();
      const double outer = static_cast<double>(k) * ipow(b.value, k - 1);
      return {ipow(b.value, k), scaled(b.verts, outer), b.exact};
    }
    case NodeKind::Negate: {
      Local c = sd(e.children().front(), x, v, tol);
      return {-c.value, scaled(c.verts, -1.0), c.exact};
    }
    case NodeKind::Max:
    case NodeKind::Min: {
      // min(a, b) = -max(-a, -b): both reduce to the hull over active branches.
      const bool is_max = e.kind() == NodeKind::Max;
      std::vector<Local> parts;
      for (const auto& c : e.children()) parts.push_back(sd(c, x, v, tol));
      double best = parts.front().value;
      for (const auto& p : parts) best = is_max ? std::max(best, p.value) : std::min(best, p.value);
      std::vector<const Local*> active;
      for (const auto& p : parts) {
        const bool on = is_max ? p.value >= best - tol : p.value <= best + tol;
        if (on) active.push_back(&p);
      }
      if (active.size() == 1) return {best, active.front()->verts, active.front()->exact};
      Local out{best, {}, false};
      for (const auto* p : active) {
        for (const auto& w : p->verts) push_unique(out.verts, w);
      }
      return out;
    }
    case NodeKind::Abs: {
      Local c = sd(e.children().front(), x, v, tol);
      if (std::abs(c.value) > tol) {
        return {std::abs(c.value), scaled(c.verts, c.value > 0.0 ? 1.0 : -1.0), c.exact};
      }
      Local out{std::abs(c.value), c.verts, false};
      for (const auto& w : c.verts) push_unique(out.verts, -w);
      return out;
    }
  }
  return {0.0, {Vector::Zero(n)}, true};
}

}  // namespace

SubdiffResult subdiff(const Expr& e, const Vector& x, const Vector& v, double tol_active) {
  check_dims(e, x, v);
  Local l = sd(e, x, v, tol_active);
  return {Polytope(std::move(l.verts)), l.exact};
}

double grad_check(const Expr& e, const Vector& x, const Vector& v, double h, double tol_active) {
  const SubdiffResult s = subdiff(e, x, v, tol_active);
  if (!s.is_exact) throw KinkActiveError("grad_check: a kink is active at the evaluation point");
  const Vector& g = s.polytope.vertex(0);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x;
    Vector xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (e.eval(xp, v) - e.eval(xm, v)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

}  // namespace robustlu
