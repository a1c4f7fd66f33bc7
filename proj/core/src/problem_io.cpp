#include "robustlu/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "robustlu/kvtext.hpp"

namespace robustlu {

namespace {

using kvtext::Section;
using kvtext::Value;

[[noreturn]] void fail(const std::string& what, int line) { throw ProblemFormatError(what, line); }

const Value& require(const Section& sec, std::string_view key) {
  const Value* v = sec.find(key);
  if (v == nullptr) fail("[" + sec.name + "] is missing '" + std::string(key) + "'", sec.line);
  return *v;
}

double as_number(const Value& v, std::string_view what) {
  if (v.kind != Value::Kind::Number) fail(std::string(what) + " must be a number", v.line);
  return v.number;
}

const std::string& as_string(const Value& v, std::string_view what) {
  if (v.kind != Value::Kind::String) fail(std::string(what) + " must be a quoted string", v.line);
  return v.text;
}

Vector as_vector(const Value& v, std::string_view what) {
  if (v.kind != Value::Kind::Array) fail(std::string(what) + " must be an array of numbers", v.line);
  Vector out(static_cast<Eigen::Index>(v.items.size()));
  for (std::size_t k = 0; k < v.items.size(); ++k) out[static_cast<Eigen::Index>(k)] = as_number(v.items[k], what);
  return out;
}

std::vector<Vector> as_rows(const Value& v, std::string_view what) {
  if (v.kind != Value::Kind::Array) fail(std::string(what) + " must be an array of arrays", v.line);
  std::vector<Vector> rows;
  for (const auto& item : v.items) rows.push_back(as_vector(item, what));
  return rows;
}

std::size_t as_count(const Value& v, std::string_view what) {
  const double x = as_number(v, what);
  if (x < 1 || x != std::floor(x) || x > 1e6) fail(std::string(what) + " must be a positive integer", v.line);
  return static_cast<std::size_t>(x);
}

Expr as_expr(const Value& v, std::string_view what, std::size_t n, std::size_t q) {
  const std::string& text = as_string(v, what);
  try {
    return parse(text, n, q);
  } catch (const ParseError& e) {
    fail(std::string(what) + " \"" + text + "\": " + e.what(), v.line);
  }
}

UncertaintySet read_uncertainty(const Value* u, int line) {
  if (u == nullptr) return UncertaintySet({Vector(0)});
  if (u->kind != Value::Kind::Table) fail("uncertainty must be an inline table", line);
  if (const Value* pts = u->find("points")) {
    if (u->entries.size() != 1) fail("uncertainty: 'points' cannot be combined with box keys", u->line);
    auto rows = as_rows(*pts, "uncertainty points");
    if (rows.empty()) fail("uncertainty points are empty", u->line);
    try {
      return UncertaintySet(std::move(rows));
    } catch (const std::invalid_argument& e) {
      fail(e.what(), u->line);
    }
  }
  const Value* lo = u->find("box_lo");
  const Value* hi = u->find("box_hi");
  const Value* grid = u->find("grid");
  if (lo == nullptr || hi == nullptr || grid == nullptr || u->entries.size() != 3) {
    fail("uncertainty needs either points = [...] or exactly box_lo, box_hi and grid", u->line);
  }
  std::vector<int> counts;
  if (grid->kind != Value::Kind::Array) fail("uncertainty grid must be an array", grid->line);
  for (const auto& c : grid->items) counts.push_back(static_cast<int>(as_count(c, "uncertainty grid")));
  try {
    return UncertaintySet::from_box(as_vector(*lo, "box_lo"), as_vector(*hi, "box_hi"), counts);
  } catch (const std::invalid_argument& e) {
    fail(e.what(), u->line);
  }
}

void reject_unknown(const Section& sec, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : sec.entries) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail("unknown key '" + key + "' in [" + sec.name + "]", value.line);
  }
}

}  // namespace

Problem parse_problem(std::string_view text) {
  const auto sections = kvtext::parse(text);

  const Section* problem = nullptr;
  const Section* set = nullptr;
  const Section* epsilon = nullptr;
  std::vector<const Section*> objectives;
  std::vector<const Section*> constraints;
  for (const auto& sec : sections) {
    if (sec.name.empty()) fail("entries before the first section header", sec.line);
    auto single = [&](const Section*& slot) {
      if (sec.is_array) fail("[" + sec.name + "] is a table, not an array of tables", sec.line);
      if (slot != nullptr) fail("duplicate [" + sec.name + "] section", sec.line);
      slot = &sec;
    };
    if (sec.name == "problem") {
      single(problem);
    } else if (sec.name == "set") {
      single(set);
    } else if (sec.name == "epsilon") {
      single(epsilon);
    } else if (sec.name == "objective" || sec.name == "constraint") {
      if (!sec.is_array) fail("use [[" + sec.name + "]] for repeated sections", sec.line);
      (sec.name == "objective" ? objectives : constraints).push_back(&sec);
    } else {
      fail("unknown section [" + sec.name + "]", sec.line);
    }
  }
  if (problem == nullptr) fail("missing [problem] section", 0);
  if (epsilon == nullptr) fail("missing [epsilon] section", 0);
  if (objectives.empty()) fail("at least one [[objective]] is required", 0);

  reject_unknown(*problem, {"n", "name"});
  const std::size_t n = as_count(require(*problem, "n"), "n");

  std::vector<Objective> objs;
  for (const Section* sec : objectives) {
    reject_unknown(*sec, {"lower", "upper"});
    objs.push_back({as_expr(require(*sec, "lower"), "lower", n, 0), as_expr(require(*sec, "upper"), "upper", n, 0)});
  }

  std::vector<Constraint> cons;
  for (const Section* sec : constraints) {
    reject_unknown(*sec, {"expr", "uncertainty"});
    UncertaintySet samples = read_uncertainty(sec->find("uncertainty"), sec->line);
    const Expr g = as_expr(require(*sec, "expr"), "expr", n, samples.dim());
    cons.push_back({g, std::move(samples)});
  }

  std::vector<Halfspace> rows;
  if (set != nullptr) {
    reject_unknown(*set, {"A", "b"});
    const Value* a = set->find("A");
    const Value* b = set->find("b");
    if ((a == nullptr) != (b == nullptr)) fail("[set] needs both A and b", set->line);
    if (a != nullptr) {
      const auto A = as_rows(*a, "A");
      const Vector bv = as_vector(*b, "b");
      if (static_cast<Eigen::Index>(A.size()) != bv.size()) fail("[set] A and b differ in length", set->line);
      for (std::size_t k = 0; k < A.size(); ++k) {
        if (static_cast<std::size_t>(A[k].size()) != n) {
          fail("[set] row " + std::to_string(k + 1) + " of A does not have n entries", a->line);
        }
        rows.push_back({A[k], bv[static_cast<Eigen::Index>(k)]});
      }
    }
  }

  reject_unknown(*epsilon, {"pairs"});
  const Value& pairs = require(*epsilon, "pairs");
  std::vector<Interval> eps;
  for (const Vector& pr : as_rows(pairs, "epsilon pairs")) {
    if (pr.size() != 2) fail("each epsilon pair must be [lo, hi]", pairs.line);
    try {
      eps.emplace_back(pr[0], pr[1]);
    } catch (const std::invalid_argument& e) {
      fail(std::string("epsilon: ") + e.what(), pairs.line);
    }
  }

  try {
    return Problem(n, std::move(objs), std::move(cons), Polyhedron(n, std::move(rows)), Precision(std::move(eps)));
  } catch (const std::invalid_argument& e) {
    fail(e.what(), 0);
  }
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace robustlu
