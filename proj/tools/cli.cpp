#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>

#include "robustlu/kvtext.hpp"
#include "robustlu/problem_io.hpp"
#include "robustlu/report.hpp"

namespace robustlu::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string problem;
  std::string grid;
  std::optional<double> tol_incl;
  std::optional<double> tol_feas;
  std::optional<double> tol_active;
  std::string cap_mode = "on";
  std::uint64_t seed = 0;
  std::string format = "text";
};

// key=value tokens after the subcommand.
class Tokens {
 public:
  Tokens(const std::vector<std::string>& raw, std::set<std::string> allowed, std::set<std::string> repeatable = {}) {
    for (const auto& t : raw) {
      const auto eq = t.find('=');
      if (eq == std::string::npos || eq == 0) throw UsageError("expected key=value, got '" + t + "'");
      const std::string key = t.substr(0, eq);
      if (!allowed.count(key) && !repeatable.count(key)) throw UsageError("unknown argument '" + key + "'");
      auto& slot = values_[key];
      if (!slot.empty() && !repeatable.count(key)) throw UsageError("argument '" + key + "' given twice");
      slot.push_back(t.substr(eq + 1));
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const std::string& get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw UsageError("missing argument '" + key + "=...'");
    return it->second.front();
  }

  std::vector<std::string> all(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? std::vector<std::string>{} : it->second;
  }

 private:
  std::map<std::string, std::vector<std::string>> values_;
};

// A decimal number or a fraction p/q.
double parse_number(std::string_view s) {
  auto whole = [](std::string_view t) {
    double x = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), x);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw UsageError("not a number: '" + std::string(t) + "'");
    }
    return x;
  };
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) return whole(s);
  const double q = whole(s.substr(slash + 1));
  if (q == 0.0) throw UsageError("zero denominator in '" + std::string(s) + "'");
  return whole(s.substr(0, slash)) / q;
}

Vector parse_vector(const std::string& s, std::size_t expect, const std::string& name) {
  std::vector<double> xs;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    xs.push_back(parse_number(std::string_view(s).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (xs.size() != expect) {
    throw UsageError(name + " has " + std::to_string(xs.size()) + " components, expected " + std::to_string(expect));
  }
  return Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

int parse_count(const std::string& s, const std::string& name) {
  const double x = parse_number(s);
  if (x < 1 || x != static_cast<int>(x)) throw UsageError(name + " must be a positive integer");
  return static_cast<int>(x);
}

Tolerances tolerances(const Options& o) {
  Tolerances t;
  if (o.tol_incl) t.tol_incl = *o.tol_incl;
  if (o.tol_feas) t.tol_feas = *o.tol_feas;
  if (o.tol_active) t.tol_active = *o.tol_active;
  return t;
}

Problem need_problem(const Options& o) {
  if (o.problem.empty()) throw UsageError("--problem FILE is required");
  return load_problem(o.problem);
}

Grid need_grid(const Options& o, std::size_t n) {
  if (o.grid.empty()) throw UsageError("--grid lo,hi,steps is required");
  try {
    return Grid::parse(o.grid, n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--grid: ") + e.what());
  }
}

void add_problem_summary(Report& r, const Problem& prob) {
  r.add("n", prob.n());
  r.add("m", prob.m());
  r.add("p", prob.p());
  r.add("theta", prob.theta());
  r.add("sqrt_theta", prob.sqrt_theta());
}

int cmd_validate(const Options& o, const Tokens&, Report& r) {
  const Problem prob = need_problem(o);
  add_problem_summary(r, prob);
  r.add("set_rows", prob.S().rows().size());
  for (std::size_t j = 0; j < prob.p(); ++j) {
    r.add("constraint." + std::to_string(j + 1) + ".samples", prob.constraints()[j].samples.size());
  }
  for (std::size_t i = 0; i < prob.m(); ++i) {
    r.add("epsilon." + std::to_string(i + 1), std::vector<Bounds>{prob.precision()[i]});
  }
  if (!o.grid.empty()) {
    const Grid grid = need_grid(o, prob.n());
    const auto bad = find_objective_violation(prob, grid.points());
    r.add("grid", grid.describe());
    r.add("objective_order", std::string(bad ? "violated" : "ok"));
    if (bad) {
      r.add("objective_order.witness", *bad);
      return kRefuted;
    }
  }
  r.add("valid", true);
  return kCompleted;
}

int cmd_classify(const Options& o, const Tokens& t, Report& r) {
  const Problem prob = need_problem(o);
  const Vector z = parse_vector(t.get("z"), prob.n(), "z");
  const Grid grid = need_grid(o, prob.n());
  r.add("z", z);
  append(r, classify_point(prob, z, grid, tolerances(o)));
  return kCompleted;
}

int cmd_kkt(const Options& o, const Tokens& t, Report& r) {
  const Problem prob = need_problem(o);
  const Vector z = parse_vector(t.get("z"), prob.n(), "z");
  const Vector lambda = parse_vector(t.get("lambda"), prob.p(), "lambda");
  r.add("z", z);
  r.add("lambda", lambda);
  const KktCertificate c = check_kkt_pair(prob, z, lambda, tolerances(o));
  append(r, c);
  return c.verdict ? kCompleted : kRefuted;
}

int cmd_solve_penalty(const Options& o, const Tokens& t, Report& r) {
  const Problem prob = need_problem(o);
  PenaltyOptions po;
  po.seed = o.seed;
  if (t.has("r0")) po.r0 = parse_number(t.get("r0"));
  if (t.has("shrink")) po.shrink = parse_number(t.get("shrink"));
  if (t.has("starts")) po.starts = parse_count(t.get("starts"), "starts");
  if (t.has("max_outer")) po.max_outer = parse_count(t.get("max_outer"), "max_outer");
  if (t.has("inner_iters")) po.inner_iters = parse_count(t.get("inner_iters"), "inner_iters");
  if (t.has("polish_iters")) po.polish_iters = parse_count(t.get("polish_iters"), "polish_iters");
  if (t.has("box_lo")) po.box_lo = parse_vector(t.get("box_lo"), prob.n(), "box_lo");
  if (t.has("box_hi")) po.box_hi = parse_vector(t.get("box_hi"), prob.n(), "box_hi");
  const Tolerances tols = tolerances(o);
  const PenaltyRun run = solve_penalty(prob, po, tols);
  r.add("seed", static_cast<std::size_t>(o.seed));
  append(r, run);
  if (!o.grid.empty() && run.success) {
    const Classification c = classify_point(prob, run.z, need_grid(o, prob.n()), tols);
    r.add("almost_theta_quasi", std::string(to_string(c.almost_theta_quasi.verdict)));
  }
  return run.success ? kCompleted : kRefuted;
}

int cmd_convexity(const Options& o, const Tokens& t, Report& r) {
  const Problem prob = need_problem(o);
  const auto notion = parse_notion(t.get("notion"));
  if (!notion) throw UsageError("notion must be generalized, theta_pseudo_quasi or eps_pseudo_quasi");
  const Vector z = parse_vector(t.get("z"), prob.n(), "z");
  const Grid grid = need_grid(o, prob.n());
  r.add("z", z);
  r.add("grid", grid.describe());
  const ConvexityVerdict v = certify(prob, *notion, z, grid.points(), tolerances(o));
  append(r, v);
  return v.certified ? kCompleted : kRefuted;
}

int cmd_dual_objective(const Options& o, const Tokens& t, Report& r) {
  const Problem prob = need_problem(o);
  const Vector y = parse_vector(t.get("y"), prob.n(), "y");
  const Vector lambda = parse_vector(t.get("lambda"), prob.p(), "lambda");
  r.add("y", y);
  r.add("lambda", lambda);
  r.add("L", to_bounds(dual_objective(prob, y, lambda)));
  return kCompleted;
}

int cmd_dual_classify(const Options& o, const Tokens& t, Report& r) {
  const Problem prob = need_problem(o);
  const Tolerances tols = tolerances(o);
  const Vector z = parse_vector(t.get("z"), prob.n(), "z");
  const Vector lambda = parse_vector(t.get("lambda"), prob.p(), "lambda");
  DualConfig cfg;
  try {
    cfg = DualConfig::make(prob, z, lambda, o.cap_mode == "on", tols);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  DualPoint candidate{z, lambda};
  if (t.has("y")) candidate.y = parse_vector(t.get("y"), prob.n(), "y");
  if (t.has("mu")) candidate.lambda = parse_vector(t.get("mu"), prob.p(), "mu");

  std::vector<DualPoint> samples;
  for (const auto& s : t.all("sample")) {
    const auto bar = s.find('|');
    if (bar == std::string::npos) throw UsageError("sample must be y|lambda");
    samples.push_back({parse_vector(s.substr(0, bar), prob.n(), "sample y"),
                       parse_vector(s.substr(bar + 1), prob.p(), "sample lambda")});
  }
  if (!o.grid.empty()) {
    Vector lmax(static_cast<Eigen::Index>(prob.p()));
    for (Eigen::Index j = 0; j < lmax.size(); ++j) lmax[j] = 4.0 * std::max(lambda[j], 1.0);
    if (t.has("lambda_max")) lmax = parse_vector(t.get("lambda_max"), prob.p(), "lambda_max");
    const int steps = t.has("lambda_steps") ? parse_count(t.get("lambda_steps"), "lambda_steps") : 8;
    const auto generated = dual_samples(prob, cfg, need_grid(o, prob.n()).points(), lmax, steps, tols);
    samples.insert(samples.end(), generated.begin(), generated.end());
  }
  if (samples.empty()) throw UsageError("dual-classify needs sample=y|lambda tokens or --grid");

  r.add("cap_mode", o.cap_mode);
  r.add("anchor.z", z);
  r.add("anchor.lambda", lambda);
  r.add("candidate.y", candidate.y);
  r.add("candidate.lambda", candidate.lambda);
  if (in_S(prob, candidate.y, tols.tol_feas)) {
    const DualMembership m = in_Omega_D(prob, cfg, candidate.y, candidate.lambda, tols);
    r.add("candidate.member", m.member);
  } else {
    r.add("candidate.member", false);
  }
  const DualVerdict v = dual_classify(prob, cfg, candidate, samples, tols);
  append(r, v);
  return v.holds ? kCompleted : kRefuted;
}

int cmd_saddle(const Options& o, const Tokens& t, Report& r) {
  const Problem prob = need_problem(o);
  const Vector x = parse_vector(t.get("x"), prob.n(), "x");
  const Vector lambda = parse_vector(t.get("lambda"), prob.p(), "lambda");
  const int steps = t.has("lambda_steps") ? parse_count(t.get("lambda_steps"), "lambda_steps") : 8;
  const Grid grid = need_grid(o, prob.n());
  r.add("x", x);
  r.add("lambda", lambda);
  r.add("L", lagrangian_bounds(prob, x, lambda, x, lambda));
  const SaddleReport s = check_saddle(prob, x, lambda, default_lambda_grid(lambda, steps), grid.points(), tolerances(o));
  append(r, s);
  return s.holds() ? kCompleted : kRefuted;
}

int cmd_harness(const Options& o, const Tokens& t, Report& r) {
  HarnessOptions h;
  h.seed = o.seed;
  if (t.has("instances")) h.instances = static_cast<std::size_t>(parse_count(t.get("instances"), "instances"));
  if (t.has("dual_samples")) h.dual_samples = static_cast<std::size_t>(parse_count(t.get("dual_samples"), "dual_samples"));
  r.add("seed", static_cast<std::size_t>(o.seed));
  const HarnessReport rep = run_property_suite(h);
  append(r, rep);
  return rep.ok() ? kCompleted : kRefuted;
}

struct Command {
  const char* name;
  const char* help;
  std::set<std::string> keys;
  std::set<std::string> repeatable;
  int (*run)(const Options&, const Tokens&, Report&);
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"validate", "Load a problem file and check it", {}, {}, cmd_validate},
      {"classify", "Grid classification of z: classify z=...", {"z"}, {}, cmd_classify},
      {"kkt", "KKT pair up to E: kkt z=... lambda=...", {"z", "lambda"}, {}, cmd_kkt},
      {"solve-penalty",
       "Quadratic penalty construction of a KKT pair",
       {"r0", "shrink", "starts", "max_outer", "inner_iters", "polish_iters", "box_lo", "box_hi"},
       {},
       cmd_solve_penalty},
      {"convexity", "Generalized convexity at z: convexity notion=... z=...", {"notion", "z"}, {}, cmd_convexity},
      {"dual-objective", "Dual objective L(y, lambda): dual-objective y=... lambda=...", {"y", "lambda"}, {},
       cmd_dual_objective},
      {"dual-classify",
       "Dual non-domination of (y, mu) around the anchor (z, lambda)",
       {"z", "lambda", "y", "mu", "lambda_max", "lambda_steps"},
       {"sample"},
       cmd_dual_classify},
      {"saddle", "Saddle conditions at (x, lambda): saddle x=... lambda=...", {"x", "lambda", "lambda_steps"}, {},
       cmd_saddle},
      {"harness", "Theorem property suites on random affine instances", {"instances", "dual_samples"}, {},
       cmd_harness},
  };
  return list;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Approximate Pareto certificates for robust interval-valued multiobjective problems", "robustlu");
  app.require_subcommand(1);
  Options o;
  app.add_option("--problem", o.problem, "Problem file");
  app.add_option("--grid", o.grid, "lo,hi,steps for every axis, or one triple per axis");
  app.add_option("--tol-incl", o.tol_incl, "Slack on dist <= sqrt(theta)")->check(CLI::PositiveNumber);
  app.add_option("--tol-feas", o.tol_feas, "Feasibility slack")->check(CLI::PositiveNumber);
  app.add_option("--tol-active", o.tol_active, "Active-set and kink tolerance")->check(CLI::PositiveNumber);
  app.add_option("--cap-mode", o.cap_mode, "Multiplier cap in the dual feasible set")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--seed", o.seed, "Seed for every random choice");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "kv"}));

  std::vector<std::string> tokens;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->add_option("args", tokens, "key=value arguments");
    subs.emplace_back(sub, &c);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kCompleted;
    }
    err << "robustlu: " << e.what() << "\n";
    return kUsage;
  }

  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    Report r;
    r.add("command", std::string(cmd->name));
    int code = kCompleted;
    try {
      const Tokens t(tokens, cmd->keys, cmd->repeatable);
      code = cmd->run(o, t, r);
    } catch (const UsageError& e) {
      err << "robustlu " << cmd->name << ": " << e.what() << "\n";
      return kUsage;
    } catch (const kvtext::SyntaxError& e) {
      err << "robustlu " << cmd->name << ": " << o.problem << ": " << e.what() << "\n";
      return kUsage;
    } catch (const ProblemFormatError& e) {
      err << "robustlu " << cmd->name << ": " << o.problem << ": " << e.what() << "\n";
      return kUsage;
    } catch (const std::exception& e) {
      err << "robustlu " << cmd->name << ": " << e.what() << "\n";
      return kUsage;
    }
    out << (o.format == "kv" ? r.kv() : r.text());
    return code;
  }
  return kUsage;
}

}  // namespace robustlu::cli
