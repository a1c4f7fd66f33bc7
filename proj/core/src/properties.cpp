#include "robustlu/properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "robustlu/convexity.hpp"
#include "robustlu/kkt.hpp"
#include "robustlu/saddle.hpp"
#include "robustlu/wolfe.hpp"

namespace robustlu {

namespace {

// a . x + c + b * v_0
Expr affine(const Vector& a, double c, double b = 0.0) {
  std::vector<Expr> terms;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    terms.push_back(Expr::product({Expr::constant(a[k]), Expr::var(static_cast<std::size_t>(k))}));
  }
  if (b != 0.0) terms.push_back(Expr::product({Expr::constant(b), Expr::param(0)}));
  terms.push_back(Expr::constant(c));
  return Expr::sum(std::move(terms)).with_dims(static_cast<std::size_t>(a.size()), b != 0.0 ? 1 : 0);
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Vector vec(Eigen::Index n, double lo, double hi) {
    Vector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v[k] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

AffineInstance random_affine_instance(std::uint64_t seed) {
  Draw d(seed * 0x9e3779b97f4a7c15ULL + 17);
  const auto n = static_cast<Eigen::Index>(d.integer(1, 3));
  const int m = d.integer(1, 3);
  const int p = d.integer(1, 2);

  const Vector lo = d.vec(n, -2.0, -0.5);
  const Vector hi = d.vec(n, 0.5, 2.0);

  std::vector<Interval> eps;
  for (int i = 0; i < m; ++i) {
    const double l = d.uniform(0.0, 0.3);
    eps.emplace_back(l, l + d.uniform(0.0, 0.3) + (i == 0 ? 0.05 : 0.0));
  }
  const Precision prec(eps);
  const double root = prec.sqrt_theta();

  // Anchor, snapped to a face of S on some axes.
  Vector z(n);
  Vector normal = Vector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const int face = d.integer(0, 2);
    if (face == 0) {
      z[k] = lo[k];
      normal[k] = -d.uniform(0.0, 1.0);
    } else if (face == 1) {
      z[k] = hi[k];
      normal[k] = d.uniform(0.0, 1.0);
    } else {
      z[k] = d.uniform(lo[k], hi[k]);
    }
  }

  std::vector<Constraint> cons;
  Vector lambda = Vector::Zero(p);
  Vector weighted = Vector::Zero(n);
  // Some instances get x-independent constraints so the monotone-g
  // hypothesis of the saddle theorems can hold.
  const bool constant_g = d.integer(0, 3) == 0;
  const std::vector<Vector> vs{Vector::Constant(1, 0.0), Vector::Constant(1, 0.5), Vector::Constant(1, 1.0)};
  for (int j = 0; j < p; ++j) {
    const Vector c = constant_g ? Vector::Zero(n) : d.vec(n, -1.0, 1.0);
    const double b = d.uniform(-1.0, 1.0);
    // Target value of g_j(z): either comfortably negative or inside (0, sqrt(theta)].
    double target;
    if (d.integer(0, 1) == 0) {
      target = -d.uniform(0.1, 1.0);
    } else {
      target = d.uniform(0.1, 0.9) * root;
      lambda[j] = d.uniform(0.1, 3.0);
    }
    const double offset = target - c.dot(z) - std::max(0.0, b);
    cons.push_back({affine(c, offset, b).with_dims(static_cast<std::size_t>(n), 1), UncertaintySet(vs)});
    weighted += lambda[j] * c;
  }

  // Objective gradients: f_i^L has slope a_i, f_i^U has slope a_i + delta_i.
  // The last a_m balances the stationarity sum up to a small residual.
  std::vector<Vector> a(static_cast<std::size_t>(m));
  std::vector<Vector> delta(static_cast<std::size_t>(m));
  Vector total = weighted + normal;
  for (int i = 0; i < m; ++i) {
    delta[static_cast<std::size_t>(i)] = d.vec(n, -0.3, 0.3);
    total += delta[static_cast<std::size_t>(i)];
    if (i + 1 < m) {
      a[static_cast<std::size_t>(i)] = d.vec(n, -2.0, 2.0);
      total += 2.0 * a[static_cast<std::size_t>(i)];
    }
  }
  Vector eta = d.vec(n, -1.0, 1.0);
  if (eta.norm() > 0.0) eta *= d.uniform(0.0, 0.5) * root / eta.norm();
  a[static_cast<std::size_t>(m - 1)] = (eta - total) / 2.0;

  std::vector<Objective> objs;
  for (int i = 0; i < m; ++i) {
    const auto& ai = a[static_cast<std::size_t>(i)];
    const auto& di = delta[static_cast<std::size_t>(i)];
    // Width constant keeps f^U - f^L = delta . x + w >= 0 on every corner of S.
    double w = 0.0;
    for (int corner = 0; corner < (1 << n); ++corner) {
      Vector x(n);
      for (Eigen::Index k = 0; k < n; ++k) x[k] = ((corner >> k) & 1) ? hi[k] : lo[k];
      w = std::max(w, -di.dot(x));
    }
    w += d.uniform(0.0, 0.5);
    const double alpha = d.uniform(-1.0, 1.0);
    objs.push_back({affine(ai, alpha), affine(ai + di, alpha + w)});
  }

  const int steps = n == 1 ? 200 : (n == 2 ? 30 : 12);
  Problem prob(static_cast<std::size_t>(n), std::move(objs), std::move(cons), Polyhedron::box(lo, hi), prec);
  return AffineInstance{std::move(prob), z, lambda, Grid(lo, hi, std::vector<int>(static_cast<std::size_t>(n), steps))};
}

bool HarnessReport::ok() const {
  return std::all_of(properties.begin(), properties.end(), [](const PropertyStats& s) { return s.violations == 0; });
}

const PropertyStats* HarnessReport::find(const std::string& name) const {
  for (const auto& s : properties) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

class Tally {
 public:
  explicit Tally(std::vector<PropertyStats>& out) : out_(out) {}

  void record(const std::string& name, bool hypotheses, bool conclusion, std::size_t instance,
              const std::string& detail = "") {
    PropertyStats& s = get(name);
    if (!hypotheses) {
      ++s.vacuous;
      return;
    }
    ++s.checked;
    if (!conclusion) {
      if (s.violations == 0) {
        std::ostringstream os;
        os << "instance " << instance;
        if (!detail.empty()) os << ": " << detail;
        s.first_violation = os.str();
      }
      ++s.violations;
    }
  }

 private:
  PropertyStats& get(const std::string& name) {
    for (auto& s : out_) {
      if (s.name == name) return s;
    }
    PropertyStats s;
    s.name = name;
    out_.push_back(std::move(s));
    return out_.back();
  }
  std::vector<PropertyStats>& out_;
};

// Half the multipliers perturb the anchor's, half are uniform on the
// default saddle box.
std::vector<DualPoint> random_dual_points(Draw& d, const AffineInstance& inst, std::size_t count) {
  const Problem& prob = inst.problem;
  const Eigen::Index n = static_cast<Eigen::Index>(prob.n());
  const Eigen::Index p = static_cast<Eigen::Index>(prob.p());
  const Vector& lo = inst.grid.lo();
  const Vector& hi = inst.grid.hi();
  std::vector<DualPoint> out;
  for (std::size_t s = 0; s < count; ++s) {
    Vector y(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const int face = d.integer(0, 3);
      y[k] = face == 0 ? lo[k] : face == 1 ? hi[k] : face == 2 ? inst.z[k] : d.uniform(lo[k], hi[k]);
    }
    Vector mu(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      if (s % 2 == 0) {
        mu[j] = std::max(0.0, inst.lambda[j] + d.uniform(-0.3, 0.3) * prob.sqrt_theta());
      } else {
        mu[j] = d.uniform(0.0, 4.0 * std::max(inst.lambda[j], 1.0));
      }
    }
    out.push_back({y, mu});
  }
  return out;
}

}  // namespace

HarnessReport run_property_suite(const HarnessOptions& opts) {
  HarnessReport report;
  report.instances = opts.instances;
  Tally tally(report.properties);
  Tolerances tols;
  tols.tol_strict = opts.tol_strict;

  for (std::size_t k = 0; k < opts.instances; ++k) {
    const std::uint64_t seed = opts.seed * 1000003ULL + k;
    const AffineInstance inst = random_affine_instance(seed);
    const Problem& prob = inst.problem;
    Draw d(seed ^ 0x5bd1e995ULL);

    const KktCertificate cert = check_kkt_pair(prob, inst.z, inst.lambda, tols);
    tally.record("anchor_kkt", true, cert.verdict, k, cert.reason);

    const std::vector<Vector> points = inst.grid.points();
    const Classification cz = classify_point(prob, inst.z, inst.grid, tols);
    const Vector other = inst.grid.point(static_cast<std::size_t>(d.integer(0, static_cast<int>(points.size()) - 1)));
    const Classification co = classify_point(prob, other, inst.grid, tols);
    const bool lemma_ok = class_implications_check(cz).ok() && class_implications_check(co).ok();
    tally.record("class_implications", true, lemma_ok, k);

    const bool gen = certify(prob, Notion::Generalized, inst.z, points, tols).certified;
    const bool type1 = certify(prob, Notion::ThetaPseudoQuasi, inst.z, points, tols).certified;
    const bool type2 = certify(prob, Notion::EpsPseudoQuasi, inst.z, points, tols).certified;
    tally.record("generalized_implies_eps", gen, type2, k);

    const bool solution = cz.almost_eps_quasi.holds();
    const std::string why = cz.almost_eps_quasi.reason;
    tally.record("sufficiency_generalized", cert.verdict && gen, solution, k, why);
    tally.record("sufficiency_type1", cert.verdict && type1, solution, k, why);
    tally.record("sufficiency_type2", cert.verdict && type2, solution, k, why);

    if (!cert.verdict) continue;

    const DualConfig capped = DualConfig::make(prob, inst.z, inst.lambda, true, tols);
    const DualConfig open = DualConfig::make(prob, inst.z, inst.lambda, false, tols);
    const bool self_member = in_Omega_D(prob, capped, inst.z, inst.lambda, tols).member &&
                             in_Omega_D(prob, open, inst.z, inst.lambda, tols).member;
    tally.record("anchor_dual_membership", true, self_member, k);

    const DualPoint anchor{inst.z, inst.lambda};
    const auto samples = random_dual_points(d, inst, opts.dual_samples);
    const DualVerdict dv = dual_classify(prob, capped, anchor, samples, tols);
    std::string dual_detail;
    if (dv.witness) dual_detail = "dominated by y=" + std::to_string(dv.witness->y[0]);
    tally.record("eps_duality", gen && dv.samples_feasible > 0, dv.holds, k, dual_detail);

    const ConverseReport cr = converse_duality_check(prob, capped, anchor, points, tols);
    tally.record("converse_duality", cr.convexity_ok && cr.hypothesis_holds, !cr.domination_found, k, cr.status);

    std::vector<Vector> in_s;
    for (const auto& x : points) {
      if (in_S(prob, x, tols.tol_feas)) in_s.push_back(x);
    }
    const auto lambdas = default_lambda_grid(inst.lambda, opts.lambda_steps);
    const SaddleReport sr = check_saddle(prob, inst.z, inst.lambda, lambdas, in_s, tols);
    tally.record("saddle_necessary", gen, sr.holds(), k, sr.cond_i.holds() ? "condition (ii) refuted" : "condition (i) refuted");

    const SaddleImplication si = saddle_implies_solution(prob, inst.z, inst.lambda, lambdas, inst.grid, tols);
    tally.record("saddle_sufficient", si.conclusion_checked, si.almost_eps_quasi, k, si.status);
  }
  return report;
}

}  // namespace robustlu
