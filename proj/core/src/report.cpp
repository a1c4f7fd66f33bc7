#include "robustlu/report.hpp"

#include <algorithm>

#include "robustlu/format.hpp"

namespace robustlu {

void Report::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
void Report::add(std::string key, double value) { add(std::move(key), format_number(value)); }
void Report::add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }
void Report::add(std::string key, std::size_t value) { add(std::move(key), std::to_string(value)); }
void Report::add(std::string key, const Vector& value) { add(std::move(key), format_vector(value)); }
void Report::add(std::string key, const std::vector<Bounds>& value) { add(std::move(key), format_bounds(value)); }

const std::string* Report::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string Report::kv() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

std::string Report::text() const {
  std::size_t width = 0;
  for (const auto& e : entries_) width = std::max(width, e.first.size());
  std::string out;
  for (const auto& [k, v] : entries_) out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
  return out;
}

std::string format_bounds(const std::vector<Bounds>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ';';
    out += "[" + format_number(v[i].lo) + "," + format_number(v[i].hi) + "]";
  }
  return out;
}

namespace {

void add_points(Report& r, const std::string& key, const std::vector<Vector>& pts) {
  if (pts.empty()) return;
  std::string out;
  for (const auto& p : pts) out += (out.empty() ? "" : ";") + format_vector(p);
  r.add(key, out);
}

void add_flag(Report& r, const std::string& name, const Flag& f) {
  r.add(name, std::string(to_string(f.verdict)));
  if (f.witness) r.add(name + ".witness", *f.witness);
  if (!f.holds() && !f.reason.empty()) r.add(name + ".reason", f.reason);
}

}  // namespace

void append(Report& r, const Classification& c) {
  r.add("grid", c.grid);
  r.add("grid_points", c.grid_points);
  r.add("feasible_points", c.feasible_points);
  r.add("z_in_Omega", c.z_in_Omega);
  r.add("z_in_Omega_E", c.z_in_Omega_E);
  for (const auto& [name, flag] : c.flags()) add_flag(r, std::string(name), *flag);
}

void append(Report& r, const KktCertificate& c) {
  r.add("verdict", c.verdict);
  r.add("reason", c.reason);
  r.add("in_Omega_E", c.in_Omega_E);
  r.add("inclusion_residual", c.inclusion_residual);
  r.add("allowance", c.allowance);
  r.add("surrogate_exact", c.surrogate_exact);
  for (std::size_t j = 0; j < c.signs.size(); ++j) {
    const std::string key = "constraint." + std::to_string(j + 1);
    r.add(key + ".g", c.signs[j].g);
    r.add(key + ".lambda", c.signs[j].lambda);
    r.add(key + ".region", std::string(to_string(c.signs[j].region)));
    r.add(key + ".sign_ok", c.signs[j].ok);
  }
}

void append(Report& r, const PenaltyRun& run) {
  r.add("success", run.success);
  r.add("message", run.message);
  r.add("feasibility_reached", run.feasibility_reached);
  r.add("bounded_below_warning", run.bounded_below_warning);
  r.add("z", run.z);
  r.add("lambda", run.lambda);
  r.add("r", run.r);
  r.add("outer_iterations", run.history.size());
  for (std::size_t k = 0; k < run.history.size(); ++k) {
    const std::string key = "step." + std::to_string(k + 1);
    r.add(key + ".r", run.history[k].r);
    r.add(key + ".g_plus", run.history[k].g_plus);
    r.add(key + ".stationarity", run.history[k].stationarity);
  }
  r.add("kkt.verdict", run.kkt.verdict);
  r.add("kkt.inclusion_residual", run.kkt.inclusion_residual);
}

void append(Report& r, const ConvexityVerdict& v) {
  r.add("notion", std::string(to_string(v.notion)));
  r.add("verdict", std::string(v.certified ? "certified-on-samples" : "counterexample"));
  r.add("samples_checked", v.samples_checked);
  r.add("samples_skipped", v.samples_skipped);
  r.add("systems_checked", v.systems_checked);
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    r.add("counterexample.x", c.x);
    r.add("counterexample.violation", c.violation);
    std::string rows;
    for (const auto& s : c.failing_rows) rows += (rows.empty() ? "" : ";") + s;
    r.add("counterexample.failing_rows", rows);
  }
}

void append(Report& r, const DualVerdict& v) {
  r.add("verdict", std::string(v.holds ? "holds-on-samples" : "refuted"));
  r.add("reason", v.reason);
  r.add("samples_checked", v.samples_checked);
  r.add("samples_feasible", v.samples_feasible);
  if (v.witness) {
    r.add("witness.y", v.witness->y);
    r.add("witness.lambda", v.witness->lambda);
  }
}

void append(Report& r, const DualMembership& m) {
  r.add("member", m.member);
  r.add("reason", m.reason);
  r.add("inclusion_residual", m.inclusion_residual);
  r.add("allowance", m.allowance);
  r.add("cap_ok", m.cap_ok);
}

void append(Report& r, const SaddleReport& s) {
  r.add("cond_i", std::string(to_string(s.cond_i.verdict)));
  if (s.cond_i.witness) r.add("cond_i.witness", *s.cond_i.witness);
  r.add("cond_i.checked", s.cond_i.checked);
  r.add("cond_i.refuting", s.cond_i.witnesses.size());
  add_points(r, "cond_i.witnesses", s.cond_i.witnesses);
  r.add("cond_ii", std::string(to_string(s.cond_ii.verdict)));
  if (s.cond_ii.witness) r.add("cond_ii.witness", *s.cond_ii.witness);
  r.add("cond_ii.checked", s.cond_ii.checked);
  r.add("cond_ii.refuting", s.cond_ii.witnesses.size());
  add_points(r, "cond_ii.witnesses", s.cond_ii.witnesses);
  r.add("lambda_grid.lo", s.lambda_lo);
  r.add("lambda_grid.hi", s.lambda_hi);
  r.add("x_grid.lo", s.x_lo);
  r.add("x_grid.hi", s.x_hi);
  r.add("saddle_point", std::string(s.holds() ? "holds-on-grid" : "refuted"));
}

void append(Report& r, const HarnessReport& h) {
  r.add("instances", h.instances);
  for (const auto& s : h.properties) {
    r.add(s.name + ".checked", s.checked);
    r.add(s.name + ".vacuous", s.vacuous);
    r.add(s.name + ".violations", s.violations);
    if (!s.first_violation.empty()) r.add(s.name + ".first_violation", s.first_violation);
  }
  r.add("result", std::string(h.ok() ? "pass" : "fail"));
}

}  // namespace robustlu
