#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robustlu/classify.hpp"
#include "robustlu/convexity.hpp"
#include "robustlu/kkt.hpp"
#include "robustlu/penalty.hpp"
#include "robustlu/properties.hpp"
#include "robustlu/saddle.hpp"
#include "robustlu/wolfe.hpp"

namespace robustlu {

/// Ordered key/value report. Keys are stable; values are preformatted.
class Report {
 public:
  void add(std::string key, std::string value);
  void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
  void add(std::string key, double value);
  void add(std::string key, bool value);
  void add(std::string key, std::size_t value);
  void add(std::string key, const Vector& value);
  void add(std::string key, const std::vector<Bounds>& value);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  /// Value of key, or nullptr.
  const std::string* find(std::string_view key) const;

  /// key=value, one per line.
  std::string kv() const;
  /// Keys padded into a column, one per line.
  std::string text() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// [lo,hi];[lo,hi]
std::string format_bounds(const std::vector<Bounds>& v);

void append(Report& r, const Classification& c);
void append(Report& r, const KktCertificate& c);
void append(Report& r, const PenaltyRun& run);
void append(Report& r, const ConvexityVerdict& v);
void append(Report& r, const DualVerdict& v);
void append(Report& r, const DualMembership& m);
void append(Report& r, const SaddleReport& s);
void append(Report& r, const HarnessReport& h);

}  // namespace robustlu
