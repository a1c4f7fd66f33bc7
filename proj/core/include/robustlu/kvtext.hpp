#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace robustlu::kvtext {

/// Malformed input; line is 1-based.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct Value;
using Entry = std::pair<std::string, Value>;

/// Number, string, boolean, array or inline table.
struct Value {
  enum class Kind { Number, String, Bool, Array, Table };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;
  bool flag = false;
  std::vector<Value> items;
  std::vector<Entry> entries;
  int line = 0;

  const Value* find(std::string_view key) const;
};

/// One [name] or [[name]] block with its key = value entries in file order.
struct Section {
  std::string name;
  bool is_array = false;
  std::vector<Entry> entries;
  int line = 0;

  const Value* find(std::string_view key) const;
};

/// The subset of TOML used by problem files: [tables], [[arrays of tables]],
/// bare keys, numbers, double-quoted strings, booleans, arrays (which may span
/// lines) and inline tables. Entries before the first header land in an
/// unnamed section.
std::vector<Section> parse(std::string_view text);

}  // namespace robustlu::kvtext
