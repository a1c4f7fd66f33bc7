#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "robustlu/model.hpp"

namespace robustlu {

/// Problem file that parses as key-value text but does not describe a valid
/// problem. line is 1-based, 0 when no single line is to blame.
class ProblemFormatError : public std::runtime_error {
 public:
  ProblemFormatError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Build a Problem from problem-file text (grammar in docs/problem-format.md).
/// Throws ProblemFormatError, or kvtext::SyntaxError for malformed text.
Problem parse_problem(std::string_view text);

/// Read and parse a problem file. Throws std::runtime_error if unreadable.
Problem load_problem(const std::string& path);

}  // namespace robustlu
