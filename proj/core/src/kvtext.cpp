#include "robustlu/kvtext.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace robustlu::kvtext {

namespace {

const Value* find_entry(const std::vector<Entry>& entries, std::string_view key) {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

bool is_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  std::vector<Section> run() {
    std::vector<Section> out;
    out.push_back(Section{"", false, {}, 1});
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        out.push_back(read_header());
      } else {
        Entry e = read_entry();
        if (find_entry(out.back().entries, e.first) != nullptr) {
          fail("duplicate key '" + e.first + "'");
        }
        out.back().entries.push_back(std::move(e));
      }
      end_of_line();
    }
    if (out.front().entries.empty()) out.erase(out.begin());
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(what, line_); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  void advance() {
    if (s_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }

  void skip_comment() {
    if (!at_end() && peek() == '#') {
      while (!at_end() && peek() != '\n') advance();
    }
  }

  // Whitespace, comments and newlines; used inside brackets and between lines.
  void skip_blank_lines() {
    while (true) {
      skip_spaces();
      skip_comment();
      if (!at_end() && peek() == '\n') {
        advance();
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (at_end()) return;
    if (peek() != '\n') fail(std::string("unexpected '") + peek() + "' after value");
    advance();
  }

  std::string read_key() {
    skip_spaces();
    const std::size_t start = pos_;
    while (!at_end() && is_key_char(peek())) advance();
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  Section read_header() {
    Section sec;
    sec.line = line_;
    advance();
    if (!at_end() && peek() == '[') {
      sec.is_array = true;
      advance();
    }
    sec.name = read_key();
    skip_spaces();
    for (int k = 0; k < (sec.is_array ? 2 : 1); ++k) {
      if (at_end() || peek() != ']') fail("unterminated section header");
      advance();
    }
    return sec;
  }

  Entry read_entry() {
    std::string key = read_key();
    skip_spaces();
    if (at_end() || peek() != '=') fail("expected '=' after key '" + key + "'");
    advance();
    skip_spaces();
    return {std::move(key), read_value()};
  }

  Value read_value() {
    if (at_end()) fail("missing value");
    Value v;
    v.line = line_;
    const char c = peek();
    if (c == '[') {
      v.kind = Value::Kind::Array;
      advance();
      while (true) {
        skip_blank_lines();
        if (at_end()) fail("unterminated array");
        if (peek() == ']') {
          advance();
          break;
        }
        v.items.push_back(read_value());
        skip_blank_lines();
        if (!at_end() && peek() == ',') {
          advance();
        } else if (at_end() || peek() != ']') {
          fail("expected ',' or ']' in array");
        }
      }
      return v;
    }
    if (c == '{') {
      v.kind = Value::Kind::Table;
      advance();
      while (true) {
        skip_blank_lines();
        if (at_end()) fail("unterminated inline table");
        if (peek() == '}') {
          advance();
          break;
        }
        Entry e = read_entry();
        if (find_entry(v.entries, e.first) != nullptr) fail("duplicate key '" + e.first + "'");
        v.entries.push_back(std::move(e));
        skip_blank_lines();
        if (!at_end() && peek() == ',') {
          advance();
        } else if (at_end() || peek() != '}') {
          fail("expected ',' or '}' in inline table");
        }
      }
      return v;
    }
    if (c == '"') {
      v.kind = Value::Kind::String;
      advance();
      while (true) {
        if (at_end() || peek() == '\n') fail("unterminated string");
        char ch = peek();
        advance();
        if (ch == '"') break;
        if (ch == '\\') {
          if (at_end()) fail("unterminated string");
          const char esc = peek();
          advance();
          switch (esc) {
            case '"':
            case '\\':
              ch = esc;
              break;
            case 'n':
              ch = '\n';
              break;
            case 't':
              ch = '\t';
              break;
            default:
              fail(std::string("unsupported escape '\\") + esc + "'");
          }
        }
        v.text.push_back(ch);
      }
      return v;
    }
    const std::size_t start = pos_;
    while (!at_end() && (is_key_char(peek()) || peek() == '.' || peek() == '+')) advance();
    const std::string_view word = s_.substr(start, pos_ - start);
    if (word == "true" || word == "false") {
      v.kind = Value::Kind::Bool;
      v.flag = word == "true";
      return v;
    }
    if (word.empty()) fail(std::string("unexpected '") + c + "'");
    std::string_view digits = word;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    double x = 0.0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), x);
    if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() || !std::isfinite(x)) {
      fail("malformed number '" + std::string(word) + "'");
    }
    v.kind = Value::Kind::Number;
    v.number = x;
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

const Value* Value::find(std::string_view key) const { return find_entry(entries, key); }
const Value* Section::find(std::string_view key) const { return find_entry(entries, key); }

std::vector<Section> parse(std::string_view text) { return Reader(text).run(); }

}  // namespace robustlu::kvtext
