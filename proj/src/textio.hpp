#pragma once

// Line-oriented parsing helpers shared by the text formats.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kronrank/error.hpp"

namespace kronrank::textio {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next line without its newline, or nullopt at end of input.
  std::optional<std::string_view> next() {
    if (!std::getline(in_, line_)) return std::nullopt;
    ++number_;
    for (std::size_t i = 0; i < line_.size(); ++i) {
      if (line_[i] == '\r') fail(i + 1, "carriage return not allowed");
    }
    if (!line_.empty() && (line_.back() == ' ' || line_.back() == '\t')) fail(line_.size(), "trailing whitespace");
    return std::string_view(line_);
  }

  std::string_view expect(const char* what) {
    auto l = next();
    if (!l) throw ParseError(number_ + 1, 1, std::string("unexpected end of input, expected ") + what);
    return *l;
  }

  void expect_end() {
    while (auto l = next()) {
      if (!l->empty()) fail(1, "unexpected trailing content");
    }
  }

  std::size_t line_number() const noexcept { return number_; }

  [[noreturn]] void fail(std::size_t column, const std::string& what) const { throw ParseError(number_, column, what); }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t number_ = 0;
};

// Splits on single spaces; rejects empty fields (double spaces, leading space).
inline std::vector<Token> split_spaces(const LineReader& r, std::string_view line) {
  std::vector<Token> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ' ') {
      if (i == start) r.fail(i + 1, "empty field");
      out.push_back({line.substr(start, i - start), start + 1});
      start = i + 1;
    }
  }
  return out;
}

inline std::uint64_t parse_uint(const LineReader& r, Token t) {
  std::uint64_t v = 0;
  const char* b = t.text.data();
  const char* e = b + t.text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || t.text.empty()) r.fail(t.column, "expected a non-negative integer, got '" + std::string(t.text) + "'");
  if (t.text.size() > 1 && t.text[0] == '0') r.fail(t.column, "leading zeros not allowed");
  return v;
}

// "i1,i2,...". An empty token yields an empty list when allow_empty.
inline std::vector<std::uint64_t> parse_index_list(const LineReader& r, Token t, bool allow_empty) {
  std::vector<std::uint64_t> out;
  if (t.text.empty()) {
    if (!allow_empty) r.fail(t.column, "empty index list");
    return out;
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i <= t.text.size(); ++i) {
    if (i == t.text.size() || t.text[i] == ',') {
      out.push_back(parse_uint(r, {t.text.substr(start, i - start), t.column + start}));
      start = i + 1;
    }
  }
  return out;
}

inline void expect_keyword(const LineReader& r, Token t, std::string_view kw) {
  if (t.text != kw) r.fail(t.column, "expected '" + std::string(kw) + "', got '" + std::string(t.text) + "'");
}

template <typename Range>
std::string join_indices(const Range& xs) {
  std::string s;
  bool first = true;
  for (auto x : xs) {
    if (!first) s += ',';
    s += std::to_string(x);
    first = false;
  }
  return s;
}

}  // namespace kronrank::textio
