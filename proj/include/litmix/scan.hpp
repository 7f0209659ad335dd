#pragma once

#include <cctype>
#include <string>

#include "common.hpp"

namespace litmix::detail {

// Minimal cursor over the input text with line/column tracking.
class Scanner {
 public:
  explicit Scanner(std::string text) : text_(std::move(text)) {}

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return eof() ? '\0' : text_[pos_]; }

  char get() {
    char c = peek();
    ++pos_;
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_ws(bool newlines = true) {
    while (!eof()) {
      char c = peek();
      if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (!eof() && peek() != '\n') get();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || (newlines && c == '\n')) {
        get();
        continue;
      }
      break;
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, col_, msg);
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }

  bool accept(char c) {
    skip_ws();
    if (peek() != c) return false;
    get();
    return true;
  }

  bool accept_word(const std::string& w) {
    skip_ws();
    std::size_t save_pos = pos_;
    int save_line = line_, save_col = col_;
    for (char c : w) {
      if (eof() || get() != c) {
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
        return false;
      }
    }
    // must not continue into a longer identifier
    if (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
      pos_ = save_pos;
      line_ = save_line;
      col_ = save_col;
      return false;
    }
    return true;
  }

  std::string ident() {
    skip_ws();
    std::string s;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.' || c == '+') {
        s.push_back(get());
      } else {
        break;
      }
    }
    if (s.empty()) fail("expected identifier");
    return s;
  }

  Value integer() {
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected integer");
    Value v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + static_cast<unsigned>(get() - '0');
    return v;
  }

  int small_int() { return static_cast<int>(integer()); }

  // Rest of the current line, trimmed.
  std::string line_rest() {
    std::string s;
    while (!eof() && peek() != '\n') s.push_back(get());
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
  }

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  std::string text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace litmix::detail
