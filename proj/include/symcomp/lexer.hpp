#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "symcomp/error.hpp"

namespace symcomp {

struct Token {
  enum class Kind { Ident, Number, String, Quoted, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

/// Shared tokenizer for the textual formats (terms, BIR, processes, traces).
/// `//` and `#` start line comments. Multi-character punctuation is matched
/// greedily from a small fixed table.
class Lexer {
 public:
  explicit Lexer(std::string_view src) { tokenize(src); }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  Token next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }

  bool is(std::string_view punct_or_ident) const {
    const auto& t = peek();
    return (t.kind == Token::Kind::Punct || t.kind == Token::Kind::Ident) && t.text == punct_or_ident;
  }
  bool accept(std::string_view p) {
    if (is(p)) {
      next();
      return true;
    }
    return false;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "'");
  }
  std::string expect_ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected identifier");
    return next().text;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = peek();
    std::string got = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
    throw Error(ErrorKind::ParseError,
                std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg + ", got " + got);
  }

 private:
  void tokenize(std::string_view s) {
    static constexpr std::string_view multi[] = {"++", "->", "==", "<-", "<=", ">="};
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n && i < s.size(); ++k, ++i) {
        if (s[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
    };
    while (i < s.size()) {
      char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
        continue;
      }
      if (c == '#' || (c == '/' && i + 1 < s.size() && s[i + 1] == '/')) {
        while (i < s.size() && s[i] != '\n') advance(1);
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
          ++j;
        t.kind = Token::Kind::Ident;
        t.text = std::string(s.substr(i, j - i));
        advance(j - i);
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        if (c == '0' && i + 1 < s.size() && (s[i + 1] == 'x' || s[i + 1] == 'X')) {
          j = i + 2;
          while (j < s.size() && std::isxdigit(static_cast<unsigned char>(s[j]))) ++j;
        } else {
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        }
        t.kind = Token::Kind::Number;
        t.text = std::string(s.substr(i, j - i));
        advance(j - i);
      } else if (c == '"' || c == '\'') {
        std::size_t j = i + 1;
        while (j < s.size() && s[j] != c && s[j] != '\n') ++j;
        if (j >= s.size() || s[j] != c)
          throw Error(ErrorKind::ParseError,
                      std::to_string(line) + ":" + std::to_string(col) + ": unterminated literal");
        t.kind = c == '"' ? Token::Kind::String : Token::Kind::Quoted;
        t.text = std::string(s.substr(i + 1, j - i - 1));
        advance(j - i + 1);
      } else {
        t.kind = Token::Kind::Punct;
        t.text = std::string(1, c);
        for (auto m : multi) {
          if (s.substr(i, m.size()) == m) {
            t.text = std::string(m);
            break;
          }
        }
        advance(t.text.size());
      }
      toks_.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.col = col;
    toks_.push_back(end);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace symcomp
