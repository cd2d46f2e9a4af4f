#pragma once

#include <string>
#include <vector>

#include "foliate/error.hpp"
#include "foliate/expr.hpp"

namespace foliate {

struct SourceLocation {
  int line = 1;
  int column = 1;
};

class ParseError : public Error {
 public:
  ParseError(const SourceLocation& loc, const std::string& message)
      : Error("parse", std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
        location_(loc) {}

  const SourceLocation& location() const noexcept { return location_; }

 private:
  SourceLocation location_;
};

struct Token {
  enum class Kind { Number, Ident, Symbol, End };
  Kind kind = Kind::End;
  std::string text;
  SourceLocation loc;
};

std::vector<Token> tokenize(const std::string& text, SourceLocation start = {});

// Recursive-descent parser over a token stream. The form and DSL parsers
// drive it directly so they can interleave their own syntax.
class ExprParser {
 public:
  explicit ExprParser(std::vector<Token> tokens, const std::vector<std::string>* allowed = nullptr);

  Expr parse_expression();
  Expr parse_term();
  Expr parse_unary();
  const Token& peek(std::size_t ahead = 0) const;
  Token next();
  bool accept(const std::string& symbol);
  void expect(const std::string& symbol);
  bool at_end() const { return peek().kind == Token::Kind::End; }
  [[noreturn]] void fail(const std::string& message) const;

 private:
  Expr parse_power();
  Expr parse_atom();

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const std::vector<std::string>* allowed_;
};

// Parses a complete expression. When `allowed` is given, every identifier
// must name one of those variables.
Expr parse_expr(const std::string& text, const std::vector<std::string>* allowed = nullptr,
                SourceLocation start = {});

}  // namespace foliate
