#include "foliate/parser.hpp"

#include <algorithm>
#include <cctype>

namespace foliate {

std::vector<Token> tokenize(const std::string& text, SourceLocation start) {
  std::vector<Token> out;
  SourceLocation loc = start;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.loc = loc;
    std::size_t j = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Token::Kind::Number;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_' || text[j] == '\'')) {
        ++j;
      }
      t.kind = Token::Kind::Ident;
    } else if (std::string("+-*/^(),=[]").find(c) != std::string::npos) {
      j = i + 1;
      t.kind = Token::Kind::Symbol;
    } else {
      throw ParseError(loc, std::string("unexpected character '") + c + "'");
    }
    t.text = text.substr(i, j - i);
    out.push_back(t);
    advance(j - i);
  }
  Token end;
  end.loc = loc;
  out.push_back(end);
  return out;
}

ExprParser::ExprParser(std::vector<Token> tokens, const std::vector<std::string>* allowed)
    : tokens_(std::move(tokens)), allowed_(allowed) {}

const Token& ExprParser::peek(std::size_t ahead) const {
  std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
  return tokens_[k];
}

Token ExprParser::next() {
  Token t = peek();
  if (pos_ < tokens_.size() - 1) ++pos_;
  return t;
}

bool ExprParser::accept(const std::string& symbol) {
  if (peek().kind == Token::Kind::Symbol && peek().text == symbol) {
    next();
    return true;
  }
  return false;
}

void ExprParser::expect(const std::string& symbol) {
  if (!accept(symbol)) {
    std::string got = peek().kind == Token::Kind::End ? "end of input" : "'" + peek().text + "'";
    fail("expected '" + symbol + "', got " + got);
  }
}

void ExprParser::fail(const std::string& message) const { throw ParseError(peek().loc, message); }

Expr ExprParser::parse_expression() {
  Expr e = parse_term();
  while (peek().kind == Token::Kind::Symbol && (peek().text == "+" || peek().text == "-")) {
    bool minus = next().text == "-";
    Expr t = parse_term();
    e = minus ? e - t : e + t;
  }
  return e;
}

Expr ExprParser::parse_term() {
  Expr e = parse_unary();
  for (;;) {
    if (accept("*")) {
      e = e * parse_unary();
    } else if (peek().kind == Token::Kind::Symbol && peek().text == "/") {
      SourceLocation at = peek().loc;
      next();
      Expr d = parse_unary();
      if (d.is_zero()) throw ParseError(at, "division by zero");
      e = e / d;
    } else {
      return e;
    }
  }
}

Expr ExprParser::parse_unary() {
  if (accept("-")) return -parse_unary();
  if (accept("+")) return parse_unary();
  return parse_power();
}

Expr ExprParser::parse_power() {
  Expr base = parse_atom();
  if (peek().kind == Token::Kind::Symbol && peek().text == "^") {
    SourceLocation at = peek().loc;
    next();
    Expr ex = parse_unary();
    if (!ex.is_constant() || !is_integer(ex.value())) throw ParseError(at, "exponent must be an integer");
    if (abs(ex.value()) > 1000) throw ParseError(at, "exponent too large");
    long k = ex.value().get_num().get_si();
    try {
      return pow(base, static_cast<int>(k));
    } catch (const Error&) {
      throw ParseError(at, "division by zero");
    }
  }
  return base;
}

Expr ExprParser::parse_atom() {
  const Token t = peek();
  switch (t.kind) {
    case Token::Kind::Number: {
      next();
      return Expr(parse_rational(t.text));
    }
    case Token::Kind::Ident: {
      next();
      static const std::pair<const char*, Func> funcs[] = {
          {"sqrt", Func::Sqrt}, {"exp", Func::Exp}, {"log", Func::Log}, {"sin", Func::Sin}, {"cos", Func::Cos}};
      for (const auto& [name, f] : funcs) {
        if (t.text == name && peek().kind == Token::Kind::Symbol && peek().text == "(") {
          next();
          Expr arg = parse_expression();
          expect(")");
          try {
            return apply(f, arg);
          } catch (const Error& err) {
            throw ParseError(t.loc, std::string("domain error in ") + name);
          }
        }
      }
      if (allowed_ != nullptr && std::find(allowed_->begin(), allowed_->end(), t.text) == allowed_->end()) {
        throw ParseError(t.loc, "unknown variable '" + t.text + "'");
      }
      return var(t.text);
    }
    case Token::Kind::Symbol:
      if (t.text == "(") {
        next();
        Expr e = parse_expression();
        expect(")");
        return e;
      }
      fail("unexpected '" + t.text + "'");
    case Token::Kind::End: fail("unexpected end of input");
  }
  fail("unexpected token");
}

Expr parse_expr(const std::string& text, const std::vector<std::string>* allowed, SourceLocation start) {
  ExprParser p(tokenize(text, start), allowed);
  Expr e = p.parse_expression();
  if (!p.at_end()) p.fail("unexpected '" + p.peek().text + "'");
  return e;
}

}  // namespace foliate
