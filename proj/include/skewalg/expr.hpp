#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skewalg/poly.hpp"

namespace skewalg {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message)
      : std::runtime_error("line " + std::to_string(pos.line) + ", column " +
                           std::to_string(pos.column) + ": " + message),
        pos_(pos),
        message_(message) {}
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  SourcePos pos_;
  std::string message_;
};

enum class TokenKind { Ident, Integer, Symbol, Arrow, Flag, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
};

// Tokens of one source line; '#' starts a comment. Always ends with End.
std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool peek_symbol(std::string_view s) const;
  bool accept_symbol(std::string_view s);
  bool accept_ident(std::string_view s);
  const Token& expect_symbol(std::string_view s);
  const Token& expect_ident(const std::string& what);
  const Token& expect_integer(const std::string& what);
  void expect_end();

 private:
  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Pow };
  Kind kind;
  SourcePos pos;
  Scalar value;            // Number
  std::string name;        // Ident
  std::uint32_t exponent = 0;  // Pow
  std::vector<ExprPtr> args;
};

// expr := term (('+'|'-') term)*; term := unary ('*' unary)*;
// unary := '-' unary | power; power := atom ('^' INT)?;
// atom := INT ('/' INT)? | IDENT | '(' expr ')'
ExprPtr parse_expr(TokenStream& ts);

// Identifier nodes in source order.
void collect_identifiers(const ExprPtr& e, std::vector<const Expr*>& out);

template <class V>
struct ExprAlgebra {
  std::function<V(const Scalar&)> number;
  std::function<V(const Expr&)> ident;
  std::function<V(const V&, const V&)> add;
  std::function<V(const V&, const V&)> sub;
  std::function<V(const V&, const V&)> mul;
  std::function<V(const V&)> neg;
};

template <class V>
V evaluate(const ExprPtr& e, const ExprAlgebra<V>& alg) {
  switch (e->kind) {
    case Expr::Kind::Number: return alg.number(e->value);
    case Expr::Kind::Ident: return alg.ident(*e);
    case Expr::Kind::Neg: return alg.neg(evaluate(e->args[0], alg));
    case Expr::Kind::Add: return alg.add(evaluate(e->args[0], alg), evaluate(e->args[1], alg));
    case Expr::Kind::Sub: return alg.sub(evaluate(e->args[0], alg), evaluate(e->args[1], alg));
    case Expr::Kind::Mul: return alg.mul(evaluate(e->args[0], alg), evaluate(e->args[1], alg));
    case Expr::Kind::Pow: {
      V base = evaluate(e->args[0], alg);
      V acc = alg.number(Scalar(1));
      for (std::uint32_t k = e->exponent; k > 0; k >>= 1) {
        if (k & 1) acc = alg.mul(acc, base);
        if (k > 1) base = alg.mul(base, base);
      }
      return acc;
    }
  }
  throw std::logic_error("unknown expression node");
}

// Parses a whole polynomial over ctx; unknown names are parse errors.
Poly parse_polynomial(std::string_view text, const VarContext& ctx);

}  // namespace skewalg
