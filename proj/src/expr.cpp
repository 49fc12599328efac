#include "skewalg/expr.hpp"

#include <cctype>

namespace skewalg {

std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto pos = [&](std::size_t at) { return SourcePos{line_no, at + 1}; };
  while (i < line.size()) {
    const char c = line[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
        ++i;
      out.push_back({TokenKind::Ident, std::string(line.substr(start, i - start)), pos(start)});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
      out.push_back({TokenKind::Integer, std::string(line.substr(start, i - start)), pos(start)});
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      i += 2;
      out.push_back({TokenKind::Arrow, "->", pos(start)});
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '-') {
      i += 2;
      std::size_t name_start = i;
      while (i < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[i])) || line[i] == '_'))
        ++i;
      if (i == name_start) throw ParseError(pos(start), "expected an option name after '--'");
      out.push_back({TokenKind::Flag, std::string(line.substr(name_start, i - name_start)),
                     pos(start)});
    } else if (std::string_view("+-*^/()[],;:=").find(c) != std::string_view::npos) {
      ++i;
      out.push_back({TokenKind::Symbol, std::string(1, c), pos(start)});
    } else {
      throw ParseError(pos(start), std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({TokenKind::End, "", pos(line.size())});
  return out;
}

// ------------------------------------------------------------- TokenStream

const Token& TokenStream::peek(std::size_t ahead) const {
  return tokens_[std::min(idx_ + ahead, tokens_.size() - 1)];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (idx_ + 1 < tokens_.size()) ++idx_;
  return t;
}

bool TokenStream::peek_symbol(std::string_view s) const {
  return peek().kind == TokenKind::Symbol && peek().text == s;
}

bool TokenStream::accept_symbol(std::string_view s) {
  if (!peek_symbol(s)) return false;
  next();
  return true;
}

bool TokenStream::accept_ident(std::string_view s) {
  if (peek().kind != TokenKind::Ident || peek().text != s) return false;
  next();
  return true;
}

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::End: return "end of line";
    case TokenKind::Flag: return "'--" + t.text + "'";
    default: return "'" + t.text + "'";
  }
}

}  // namespace

const Token& TokenStream::expect_symbol(std::string_view s) {
  if (!peek_symbol(s))
    throw ParseError(peek().pos, "expected '" + std::string(s) + "' but found " + describe(peek()));
  return next();
}

const Token& TokenStream::expect_ident(const std::string& what) {
  if (peek().kind != TokenKind::Ident)
    throw ParseError(peek().pos, "expected " + what + " but found " + describe(peek()));
  return next();
}

const Token& TokenStream::expect_integer(const std::string& what) {
  if (peek().kind != TokenKind::Integer)
    throw ParseError(peek().pos, "expected " + what + " but found " + describe(peek()));
  return next();
}

void TokenStream::expect_end() {
  if (!at_end()) throw ParseError(peek().pos, "unexpected " + describe(peek()));
}

// ------------------------------------------------------------------ parser

namespace {

ExprPtr make(Expr::Kind kind, SourcePos pos, std::vector<ExprPtr> args = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->pos = pos;
  e->args = std::move(args);
  return e;
}

ExprPtr parse_atom(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == TokenKind::Integer) {
    ts.next();
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Number;
    e->pos = t.pos;
    mpz_class num(t.text), den(1);
    if (ts.peek_symbol("/")) {
      ts.next();
      const Token& d = ts.expect_integer("a denominator");
      den = mpz_class(d.text);
      if (den == 0) throw ParseError(d.pos, "zero denominator");
    }
    e->value = Scalar(num, den);
    e->value.canonicalize();
    return e;
  }
  if (t.kind == TokenKind::Ident) {
    ts.next();
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Ident;
    e->pos = t.pos;
    e->name = t.text;
    return e;
  }
  if (ts.peek_symbol("(")) {
    ts.next();
    ExprPtr inner = parse_expr(ts);
    ts.expect_symbol(")");
    return inner;
  }
  throw ParseError(t.pos, "expected a number, a name or '(' but found " + describe(t));
}

ExprPtr parse_power(TokenStream& ts) {
  ExprPtr base = parse_atom(ts);
  if (!ts.peek_symbol("^")) return base;
  const SourcePos at = ts.next().pos;
  const Token& n = ts.expect_integer("an exponent");
  if (n.text.size() > 9) throw ParseError(n.pos, "exponent too large");
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Pow;
  e->pos = at;
  e->exponent = static_cast<std::uint32_t>(std::stoul(n.text));
  e->args = {base};
  if (ts.peek_symbol("^")) throw ParseError(ts.peek().pos, "chained '^' needs parentheses");
  return e;
}

ExprPtr parse_unary(TokenStream& ts) {
  if (ts.peek_symbol("-")) {
    const SourcePos at = ts.next().pos;
    return make(Expr::Kind::Neg, at, {parse_unary(ts)});
  }
  return parse_power(ts);
}

ExprPtr parse_term(TokenStream& ts) {
  ExprPtr lhs = parse_unary(ts);
  while (ts.peek_symbol("*")) {
    const SourcePos at = ts.next().pos;
    lhs = make(Expr::Kind::Mul, at, {lhs, parse_unary(ts)});
  }
  return lhs;
}

}  // namespace

ExprPtr parse_expr(TokenStream& ts) {
  ExprPtr lhs = parse_term(ts);
  while (ts.peek_symbol("+") || ts.peek_symbol("-")) {
    const Token& op = ts.next();
    const Expr::Kind kind = op.text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
    lhs = make(kind, op.pos, {lhs, parse_term(ts)});
  }
  return lhs;
}

void collect_identifiers(const ExprPtr& e, std::vector<const Expr*>& out) {
  if (e->kind == Expr::Kind::Ident) out.push_back(e.get());
  for (const auto& a : e->args) collect_identifiers(a, out);
}

Poly parse_polynomial(std::string_view text, const VarContext& ctx) {
  TokenStream ts(tokenize_line(text, 1));
  ExprPtr e = parse_expr(ts);
  ts.expect_end();
  ExprAlgebra<Poly> alg{
      [&](const Scalar& c) { return Poly::constant(ctx, c); },
      [&](const Expr& id) {
        auto idx = ctx.index_of(id.name);
        if (!idx) throw ParseError(id.pos, "unknown identifier '" + id.name + "'");
        return Poly::variable(ctx, *idx);
      },
      [](const Poly& a, const Poly& b) { return a + b; },
      [](const Poly& a, const Poly& b) { return a - b; },
      [](const Poly& a, const Poly& b) { return a * b; },
      [](const Poly& a) { return -a; },
  };
  return evaluate(e, alg);
}

}  // namespace skewalg
