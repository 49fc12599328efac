#include "skewalg/session.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <sstream>

namespace skewalg {

using nlohmann::json;

// ================================================================ parsing

namespace {

void expect_keyword(TokenStream& ts, std::string_view kw) {
  const Token& t = ts.peek();
  if (t.kind != TokenKind::Ident || t.text != kw)
    throw ParseError(t.pos, "expected '" + std::string(kw) + "'");
  ts.next();
}

FieldSpec parse_field(TokenStream& ts) {
  const Token& t = ts.expect_ident("a field (QQ or GF(p))");
  if (t.text == "QQ") return FieldSpec::rationals();
  if (t.text == "GF") {
    ts.expect_symbol("(");
    const Token& p = ts.expect_integer("a prime");
    ts.expect_symbol(")");
    if (p.text.size() > 10) throw ParseError(p.pos, "modulus too large");
    const std::uint64_t v = std::stoull(p.text);
    if (!is_prime(v) || v >= (1ULL << 31))
      throw ParseError(p.pos, p.text + " is not a supported prime modulus");
    return FieldSpec::prime(v);
  }
  throw ParseError(t.pos, "unknown field '" + t.text + "'");
}

std::vector<ExprPtr> parse_expr_list(TokenStream& ts) {
  std::vector<ExprPtr> out;
  do {
    out.push_back(parse_expr(ts));
  } while (ts.accept_symbol(","));
  return out;
}

std::vector<std::pair<Token, ExprPtr>> parse_maps(TokenStream& ts) {
  std::vector<std::pair<Token, ExprPtr>> out;
  if (ts.at_end()) return out;
  do {
    Token var = ts.expect_ident("a variable");
    if (ts.peek().kind != TokenKind::Arrow) throw ParseError(ts.peek().pos, "expected '->'");
    ts.next();
    out.emplace_back(std::move(var), parse_expr(ts));
  } while (ts.accept_symbol(","));
  return out;
}

// Names up to ':' or the end of the line.
std::vector<Token> parse_names(TokenStream& ts) {
  std::vector<Token> out;
  while (ts.peek().kind == TokenKind::Ident) out.push_back(ts.next());
  return out;
}

void require_count(const Statement& s, std::size_t got, std::size_t lo, std::size_t hi,
                   const std::string& what) {
  if (got >= lo && got <= hi) return;
  std::string want = lo == hi ? std::to_string(lo)
                     : hi == SIZE_MAX ? "at least " + std::to_string(lo)
                                      : std::to_string(lo) + " to " + std::to_string(hi);
  throw ParseError(s.pos, "'" + s.command + "' expects " + want + " " + what + ", got " +
                              std::to_string(got));
}

std::uint64_t parse_count(const Token& t) {
  if (t.text.size() > 9) throw ParseError(t.pos, "number too large");
  return std::stoull(t.text);
}

Statement parse_statement(TokenStream& ts) {
  const Token kw = ts.expect_ident("a command");
  Statement s;
  s.pos = kw.pos;
  s.command = kw.text;
  const std::string& k = kw.text;

  if (k == "ring") {
    s.name = ts.expect_ident("a ring name");
    ts.expect_symbol("=");
    s.field = parse_field(ts);
    ts.expect_symbol("[");
    do {
      s.fresh.push_back(ts.expect_ident("a variable name"));
    } while (ts.accept_symbol(","));
    ts.expect_symbol("]");
  } else if (k == "ideal") {
    s.name = ts.expect_ident("an ideal name");
    expect_keyword(ts, "in");
    s.refs.push_back(ts.expect_ident("a ring"));
    ts.expect_symbol(":");
    s.exprs = parse_expr_list(ts);
  } else if (k == "quotient") {
    s.name = ts.expect_ident("a ring name");
    ts.expect_symbol("=");
    s.refs.push_back(ts.expect_ident("a ring"));
    ts.expect_symbol("/");
    s.refs.push_back(ts.expect_ident("an ideal"));
  } else if (k == "der" || k == "endo") {
    s.name = ts.expect_ident(k == "der" ? "a derivation name" : "an endomorphism name");
    expect_keyword(ts, "on");
    s.refs.push_back(ts.expect_ident("a ring"));
    ts.expect_symbol(":");
    s.maps = parse_maps(ts);
  } else if (k == "skewder") {
    s.name = ts.expect_ident("a skew derivation name");
    expect_keyword(ts, "on");
    s.refs.push_back(ts.expect_ident("a ring"));
    ts.expect_symbol(":");
    s.refs.push_back(ts.expect_ident("an endomorphism"));
    ts.expect_symbol(",");
    s.exprs.push_back(parse_expr(ts));
  } else if (k == "skew") {
    s.name = ts.expect_ident("a ring name");
    ts.expect_symbol("=");
    s.refs.push_back(ts.expect_ident("a base ring"));
    if (!ts.peek_symbol("[")) throw ParseError(ts.peek().pos, "expected '[' and a skew variable");
    while (ts.accept_symbol("[")) {
      s.fresh.push_back(ts.expect_ident("a skew variable name"));
      ts.expect_symbol(";");
      s.refs.push_back(ts.expect_ident("a derivation"));
      ts.expect_symbol("]");
    }
  } else if (k == "ore") {
    s.name = ts.expect_ident("a ring name");
    ts.expect_symbol("=");
    s.refs.push_back(ts.expect_ident("a base ring"));
    ts.expect_symbol("[");
    s.fresh.push_back(ts.expect_ident("a skew variable name"));
    ts.expect_symbol(";");
    s.refs.push_back(ts.expect_ident("an endomorphism"));
    if (ts.accept_symbol(",")) s.refs.push_back(ts.expect_ident("a derivation"));
    ts.expect_symbol("]");
  } else if (k == "weyl") {
    s.number = parse_count(ts.expect_integer("the number of variable pairs"));
  } else if (k == "use") {
    s.refs.push_back(ts.expect_ident("a ring"));
  } else if (k == "let") {
    s.name = ts.expect_ident("a name");
    ts.expect_symbol("=");
    s.exprs.push_back(parse_expr(ts));
  } else if (k == "gb" || k == "dim") {
    if (ts.accept_symbol("(")) {
      s.exprs = parse_expr_list(ts);
      ts.expect_symbol(")");
    } else {
      s.refs = parse_names(ts);
      require_count(s, s.refs.size(), 1, 1, k == "gb" ? "ideal" : "ideal or ring");
    }
  } else if (k == "member" || k == "reduce" || k == "apply") {
    s.refs = parse_names(ts);
    require_count(s, s.refs.size(), 1, 1, "name before ':'");
    ts.expect_symbol(":");
    s.exprs.push_back(parse_expr(ts));
  } else if (k == "commutator") {
    s.refs = parse_names(ts);
    require_count(s, s.refs.size(), 2, 2, "derivations");
  } else if (k == "mul" || k == "inner" || k == "certificate") {
    s.exprs.push_back(parse_expr(ts));
  } else if (k == "residuals") {
    s.exprs.push_back(parse_expr(ts));
    ts.expect_symbol(":");
    s.exprs.push_back(parse_expr(ts));
  } else if (k == "extend") {
    s.refs.push_back(ts.expect_ident("a derivation"));
    expect_keyword(ts, "into");
    s.refs.push_back(ts.expect_ident("a skew ring"));
    if (ts.accept_symbol(":")) s.exprs.push_back(parse_expr(ts));
  } else if (k == "darboux") {
    s.exprs.push_back(parse_expr(ts));
    if (ts.peek().kind == TokenKind::Flag) {
      const Token& f = ts.next();
      if (f.text != "bound") throw ParseError(f.pos, "unknown option '--" + f.text + "'");
      s.number = parse_count(ts.expect_integer("a degree bound"));
    }
  } else if (k == "option") {
    const Token& key = ts.expect_ident("an option name");
    if (key.text == "order") {
      const Token& v = ts.expect_ident("lex or grevlex");
      if (v.text != "lex" && v.text != "grevlex")
        throw ParseError(v.pos, "unknown term order '" + v.text + "'");
      s.command = "option order";
      s.word = v.text;
    } else if (key.text == "budget") {
      s.command = "option budget";
      s.number = parse_count(ts.expect_integer("a step budget"));
    } else {
      throw ParseError(key.pos, "unknown option '" + key.text + "'");
    }
  } else if (k == "check") {
    const Token& sub = ts.expect_ident("a check name");
    s.command = "check " + sub.text;
    const std::string& c = sub.text;
    s.refs = parse_names(ts);
    if (c == "commute") {
      require_count(s, s.refs.size(), 2, SIZE_MAX, "derivations");
    } else if (c == "dideal") {
      require_count(s, s.refs.size(), 2, SIZE_MAX, "names (an ideal and derivations)");
    } else if (c == "simple" || c == "injective") {
      require_count(s, s.refs.size(), 1, 1, c == "simple" ? "skew ring" : "endomorphism");
    } else if (c == "dsimple" || c == "necessary") {
      require_count(s, s.refs.size(), 2, 2, "names (a ring and a derivation)");
      // --dim1 names the only criterion there is.
      if (c == "dsimple" && ts.peek().kind == TokenKind::Flag) {
        const Token& f = ts.next();
        if (f.text != "dim1") throw ParseError(f.pos, "unknown option '--" + f.text + "'");
      }
    } else if (c == "principal") {
      require_count(s, s.refs.size(), 1, SIZE_MAX, "derivations");
      ts.expect_symbol(":");
      s.exprs.push_back(parse_expr(ts));
    } else if (c == "charp") {
      require_count(s, s.refs.size(), 1, SIZE_MAX, "names (a ring and derivations)");
    } else {
      throw ParseError(sub.pos, "unknown check '" + c + "'");
    }
  } else {
    throw ParseError(kw.pos, "unknown command '" + k + "'");
  }
  ts.expect_end();
  return s;
}

}  // namespace

// =============================================================== resolver

const Resolver::Symbol& Resolver::lookup(const Token& t) const {
  auto it = symbols_.find(t.text);
  if (it == symbols_.end()) throw ParseError(t.pos, "unknown identifier '" + t.text + "'");
  return it->second;
}

const Resolver::Symbol& Resolver::expect(const Token& t, Kind kind, const std::string& what) const {
  const Symbol& sym = lookup(t);
  if (sym.kind != kind) throw ParseError(t.pos, "'" + t.text + "' is not " + what);
  return sym;
}

const Resolver::Symbol& Resolver::expect_ring(const Token& t, bool commutative_only,
                                              bool polynomial_only) const {
  const Symbol& sym = expect(t, Kind::Ring, "a ring");
  if (polynomial_only && sym.shape != Shape::Polynomial)
    throw ParseError(t.pos, "'" + t.text + "' is not a polynomial ring");
  if (commutative_only && (sym.shape == Shape::Skew || sym.shape == Shape::Ore))
    throw ParseError(t.pos, "'" + t.text + "' is not a commutative ring");
  return sym;
}

void Resolver::check_expr(const ExprPtr& e, const std::string& ring) const {
  static const std::vector<std::string> plane{"x", "y"};
  const std::vector<std::string>& vars = ring.empty() ? plane : symbols_.at(ring).vars;
  std::vector<const Expr*> ids;
  collect_identifiers(e, ids);
  for (const Expr* id : ids) {
    if (std::find(vars.begin(), vars.end(), id->name) != vars.end()) continue;
    auto it = symbols_.find(id->name);
    if (it != symbols_.end() && it->second.kind == Kind::Element && !ring.empty()) {
      if (it->second.ring == ring) continue;
      throw ParseError(id->pos, "'" + id->name + "' belongs to ring " + it->second.ring);
    }
    throw ParseError(id->pos, "unknown identifier '" + id->name + "'");
  }
}

void Resolver::define(const Token& name, Symbol sym, bool allow_rebind) {
  auto it = symbols_.find(name.text);
  if (it != symbols_.end()) {
    if (!allow_rebind || it->second.kind != Kind::Element)
      throw ParseError(name.pos, "'" + name.text + "' is already defined");
    it->second = std::move(sym);
    return;
  }
  symbols_.emplace(name.text, std::move(sym));
}

const std::string& Resolver::current(SourcePos pos) const {
  if (current_.empty()) throw ParseError(pos, "no current ring; define one or 'use' one first");
  return current_;
}

void Resolver::resolve(Statement& s) {
  const std::string& c = s.command;
  auto der_like = [&](const Token& t) -> const Symbol& {
    const Symbol& sym = lookup(t);
    if (sym.kind != Kind::Derivation && sym.kind != Kind::SkewDerivation)
      throw ParseError(t.pos, "'" + t.text + "' is not a derivation");
    return sym;
  };
  auto same_vars = [&](const Token& t, const std::string& a, const std::vector<std::string>& vars) {
    const auto& av = symbols_.at(a).vars;
    if (av.size() > vars.size() || !std::equal(av.begin(), av.end(), vars.begin()))
      throw ParseError(t.pos, "'" + t.text + "' is defined on a different ring");
  };
  auto distinct_fresh = [&](const std::vector<std::string>& taken) {
    std::set<std::string> seen(taken.begin(), taken.end());
    for (const auto& t : s.fresh)
      if (!seen.insert(t.text).second)
        throw ParseError(t.pos, "variable name '" + t.text + "' is already in use");
  };

  if (c == "ring") {
    distinct_fresh({});
    Symbol sym{Kind::Ring, Shape::Polynomial, "", {}};
    for (const auto& t : s.fresh) sym.vars.push_back(t.text);
    define(*s.name, std::move(sym));
    current_ = s.name->text;
  } else if (c == "ideal") {
    expect_ring(s.refs[0], true, false);
    s.eval_ring = s.refs[0].text;
    for (const auto& e : s.exprs) check_expr(e, s.eval_ring);
    define(*s.name, {Kind::Ideal, Shape::Polynomial, s.eval_ring, {}});
  } else if (c == "quotient") {
    const Symbol& r = expect_ring(s.refs[0], true, false);
    const Symbol& i = expect(s.refs[1], Kind::Ideal, "an ideal");
    if (symbols_.at(i.ring).vars != r.vars)
      throw ParseError(s.refs[1].pos, "'" + s.refs[1].text + "' lives in a different ring");
    define(*s.name, {Kind::Ring, Shape::Quotient, s.refs[0].text, r.vars});
    current_ = s.name->text;
  } else if (c == "der" || c == "endo") {
    const Symbol& r = expect_ring(s.refs[0], true, c == "endo");
    s.eval_ring = s.refs[0].text;
    std::set<std::string> seen;
    for (const auto& [var, e] : s.maps) {
      if (std::find(r.vars.begin(), r.vars.end(), var.text) == r.vars.end())
        throw ParseError(var.pos, "unknown identifier '" + var.text + "'");
      if (!seen.insert(var.text).second)
        throw ParseError(var.pos, "'" + var.text + "' is mapped twice");
      check_expr(e, s.eval_ring);
    }
    define(*s.name,
           {c == "der" ? Kind::Derivation : Kind::Endomorphism, Shape::Polynomial, s.eval_ring, {}});
  } else if (c == "skewder") {
    const Symbol& r = expect_ring(s.refs[0], true, true);
    const Symbol& f = expect(s.refs[1], Kind::Endomorphism, "an endomorphism");
    same_vars(s.refs[1], f.ring, r.vars);
    s.eval_ring = s.refs[0].text;
    check_expr(s.exprs[0], s.eval_ring);
    define(*s.name, {Kind::SkewDerivation, Shape::Polynomial, s.eval_ring, {}});
  } else if (c == "skew") {
    const Symbol& r = expect_ring(s.refs[0], true, false);
    for (std::size_t i = 1; i < s.refs.size(); ++i)
      same_vars(s.refs[i], expect(s.refs[i], Kind::Derivation, "a derivation").ring, r.vars);
    distinct_fresh(r.vars);
    Symbol sym{Kind::Ring, Shape::Skew, s.refs[0].text, r.vars};
    for (const auto& t : s.fresh) sym.vars.push_back(t.text);
    define(*s.name, std::move(sym));
    current_ = s.name->text;
  } else if (c == "ore") {
    const Symbol& r = expect_ring(s.refs[0], true, true);
    same_vars(s.refs[1], expect(s.refs[1], Kind::Endomorphism, "an endomorphism").ring, r.vars);
    if (s.refs.size() > 2) same_vars(s.refs[2], der_like(s.refs[2]).ring, r.vars);
    distinct_fresh(r.vars);
    Symbol sym{Kind::Ring, Shape::Ore, s.refs[0].text, r.vars};
    sym.vars.push_back(s.fresh[0].text);
    define(*s.name, std::move(sym));
    current_ = s.name->text;
  } else if (c == "weyl") {
    if (*s.number < 1 || *s.number > 16)
      throw ParseError(s.pos, "Weyl algebra index must be between 1 and 16");
    const std::size_t n = *s.number;
    s.name = Token{TokenKind::Ident, "A" + std::to_string(n), s.pos};
    Symbol sym{Kind::Ring, Shape::Skew, "", {}};
    for (std::size_t i = 1; i <= n; ++i) sym.vars.push_back(n == 1 ? "y" : "y" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) sym.vars.push_back(n == 1 ? "x" : "x" + std::to_string(i));
    define(*s.name, std::move(sym));
    current_ = s.name->text;
  } else if (c == "use") {
    expect_ring(s.refs[0], false, false);
    current_ = s.refs[0].text;
  } else if (c == "let") {
    s.eval_ring = current(s.pos);
    const auto& vars = symbols_.at(s.eval_ring).vars;
    if (std::find(vars.begin(), vars.end(), s.name->text) != vars.end())
      throw ParseError(s.name->pos, "'" + s.name->text + "' is a variable of the current ring");
    check_expr(s.exprs[0], s.eval_ring);
    define(*s.name, {Kind::Element, Shape::Polynomial, s.eval_ring, {}}, true);
  } else if (c == "gb" || c == "dim") {
    if (!s.refs.empty()) {
      const Symbol& sym = lookup(s.refs[0]);
      if (c == "gb" || sym.kind != Kind::Ring) {
        s.eval_ring = expect(s.refs[0], Kind::Ideal, "an ideal").ring;
      } else {
        expect_ring(s.refs[0], true, false);
        s.eval_ring = s.refs[0].text;
      }
    } else {
      s.eval_ring = current(s.pos);
      if (symbols_.at(s.eval_ring).shape == Shape::Skew || symbols_.at(s.eval_ring).shape == Shape::Ore)
        throw ParseError(s.pos, "the current ring is not commutative");
      for (const auto& e : s.exprs) check_expr(e, s.eval_ring);
    }
  } else if (c == "member") {
    s.eval_ring = expect(s.refs[0], Kind::Ideal, "an ideal").ring;
    check_expr(s.exprs[0], s.eval_ring);
  } else if (c == "reduce") {
    expect_ring(s.refs[0], true, false);
    s.eval_ring = s.refs[0].text;
    check_expr(s.exprs[0], s.eval_ring);
  } else if (c == "apply") {
    s.eval_ring = der_like(s.refs[0]).ring;
    check_expr(s.exprs[0], s.eval_ring);
  } else if (c == "commutator" || c == "check commute") {
    const std::string& ring = expect(s.refs[0], Kind::Derivation, "a derivation").ring;
    for (std::size_t i = 1; i < s.refs.size(); ++i)
      same_vars(s.refs[i], expect(s.refs[i], Kind::Derivation, "a derivation").ring,
                symbols_.at(ring).vars);
  } else if (c == "mul") {
    s.eval_ring = current(s.pos);
    check_expr(s.exprs[0], s.eval_ring);
  } else if (c == "inner" || c == "residuals") {
    s.eval_ring = current(s.pos);
    if (symbols_.at(s.eval_ring).shape != Shape::Skew)
      throw ParseError(s.pos, "'" + c + "' needs an iterated skew ring as the current ring");
    for (const auto& e : s.exprs) check_expr(e, s.eval_ring);
  } else if (c == "extend") {
    const Symbol& d = expect(s.refs[0], Kind::Derivation, "a derivation");
    const Symbol& r = expect_ring(s.refs[1], false, false);
    if (r.shape != Shape::Skew) throw ParseError(s.refs[1].pos, "'" + s.refs[1].text + "' is not a skew ring");
    same_vars(s.refs[0], d.ring, r.vars);
    s.eval_ring = s.refs[1].text;
    for (const auto& e : s.exprs) check_expr(e, s.eval_ring);
  } else if (c == "check dideal") {
    const Symbol& ideal = expect(s.refs[0], Kind::Ideal, "an ideal");
    for (std::size_t i = 1; i < s.refs.size(); ++i)
      same_vars(s.refs[i], expect(s.refs[i], Kind::Derivation, "a derivation").ring,
                symbols_.at(ideal.ring).vars);
  } else if (c == "check simple") {
    const Symbol& r = expect_ring(s.refs[0], false, false);
    if (r.shape != Shape::Skew) throw ParseError(s.refs[0].pos, "'" + s.refs[0].text + "' is not a skew ring");
  } else if (c == "check dsimple" || c == "check necessary" || c == "check charp") {
    const Symbol& r = expect_ring(s.refs[0], true, false);
    for (std::size_t i = 1; i < s.refs.size(); ++i)
      same_vars(s.refs[i], expect(s.refs[i], Kind::Derivation, "a derivation").ring, r.vars);
  } else if (c == "check principal") {
    s.eval_ring = expect(s.refs[0], Kind::Derivation, "a derivation").ring;
    for (std::size_t i = 1; i < s.refs.size(); ++i)
      same_vars(s.refs[i], expect(s.refs[i], Kind::Derivation, "a derivation").ring,
                symbols_.at(s.eval_ring).vars);
    check_expr(s.exprs[0], s.eval_ring);
  } else if (c == "check injective") {
    expect(s.refs[0], Kind::Endomorphism, "an endomorphism");
  } else if (c == "darboux") {
    s.eval_ring.clear();
    if (!current_.empty()) {
      const Symbol& cur = symbols_.at(current_);
      if (cur.shape == Shape::Polynomial && cur.vars.size() == 2) s.eval_ring = current_;
    }
    check_expr(s.exprs[0], s.eval_ring);
  } else if (c == "certificate") {
    s.eval_ring = current(s.pos);
    const Shape shape = symbols_.at(s.eval_ring).shape;
    if (shape != Shape::Polynomial && shape != Shape::Quotient)
      throw ParseError(s.pos, "'certificate' needs a commutative current ring");
    check_expr(s.exprs[0], s.eval_ring);
  }
}

std::vector<Statement> parse_session(std::string_view text, Resolver& scope) {
  std::vector<Statement> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    TokenStream ts(tokenize_line(text.substr(start, end - start), line_no));
    if (!ts.at_end()) {
      Statement s = parse_statement(ts);
      scope.resolve(s);
      out.push_back(std::move(s));
    }
    start = end + 1;
  }
  return out;
}

std::vector<Statement> parse_session(std::string_view text) {
  Resolver scope;
  return parse_session(text, scope);
}

// ============================================================== execution

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::vector<std::string> strings(const std::vector<Poly>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

std::string endo_string(const RingEndomorphism& f) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < f.images().size(); ++i)
    parts.push_back(f.context().name(i) + " -> " + f.images()[i].to_string());
  return join(parts);
}

json poly_json(const Poly& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms())
    terms.push_back({{"coefficient", scalar_to_string(c)}, {"exponents", m.exponents()}});
  return {{"normal_form", p.to_string()}, {"terms", terms}};
}

json skew_json(const SkewPoly& u) {
  json terms = json::array();
  for (const auto& [alpha, c] : u.terms())
    terms.push_back({{"coefficient", c.to_string()}, {"x_exponents", alpha.exponents()}});
  return {{"normal_form", u.to_string()}, {"terms", terms}};
}

std::string value_string(const Value& v) {
  return std::visit([](const auto& x) { return x.to_string(); }, v);
}

std::string verdict_text(const SimplicityVerdict& v) {
  std::string out = to_string(v.status);
  if (!v.criterion.empty()) out += " (" + v.criterion + ")";
  if (!v.reason.empty()) out += ": " + v.reason;
  if (v.witness) out += "; witness ideal (" + join(strings(v.witness->generators())) + ")";
  return out;
}

}  // namespace

json verdict_json(const SimplicityVerdict& v) {
  json j{{"status", to_string(v.status)}};
  if (!v.criterion.empty()) j["criterion"] = v.criterion;
  if (!v.reason.empty()) j["reason"] = v.reason;
  if (v.witness) j["witness"] = strings(v.witness->generators());
  if (v.unit)
    j["unit_witness"] = {{"generators", strings(v.unit->generators)},
                         {"cofactors", strings(v.unit->cofactors)},
                         {"verified", v.unit->verify()}};
  if (!v.diagnostics.empty()) j["diagnostics"] = v.diagnostics;
  return j;
}

Session::Session() : plane_({"x", "y"}, FieldSpec::rationals()) {}

void Session::bind(const std::string& name, Binding b) { bindings_.insert_or_assign(name, std::move(b)); }

const Session::RingEntry& Session::ring_entry(const std::string& name) const {
  auto it = bindings_.find(name);
  const RingEntry* r = it == bindings_.end() ? nullptr : std::get_if<RingEntry>(&it->second);
  if (!r) throw MathError("'" + name + "' is not a defined ring");
  return *r;
}

const QuotientRing& Session::commutative(const std::string& name) const {
  const QuotientRing* q = std::get_if<QuotientRing>(&ring_entry(name).ring);
  if (!q) throw MathError("'" + name + "' is not a commutative ring");
  return *q;
}

const Derivation& Session::derivation(const std::string& name) const {
  auto it = bindings_.find(name);
  const DerEntry* d = it == bindings_.end() ? nullptr : std::get_if<DerEntry>(&it->second);
  if (!d) throw MathError("'" + name + "' is not a defined derivation");
  return d->d;
}

Value Session::eval(const ExprPtr& e, const std::string& ring) const {
  auto element = [&](const Expr& id) -> const Value& {
    auto it = bindings_.find(id.name);
    const ElementEntry* el =
        it == bindings_.end() ? nullptr : std::get_if<ElementEntry>(&it->second);
    if (!el || el->ring != ring) throw MathError("unknown identifier '" + id.name + "'");
    return el->value;
  };
  auto commutative_alg = [&](const QuotientRing* q, const VarContext& ctx) {
    auto red = [q](Poly p) { return q ? q->reduce(p) : p; };
    return ExprAlgebra<Poly>{
        [&ctx, red](const Scalar& c) { return red(Poly::constant(ctx, c)); },
        [&ctx, red, &element](const Expr& id) {
          if (auto idx = ctx.index_of(id.name)) return red(Poly::variable(ctx, *idx));
          return std::get<Poly>(element(id));
        },
        [](const Poly& a, const Poly& b) { return a + b; },
        [](const Poly& a, const Poly& b) { return a - b; },
        [red](const Poly& a, const Poly& b) { return red(a * b); },
        [](const Poly& a) { return -a; },
    };
  };
  if (ring.empty()) return evaluate(e, commutative_alg(nullptr, plane_));
  const RingEntry& entry = ring_entry(ring);
  if (const auto* q = std::get_if<QuotientRing>(&entry.ring))
    return evaluate(e, commutative_alg(q, q->context()));

  // Skew rings: base variables, then skew variables, then bound elements.
  const std::shared_ptr<const SkewShape>* shape = nullptr;
  std::function<SkewPoly(const SkewPoly&, const SkewPoly&)> mul;
  if (const auto* S = std::get_if<SkewRing>(&entry.ring)) {
    shape = &S->shape();
    mul = [S](const SkewPoly& a, const SkewPoly& b) { return skew_mul(*S, a, b); };
  } else {
    const auto* O = &std::get<OreExtension>(entry.ring);
    shape = &O->shape();
    mul = [O](const SkewPoly& a, const SkewPoly& b) { return endo_skew_mul(*O, a, b); };
  }
  const SkewShape& sh = **shape;
  const VarContext& ctx = sh.base.context();
  auto embed = [&](const Poly& r) {
    SkewPoly out(*shape);
    out.add_term(Monomial(sh.vars.size()), r);
    return out;
  };
  ExprAlgebra<SkewPoly> alg{
      [&](const Scalar& c) { return embed(Poly::constant(ctx, c)); },
      [&](const Expr& id) {
        if (auto idx = ctx.index_of(id.name)) return embed(Poly::variable(ctx, *idx));
        auto it = std::find(sh.vars.begin(), sh.vars.end(), id.name);
        if (it != sh.vars.end()) {
          SkewPoly out(*shape);
          out.add_term(Monomial::unit(sh.vars.size(), it - sh.vars.begin()), sh.base.one());
          return out;
        }
        return std::get<SkewPoly>(element(id));
      },
      [](const SkewPoly& a, const SkewPoly& b) { return a + b; },
      [](const SkewPoly& a, const SkewPoly& b) { return a - b; },
      mul,
      [](const SkewPoly& a) { return -a; },
  };
  return evaluate(e, alg);
}

Poly Session::eval_poly(const ExprPtr& e, const std::string& ring) const {
  Value v = eval(e, ring);
  if (const Poly* p = std::get_if<Poly>(&v)) return *p;
  throw MathError("expected an element of a commutative ring");
}

json Session::value_json(const Value& v) const {
  if (const Poly* p = std::get_if<Poly>(&v)) return poly_json(*p);
  return skew_json(std::get<SkewPoly>(v));
}

CommandResult Session::execute(const Statement& s) {
  const std::string& c = s.command;
  auto ref = [&](std::size_t i) -> const std::string& { return s.refs[i].text; };
  auto defining = [&](const std::string& ring) {
    return commutative(ring).ideal().generators();
  };
  auto ders_from = [&](std::size_t first) {
    std::vector<Derivation> out;
    for (std::size_t i = first; i < s.refs.size(); ++i) out.push_back(derivation(ref(i)));
    return out;
  };
  CommandResult r;
  json& j = r.json;

  if (c == "ring") {
    std::vector<std::string> vars;
    for (const auto& t : s.fresh) vars.push_back(t.text);
    VarContext ctx(vars, *s.field);
    std::string display = s.field->to_string() + "[" + join(vars) + "]";
    bind(s.name->text, RingEntry{QuotientRing(ctx, opts_.order), display});
    j = {{"name", s.name->text}, {"ring", display}};
    r.text = s.name->text + " = " + display;
  } else if (c == "ideal") {
    std::vector<Poly> gens;
    for (const auto& e : s.exprs) gens.push_back(eval_poly(e, s.eval_ring));
    IdealHandle ideal(commutative(s.eval_ring).context(), gens);
    bind(s.name->text, IdealEntry{s.eval_ring, ideal});
    j = {{"name", s.name->text}, {"generators", strings(ideal.generators())}};
    r.text = s.name->text + " = (" + join(strings(ideal.generators())) + ")";
  } else if (c == "quotient") {
    const QuotientRing& base = commutative(ref(0));
    const auto& ideal = std::get<IdealEntry>(bindings_.at(ref(1))).ideal;
    std::vector<Poly> gens = ideal.generators();
    for (const auto& g : base.ideal().generators()) gens.push_back(g);
    QuotientRing q(IdealHandle(base.context(), gens), opts_);
    std::string display = ring_entry(ref(0)).display + "/(" + join(strings(ideal.generators())) + ")";
    j = {{"name", s.name->text}, {"ring", display}, {"basis", strings(q.basis().polys())}};
    r.text = s.name->text + " = " + display + ", basis [" + join(strings(q.basis().polys())) + "]";
    bind(s.name->text, RingEntry{std::move(q), display});
  } else if (c == "der" || c == "endo") {
    const QuotientRing& q = commutative(s.eval_ring);
    const VarContext& ctx = q.context();
    std::vector<Poly> images;
    for (std::size_t i = 0; i < ctx.size(); ++i)
      images.push_back(c == "der" ? Poly(ctx) : Poly::variable(ctx, i));
    for (const auto& [var, e] : s.maps) images[*ctx.index_of(var.text)] = eval_poly(e, s.eval_ring);
    if (c == "der") {
      Derivation d(q, std::move(images));
      j = {{"name", s.name->text}, {"derivation", d.to_string()}};
      r.text = s.name->text + ": " + d.to_string();
      bind(s.name->text, DerEntry{s.eval_ring, std::move(d)});
    } else {
      RingEndomorphism f(ctx, std::move(images));
      const std::string inj = to_string(endo_injectivity(f));
      j = {{"name", s.name->text}, {"endomorphism", endo_string(f)}, {"injectivity", inj}};
      r.text = s.name->text + ": " + endo_string(f) + " (" + inj + ")";
      bind(s.name->text, EndoEntry{s.eval_ring, std::move(f)});
    }
  } else if (c == "skewder") {
    const RingEndomorphism& f = std::get<EndoEntry>(bindings_.at(ref(1))).f;
    SkewDerivation d = family_skew_derivation(eval_poly(s.exprs[0], s.eval_ring), f);
    j = {{"name", s.name->text}, {"scale", d.scale().to_string()}, {"endomorphism", endo_string(f)}};
    r.text = s.name->text + ": r -> (" + d.scale().to_string() + ")*(f(r) - r)";
    bind(s.name->text, SkewDerEntry{s.eval_ring, std::move(d)});
  } else if (c == "skew") {
    std::vector<std::string> vars;
    for (const auto& t : s.fresh) vars.push_back(t.text);
    SkewRing S = SkewRing::build(commutative(ref(0)), vars, ders_from(1));
    std::string display = ref(0);
    for (std::size_t i = 0; i < vars.size(); ++i) display += "[" + vars[i] + "; " + ref(i + 1) + "]";
    j = {{"name", s.name->text}, {"ring", display}, {"variables", vars}, {"commuting", true}};
    r.text = s.name->text + " = " + display;
    bind(s.name->text, RingEntry{std::move(S), display});
  } else if (c == "ore") {
    const QuotientRing& base = commutative(ref(0));
    const RingEndomorphism& f = std::get<EndoEntry>(bindings_.at(ref(1))).f;
    OreExtension::SkewMap d;
    if (s.refs.size() > 2) {
      const Binding& b = bindings_.at(ref(2));
      if (const auto* de = std::get_if<DerEntry>(&b)) d = de->d;
      else d = std::get<SkewDerEntry>(b).d;
    }
    OreExtension O(base, s.fresh[0].text, f, d);
    std::string display = ref(0) + "[" + s.fresh[0].text + "; " + ref(1) +
                          (s.refs.size() > 2 ? ", " + ref(2) : "") + "]";
    j = {{"name", s.name->text}, {"ring", display}, {"injectivity", to_string(O.injectivity())}};
    r.text = s.name->text + " = " + display;
    bind(s.name->text, RingEntry{std::move(O), display});
  } else if (c == "weyl") {
    SkewRing S = weyl_algebra(*s.number, FieldSpec::rationals());
    j = {{"name", s.name->text},
         {"base_variables", S.base().context().names()},
         {"skew_variables", S.vars()}};
    r.text = s.name->text + " = QQ[" + join(S.base().context().names()) + "][" +
             join(S.vars()) + "] with x_i y_i - y_i x_i = 1";
    bind(s.name->text, RingEntry{std::move(S), s.name->text});
  } else if (c == "use") {
    ring_entry(ref(0));
    j = {{"current", ref(0)}};
    r.text = "using " + ref(0);
  } else if (c == "let") {
    Value v = eval(s.exprs[0], s.eval_ring);
    j = {{"name", s.name->text}, {"value", value_json(v)}};
    r.text = s.name->text + " = " + value_string(v);
    bind(s.name->text, ElementEntry{s.eval_ring, std::move(v)});
  } else if (c == "gb" || c == "dim") {
    const QuotientRing& q = commutative(s.eval_ring);
    std::vector<Poly> gens;
    if (!s.refs.empty()) {
      const Binding& b = bindings_.at(ref(0));
      if (const auto* ie = std::get_if<IdealEntry>(&b)) gens = ie->ideal.generators();
    } else {
      for (const auto& e : s.exprs) gens.push_back(eval_poly(e, s.eval_ring));
    }
    for (const auto& g : defining(s.eval_ring)) gens.push_back(g);
    if (c == "gb") {
      GroebnerBasis gb = buchberger(q.context(), gens, opts_);
      j = {{"order", to_string(opts_.order)}, {"basis", strings(gb.polys())}, {"unit", gb.is_unit()}};
      r.text = "[" + join(strings(gb.polys())) + "]";
    } else {
      const std::size_t dim = krull_dimension(IdealHandle(q.context(), gens), opts_);
      j = {{"dimension", dim}};
      r.text = "dimension " + std::to_string(dim);
    }
  } else if (c == "member") {
    const auto& ie = std::get<IdealEntry>(bindings_.at(ref(0)));
    std::vector<Poly> gens = ie.ideal.generators();
    for (const auto& g : defining(ie.ring)) gens.push_back(g);
    GroebnerBasis gb = buchberger(ie.ideal.context(), gens, opts_);
    Poly nf = normal_form(eval_poly(s.exprs[0], s.eval_ring), gb);
    j = {{"member", nf.is_zero()}, {"normal_form", nf.to_string()}};
    r.text = std::string(nf.is_zero() ? "member" : "not a member") + ", normal form " + nf.to_string();
  } else if (c == "reduce") {
    Poly nf = commutative(s.eval_ring).reduce(eval_poly(s.exprs[0], s.eval_ring));
    j = {{"normal_form", nf.to_string()}};
    r.text = nf.to_string();
  } else if (c == "apply") {
    const Poly f = eval_poly(s.exprs[0], s.eval_ring);
    const Binding& b = bindings_.at(ref(0));
    Poly v = std::holds_alternative<DerEntry>(b) ? std::get<DerEntry>(b).d.apply(f)
                                                 : std::get<SkewDerEntry>(b).d.apply(f);
    j = {{"value", poly_json(v)}};
    r.text = v.to_string();
  } else if (c == "commutator") {
    Derivation d = commutator(derivation(ref(0)), derivation(ref(1)));
    j = {{"derivation", d.to_string()}, {"zero", d.is_zero()}};
    r.text = "[" + ref(0) + ", " + ref(1) + "]: " + d.to_string();
  } else if (c == "mul") {
    Value v = eval(s.exprs[0], s.eval_ring);
    j = {{"value", value_json(v)}};
    r.text = value_string(v);
  } else if (c == "inner") {
    const SkewRing& S = std::get<SkewRing>(ring_entry(s.eval_ring).ring);
    InnerAnalysis a = inner_induced(S, std::get<SkewPoly>(eval(s.exprs[0], s.eval_ring)));
    j = {{"induced", a.induced}};
    if (a.induced) {
      j["derivation"] = a.derivation->to_string();
      r.text = "induced derivation: " + a.derivation->to_string();
    } else {
      const std::string gen = S.base().context().name(*a.generator);
      j["generator"] = gen;
      j["residual"] = skew_json(*a.residual);
      r.text = "not degree zero at " + gen + ": residual " + a.residual->to_string();
    }
  } else if (c == "residuals") {
    const SkewRing& S = std::get<SkewRing>(ring_entry(s.eval_ring).ring);
    SkewPoly f = std::get<SkewPoly>(eval(s.exprs[0], s.eval_ring));
    SkewPoly rr = std::get<SkewPoly>(eval(s.exprs[1], s.eval_ring));
    if (rr.x_degree() > 0) throw MathError("the second argument must be a base element");
    CoefficientResiduals res = coefficient_residuals(S, f, rr.coefficient(Monomial(S.num_vars())));
    j = {{"induced_value", res.induced_value.to_string()}, {"residuals", strings(res.residuals)}};
    r.text = "induced value " + res.induced_value.to_string() + "; residuals [" +
             join(strings(res.residuals)) + "]";
  } else if (c == "extend") {
    const SkewRing& S = std::get<SkewRing>(ring_entry(ref(1)).ring);
    ExtendedDerivation ext = extend_derivation(derivation(ref(0)), S);
    j = {{"extended", true}};
    r.text = ref(0) + " extends to " + ref(1);
    if (!s.exprs.empty()) {
      SkewPoly v = ext.apply(std::get<SkewPoly>(eval(s.exprs[0], s.eval_ring)));
      j["value"] = skew_json(v);
      r.text += ": " + v.to_string();
    }
  } else if (c == "check commute") {
    std::vector<Derivation> ders = ders_from(0);
    CommutingReport rep = commuting_set_check(ders);
    j = {{"result", rep.commuting}};
    r.text = rep.commuting ? "commuting" : "not commuting";
    if (!rep.commuting) {
      const std::string gen = ders[0].context().name(*rep.generator);
      j["pair"] = {ref(rep.pair->first), ref(rep.pair->second)};
      j["generator"] = gen;
      j["image"] = rep.image->to_string();
      r.text += ": [" + ref(rep.pair->first) + ", " + ref(rep.pair->second) + "](" + gen +
                ") = " + rep.image->to_string();
    }
  } else if (c == "check dideal") {
    const auto& ie = std::get<IdealEntry>(bindings_.at(ref(0)));
    DIdealReport rep = d_ideal_check(ie.ideal, ders_from(1), opts_);
    j = {{"result", rep.invariant}};
    r.text = rep.invariant ? "D-ideal" : "not a D-ideal";
    if (!rep.invariant) {
      const std::string gen = ie.ideal.generators()[*rep.generator].to_string();
      j["derivation"] = ref(*rep.derivation + 1);
      j["generator"] = gen;
      j["image"] = rep.image->to_string();
      r.text += ": " + ref(*rep.derivation + 1) + "(" + gen + ") = " + rep.image->to_string();
    }
  } else if (c == "check simple") {
    const auto* S = std::get_if<SkewRing>(&ring_entry(ref(0)).ring);
    if (!S) throw MathError("'" + ref(0) + "' is not an iterated skew ring");
    SimplicityVerdict v = skew_simplicity(*S, opts_);
    j = verdict_json(v);
    r.text = verdict_text(v);
  } else if (c == "check dsimple") {
    SimplicityVerdict v = fg_dim1_simplicity(commutative(ref(0)), derivation(ref(1)), opts_);
    j = verdict_json(v);
    r.text = verdict_text(v);
  } else if (c == "check necessary") {
    auto w = unit_condition_witness(commutative(ref(0)), derivation(ref(1)), opts_);
    j = {{"result", w.has_value()}};
    r.text = w ? "unit ideal" : "proper ideal";
    if (w) {
      j["generators"] = strings(w->generators);
      j["cofactors"] = strings(w->cofactors);
      j["verified"] = w->verify();
    }
  } else if (c == "check principal") {
    bool ok = principal_stability_check(eval_poly(s.exprs[0], s.eval_ring), ders_from(0), opts_);
    j = {{"result", ok}};
    r.text = ok ? "stable" : "not stable";
  } else if (c == "check charp") {
    SimplicityVerdict v = charp_obstruction(commutative(ref(0)), ders_from(1), opts_);
    j = verdict_json(v);
    r.text = verdict_text(v);
  } else if (c == "check injective") {
    const std::string v = to_string(endo_injectivity(std::get<EndoEntry>(bindings_.at(ref(0))).f));
    j = {{"injectivity", v}};
    r.text = v;
  } else if (c == "darboux") {
    Poly F = eval_poly(s.exprs[0], s.eval_ring);
    if (!s.eval_ring.empty() && !commutative(s.eval_ring).is_polynomial_ring())
      throw MathError("Darboux search needs a polynomial ring");
    DarbouxResult res = darboux_search(F, static_cast<unsigned>(s.number.value_or(3)), opts_);
    j = {{"status", to_string(res.status)}, {"bound", res.bound}};
    r.text = to_string(res.status) + " (bound " + std::to_string(res.bound) + ")";
    if (res.h) {
      j["h"] = res.h->to_string();
      j["cofactor"] = res.cofactor->to_string();
      r.text += ": h = " + res.h->to_string() + ", cofactor " + res.cofactor->to_string();
    }
    if (!res.reason.empty()) {
      j["reason"] = res.reason;
      r.text += ": " + res.reason;
    }
  } else if (c == "certificate") {
    const QuotientRing& q = commutative(s.eval_ring);
    const std::uint64_t p = q.field().characteristic();
    if (p == 0 && !q.is_polynomial_ring())
      throw MathError("certificates in characteristic 0 need a polynomial ring");
    if (p != 0 && !q.is_polynomial_ring()) {
      std::vector<Poly> powers;
      for (std::size_t i = 0; i < q.context().size(); ++i)
        powers.push_back(Poly::variable(q.context(), i).pow(p));
      GroebnerOptions same;
      same.order = q.basis().order();
      if (!(q.basis() == buchberger(q.context(), powers, same)))
        throw MathError("certificates in characteristic p need the ring GF(p)[x1..xn]/(x1^p, ..., xn^p)");
    }
    const Poly f = q.reduce(eval_poly(s.exprs[0], s.eval_ring));
    if (f.is_zero()) throw MathError("certificate of the zero element");
    SimplicityCertificate cert = p == 0 ? partials_certificate(f) : truncated_certificate(f);
    std::vector<Derivation> partials;
    for (std::size_t i = 0; i < q.context().size(); ++i) partials.push_back(Derivation::partial(q, i));
    std::vector<std::string> word;
    for (std::size_t idx : cert.word) word.push_back(q.context().name(idx));
    const bool ok = verify_certificate(f, cert, partials);
    j = {{"word", word}, {"final_constant", cert.final_constant.to_string()}, {"verified", ok}};
    r.text = word.empty() ? "already the nonzero constant " + cert.final_constant.to_string()
                          : "differentiate by " + join(word) + " to reach " +
                                cert.final_constant.to_string();
  } else if (c == "option order") {
    opts_.order = s.word == "lex" ? TermOrder::Lex : TermOrder::GrevLex;
    j = {{"order", s.word}};
    r.text = "order " + s.word;
  } else if (c == "option budget") {
    opts_.budget = *s.number;
    j = {{"budget", *s.number}};
    r.text = "budget " + std::to_string(*s.number);
  } else {
    throw std::logic_error("unhandled command " + c);
  }
  return r;
}

int Session::run(std::string_view text, std::ostream& out, std::ostream& err, OutputMode mode) {
  auto report = [&](const char* kind, std::size_t line, std::size_t column, const std::string& msg) {
    if (mode == OutputMode::Json) {
      json e{{"error", kind}, {"line", line}, {"message", msg}};
      if (column) e["column"] = column;
      out << e.dump() << "\n";
    }
    err << "error: line " << line;
    if (column) err << ", column " << column;
    err << ": " << msg << "\n";
  };

  const Resolver snapshot = scope_;
  std::vector<Statement> stmts;
  try {
    stmts = parse_session(text, scope_);
  } catch (const ParseError& e) {
    scope_ = snapshot;
    report("parse", e.pos().line, e.pos().column, e.message());
    return ExitParse;
  }

  for (std::size_t k = 0; k < stmts.size(); ++k) {
    const Statement& s = stmts[k];
    int code = ExitOk;
    std::string kind, message;
    try {
      CommandResult res = execute(s);
      if (mode == OutputMode::Json) {
        res.json["line"] = s.pos.line;
        res.json["command"] = s.command;
        out << res.json.dump() << "\n";
      } else {
        out << res.text << "\n";
      }
      continue;
    } catch (const BudgetExhausted& e) {
      code = ExitBudget, kind = "budget", message = e.what();
    } catch (const MathError& e) {
      code = ExitMath, kind = "math", message = e.what();
    } catch (const std::invalid_argument& e) {
      code = ExitMath, kind = "math", message = e.what();
    }
    // Keep only the definitions that actually executed.
    scope_ = snapshot;
    for (std::size_t i = 0; i < k; ++i) {
      Statement copy = stmts[i];
      scope_.resolve(copy);
    }
    report(kind.c_str(), s.pos.line, 0, message);
    return code;
  }
  return ExitOk;
}

}  // namespace skewalg
