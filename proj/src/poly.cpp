#include "skewalg/poly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace skewalg {

VarContext::VarContext(std::vector<std::string> names, FieldSpec field) {
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw std::invalid_argument("empty variable name");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate variable name: " + n);
  }
  data_ = std::make_shared<const Data>(Data{std::move(names), field});
}

std::optional<std::size_t> VarContext::index_of(const std::string& name) const {
  const auto& ns = data_->names;
  auto it = std::find(ns.begin(), ns.end(), name);
  if (it == ns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ns.begin());
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::unit(std::size_t nvars, std::size_t i, std::uint32_t power) {
  Monomial m(nvars);
  m.e_.at(i) = power;
  return m;
}

std::uint64_t Monomial::degree() const {
  std::uint64_t d = 0;
  for (auto v : e_) d += v;
  return d;
}

bool Monomial::is_one() const {
  return std::all_of(e_.begin(), e_.end(), [](auto v) { return v == 0; });
}

bool Monomial::divides(const Monomial& other) const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] > other.e_[i]) return false;
  return true;
}

bool Monomial::coprime(const Monomial& other) const {
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (e_[i] != 0 && other.e_[i] != 0) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r(a);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] += b.e_[i];
  return r;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial r(a);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] -= b.e_[i];
  return r;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial r(a);
  for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = std::max(a.e_[i], b.e_[i]);
  return r;
}

std::string to_string(TermOrder order) { return order == TermOrder::Lex ? "lex" : "grevlex"; }

int compare_monomials(const Monomial& a, const Monomial& b, TermOrder order) {
  if (order == TermOrder::GrevLex) {
    auto da = a.degree(), db = b.degree();
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
    }
    return 0;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

// -------------------------------------------------------------------- Poly

void require_same_context(const VarContext& a, const VarContext& b) {
  if (!(a == b)) throw ContextMismatch();
}

Poly Poly::constant(const VarContext& ctx, const Scalar& c) {
  Poly p(ctx);
  Scalar v = ctx.field().normalize(c);
  if (v != 0) p.terms_.emplace(Monomial(ctx.size()), v);
  return p;
}

Poly Poly::variable(const VarContext& ctx, std::size_t i) {
  if (i >= ctx.size()) throw std::out_of_range("variable index out of range");
  Poly p(ctx);
  p.terms_.emplace(Monomial::unit(ctx.size(), i), Scalar(1));
  return p;
}

Poly Poly::term(const VarContext& ctx, const Monomial& m, const Scalar& c) {
  if (m.size() != ctx.size()) throw std::invalid_argument("monomial length does not match context");
  Poly p(ctx);
  Scalar v = ctx.field().normalize(c);
  if (v != 0) p.terms_.emplace(m, v);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Scalar Poly::constant_term() const { return coefficient(Monomial(ctx_.size())); }

Scalar Poly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(0) : it->second;
}

long Poly::total_degree() const {
  long d = -1;
  for (const auto& [m, c] : terms_) d = std::max<long>(d, static_cast<long>(m.degree()));
  return d;
}

std::uint32_t Poly::degree_in(std::size_t var) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
  return d;
}

bool Poly::uses_variable(std::size_t var) const { return degree_in(var) > 0; }

void Poly::add_term(const Monomial& m, const Scalar& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second = field().add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

Poly Poly::operator-() const {
  Poly r(ctx_);
  for (const auto& [m, c] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field().neg(c));
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  require_same_context(ctx_, o.ctx_);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  require_same_context(ctx_, o.ctx_);
  for (const auto& [m, c] : o.terms_) add_term(m, field().neg(c));
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_context(a.ctx_, b.ctx_);
  Poly r(a.ctx_);
  const FieldSpec& f = a.field();
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, f.mul(ca, cb));
  return r;
}

Poly Poly::scaled(const Scalar& c) const {
  Scalar v = field().normalize(c);
  Poly r(ctx_);
  if (v == 0) return r;
  for (const auto& [m, t] : terms_) r.terms_.emplace_hint(r.terms_.end(), m, field().mul(t, v));
  return r;
}

Poly Poly::times_monomial(const Monomial& mono, const Scalar& c) const {
  Scalar v = field().normalize(c);
  Poly r(ctx_);
  if (v == 0) return r;
  // Multiplying by a monomial preserves lex order, so hints stay valid.
  for (const auto& [m, t] : terms_)
    r.terms_.emplace_hint(r.terms_.end(), m * mono, field().mul(t, v));
  return r;
}

Poly Poly::pow(std::uint64_t n) const {
  Poly result = constant(ctx_, 1);
  Poly base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    bool negative = c < 0;
    Scalar mag = negative ? Scalar(-c) : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    std::vector<std::string> factors;
    if (m.is_one() || mag != 1) factors.push_back(scalar_to_string(mag));
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      std::string f = ctx_.name(i);
      if (m[i] > 1) f += "^" + std::to_string(m[i]);
      factors.push_back(std::move(f));
    }
    for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
  }
  return os.str();
}

std::pair<Monomial, FieldElement> leading_term(const Poly& f, TermOrder order) {
  if (f.is_zero()) throw MathError("leading term of the zero polynomial");
  auto best = f.terms().begin();
  for (auto it = std::next(best); it != f.terms().end(); ++it)
    if (compare_monomials(it->first, best->first, order) > 0) best = it;
  return {best->first, FieldElement(f.field(), best->second)};
}

Poly poly_arith(const Poly& a, const Poly& b, PolyOp op) {
  switch (op) {
    case PolyOp::Add: return a + b;
    case PolyOp::Sub: return a - b;
    case PolyOp::Mul: return a * b;
  }
  throw std::logic_error("unreachable");
}

Poly partial(const Poly& f, std::size_t i) {
  if (i >= f.context().size()) throw std::out_of_range("variable index out of range");
  Poly r(f.context());
  const FieldSpec& fs = f.field();
  for (const auto& [m, c] : f.terms()) {
    if (m[i] == 0) continue;
    Monomial dm(m);
    dm[i] -= 1;
    r.add_term(dm, fs.mul(c, fs.from_int(static_cast<long>(m[i]))));
  }
  return r;
}

// ------------------------------------------------------ RingEndomorphism

RingEndomorphism::RingEndomorphism(VarContext ctx, std::vector<Poly> images)
    : ctx_(std::move(ctx)), images_(std::move(images)) {
  if (images_.size() != ctx_.size())
    throw std::invalid_argument("endomorphism needs one image per variable");
  for (const auto& p : images_) require_same_context(ctx_, p.context());
}

RingEndomorphism RingEndomorphism::identity(const VarContext& ctx) {
  std::vector<Poly> imgs;
  for (std::size_t i = 0; i < ctx.size(); ++i) imgs.push_back(Poly::variable(ctx, i));
  return RingEndomorphism(ctx, std::move(imgs));
}

bool RingEndomorphism::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (!(images_[i] == Poly::variable(ctx_, i))) return false;
  return true;
}

bool RingEndomorphism::is_variable_permutation() const {
  std::vector<bool> hit(ctx_.size(), false);
  for (const auto& img : images_) {
    bool matched = false;
    for (std::size_t j = 0; j < ctx_.size(); ++j) {
      if (img == Poly::variable(ctx_, j)) {
        if (hit[j]) return false;
        hit[j] = matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

Poly RingEndomorphism::apply(const Poly& f) const {
  require_same_context(ctx_, f.context());
  std::vector<std::vector<Poly>> powers(ctx_.size());
  auto power_of = [&](std::size_t var, std::uint32_t e) -> const Poly& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(Poly::constant(ctx_, 1));
    while (cache.size() <= e) cache.push_back(cache.back() * images_[var]);
    return cache[e];
  };
  Poly result(ctx_);
  for (const auto& [m, c] : f.terms()) {
    Poly t = Poly::constant(ctx_, c);
    for (std::size_t v = 0; v < m.size(); ++v)
      if (m[v] > 0) t = t * power_of(v, m[v]);
    result += t;
  }
  return result;
}

Poly RingEndomorphism::apply_power(const Poly& f, std::uint64_t n) const {
  Poly r = f;
  for (std::uint64_t k = 0; k < n; ++k) r = apply(r);
  return r;
}

Poly apply_endo(const RingEndomorphism& phi, const Poly& f) { return phi.apply(f); }

std::string to_string(Injectivity v) {
  switch (v) {
    case Injectivity::Injective: return "Injective";
    case Injectivity::NotInjective: return "NotInjective";
    case Injectivity::Unknown: return "Unknown";
  }
  return "?";
}

std::size_t polynomial_matrix_rank(std::vector<std::vector<Poly>> rows) {
  if (rows.empty()) return 0;
  const std::size_t ncols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < ncols && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const Poly p = rows[rank][col];
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col].is_zero()) continue;
      const Poly a = rows[r][col];
      for (std::size_t c = col; c < ncols; ++c) rows[r][c] = p * rows[r][c] - a * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

Injectivity endo_injectivity(const RingEndomorphism& phi) {
  const auto& imgs = phi.images();
  if (phi.is_variable_permutation()) return Injectivity::Injective;
  for (std::size_t i = 0; i < imgs.size(); ++i) {
    if (imgs[i].is_constant()) return Injectivity::NotInjective;
    for (std::size_t j = i + 1; j < imgs.size(); ++j)
      if (imgs[i] == imgs[j]) return Injectivity::NotInjective;
  }
  if (phi.context().field().characteristic() != 0) return Injectivity::Unknown;
  std::vector<std::vector<Poly>> jac;
  for (const auto& img : imgs) {
    std::vector<Poly> row;
    for (std::size_t v = 0; v < phi.context().size(); ++v) row.push_back(partial(img, v));
    jac.push_back(std::move(row));
  }
  return polynomial_matrix_rank(std::move(jac)) == imgs.size() ? Injectivity::Injective
                                                               : Injectivity::NotInjective;
}

}  // namespace skewalg
