#include "skewalg/ore.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace skewalg {

bool GradedLexGreater::operator()(const Monomial& a, const Monomial& b) const {
  const auto da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  return a > b;
}

// ----------------------------------------------------------------- SkewPoly

long SkewPoly::x_degree() const {
  if (terms_.empty()) return -1;
  return static_cast<long>(terms_.begin()->first.degree());
}

Poly SkewPoly::coefficient(const Monomial& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Poly(base().context()) : it->second;
}

void SkewPoly::add_term(const Monomial& alpha, const Poly& r) {
  if (alpha.size() != num_vars()) throw std::invalid_argument("x-exponent length mismatch");
  require_same_context(base().context(), r.context());
  Poly c = base().reduce(r);
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(alpha, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

SkewPoly SkewPoly::operator-() const {
  SkewPoly out(shape_);
  for (const auto& [a, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), a, -c);
  return out;
}

SkewPoly& SkewPoly::operator+=(const SkewPoly& o) {
  if (o.shape_ != shape_) throw ContextMismatch("elements of different skew rings");
  for (const auto& [a, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(a, c);
    if (inserted) continue;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
  return *this;
}

SkewPoly& SkewPoly::operator-=(const SkewPoly& o) { return *this += -o; }

SkewPoly SkewPoly::left_scaled(const Poly& r) const {
  SkewPoly out(shape_);
  for (const auto& [a, c] : terms_) out.add_term(a, r * c);
  return out;
}

std::string SkewPoly::to_string() const {
  if (terms_.empty()) return "0";
  const VarContext& ctx = base().context();
  std::ostringstream os;
  bool first = true;
  for (const auto& [alpha, coef] : terms_) {
    for (const auto& [m, c] : coef.terms()) {
      bool negative = c < 0;
      Scalar mag = negative ? Scalar(-c) : c;
      if (first) {
        if (negative) os << "-";
      } else {
        os << (negative ? " - " : " + ");
      }
      first = false;
      std::vector<std::string> factors;
      if ((m.is_one() && alpha.is_one()) || mag != 1) factors.push_back(scalar_to_string(mag));
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        factors.push_back(ctx.name(i) + (m[i] > 1 ? "^" + std::to_string(m[i]) : ""));
      }
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0) continue;
        factors.push_back(shape_->vars[i] + (alpha[i] > 1 ? "^" + std::to_string(alpha[i]) : ""));
      }
      for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
    }
  }
  return os.str();
}

// ----------------------------------------------------------------- SkewRing

namespace {

std::shared_ptr<const SkewShape> make_shape(const QuotientRing& base,
                                            std::vector<std::string> vars) {
  std::set<std::string> seen(base.context().names().begin(), base.context().names().end());
  for (const auto& v : vars) {
    if (v.empty()) throw std::invalid_argument("empty skew variable name");
    if (!seen.insert(v).second)
      throw std::invalid_argument("skew variable name '" + v + "' is already in use");
  }
  return std::make_shared<const SkewShape>(SkewShape{base, std::move(vars)});
}

mpz_class binomial(std::uint64_t n, std::uint64_t k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

}  // namespace

SkewRing SkewRing::build(const QuotientRing& base, std::vector<std::string> vars,
                         std::vector<Derivation> ders) {
  if (vars.size() != ders.size())
    throw std::invalid_argument("one derivation per skew variable is required");
  for (const auto& d : ders)
    if (!(d.ring() == base)) throw ContextMismatch("derivation is not defined on the base ring");
  CommutingReport report = commuting_set_check(ders);
  if (!report.commuting)
    throw NonCommutingDerivations(report.pair->first, report.pair->second, *report.generator,
                                  *report.image);
  return SkewRing(make_shape(base, std::move(vars)), std::move(ders));
}

SkewPoly SkewRing::from_base(const Poly& r) const {
  SkewPoly out(shape_);
  out.add_term(Monomial(num_vars()), r);
  return out;
}

SkewPoly SkewRing::skew_variable(std::size_t i) const {
  SkewPoly out(shape_);
  out.add_term(Monomial::unit(num_vars(), i), base().one());
  return out;
}

SkewPoly SkewRing::base_variable(std::size_t i) const { return from_base(base().variable(i)); }

namespace {

void require_ring(const SkewRing& S, const SkewPoly& u) {
  if (u.shape() != S.shape()) throw ContextMismatch("element does not belong to this skew ring");
}

// x^alpha r, pushing x_n first and working down to x_1.
SkewPoly push_monomial(const SkewRing& S, const Monomial& alpha, const Poly& r) {
  const std::size_t n = S.num_vars();
  SkewPoly current = S.from_base(r);
  for (std::size_t i = n; i-- > 0;) {
    if (alpha[i] == 0) continue;
    SkewPoly next = S.zero();
    for (const auto& [gamma, c] : current.terms()) {
      SkewPoly pushed = binomial_push(S, i, alpha[i], c);
      for (const auto& [e, c2] : pushed.terms()) next.add_term(gamma * e, c2);
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace

SkewPoly binomial_push(const SkewRing& S, std::size_t i, std::uint64_t n, const Poly& r) {
  if (i >= S.num_vars()) throw std::out_of_range("skew variable index out of range");
  const Derivation& d = S.derivations()[i];
  SkewPoly out = S.zero();
  Poly dk = S.base().reduce(r);
  for (std::uint64_t k = 0; k <= n && !dk.is_zero(); ++k) {
    Monomial e = Monomial::unit(S.num_vars(), i, static_cast<std::uint32_t>(n - k));
    out.add_term(e, dk.scaled(Scalar(binomial(n, k))));
    dk = d.apply(dk);
  }
  return out;
}

SkewPoly skew_mul(const SkewRing& S, const SkewPoly& u, const SkewPoly& v) {
  require_ring(S, u);
  require_ring(S, v);
  SkewPoly out = S.zero();
  for (const auto& [alpha, r] : u.terms()) {
    for (const auto& [beta, s] : v.terms()) {
      SkewPoly pushed = push_monomial(S, alpha, s);
      for (const auto& [gamma, c] : pushed.terms()) out.add_term(gamma * beta, r * c);
    }
  }
  return out;
}

SkewPoly skew_commutator(const SkewRing& S, const SkewPoly& u, const SkewPoly& v) {
  return skew_mul(S, u, v) - skew_mul(S, v, u);
}

SkewRing weyl_algebra(std::size_t n, const FieldSpec& field) {
  if (n == 0) throw std::invalid_argument("Weyl algebra index must be at least 1");
  std::vector<std::string> ys, xs;
  for (std::size_t i = 1; i <= n; ++i) {
    ys.push_back(n == 1 ? "y" : "y" + std::to_string(i));
    xs.push_back(n == 1 ? "x" : "x" + std::to_string(i));
  }
  QuotientRing base(VarContext(ys, field));
  std::vector<Derivation> ders;
  for (std::size_t i = 0; i < n; ++i) ders.push_back(Derivation::partial(base, i));
  return SkewRing::build(base, xs, std::move(ders));
}

// ------------------------------------------------------ derivation extension

SkewPoly ExtendedDerivation::apply(const SkewPoly& u) const {
  require_ring(ring_, u);
  SkewPoly out = ring_.zero();
  for (const auto& [alpha, r] : u.terms()) out.add_term(alpha, d_.apply(r));
  return out;
}

ExtendedDerivation extend_derivation(const Derivation& d, const SkewRing& S) {
  if (!(d.ring() == S.base())) throw ContextMismatch("derivation is not defined on the base ring");
  for (std::size_t i = 0; i < S.num_vars(); ++i) {
    Derivation c = commutator(d, S.derivations()[i]);
    for (std::size_t g = 0; g < c.images().size(); ++g)
      if (!c.images()[g].is_zero()) throw NonCommutingExtension(i, g, c.images()[g]);
  }
  return ExtendedDerivation(S, d);
}

// -------------------------------------------------------- inner derivations

InnerAnalysis inner_induced(const SkewRing& S, const SkewPoly& f) {
  require_ring(S, f);
  InnerAnalysis out{f, false, std::nullopt, std::nullopt, std::nullopt};
  const QuotientRing& R = S.base();
  std::vector<Poly> images;
  for (std::size_t i = 0; i < R.context().size(); ++i) {
    SkewPoly comm = skew_commutator(S, f, S.base_variable(i));
    if (comm.x_degree() > 0) {
      out.generator = i;
      out.residual = std::move(comm);
      return out;
    }
    images.push_back(comm.coefficient(Monomial(S.num_vars())));
  }
  out.induced = true;
  out.derivation = Derivation(R, std::move(images));
  return out;
}

CoefficientResiduals coefficient_residuals(const SkewRing& S, const SkewPoly& f, const Poly& r) {
  if (S.num_vars() != 1) throw MathError("coefficient residuals need a single skew variable");
  require_ring(S, f);
  SkewPoly comm = skew_commutator(S, f, S.from_base(r));
  CoefficientResiduals out{comm.coefficient(Monomial(1)), {}};
  for (long k = 1; k <= f.x_degree(); ++k)
    out.residuals.push_back(comm.coefficient(Monomial::unit(1, 0, static_cast<std::uint32_t>(k))));
  return out;
}

// ------------------------------------------------------------ OreExtension

OreExtension::OreExtension(const QuotientRing& base, std::string var, RingEndomorphism f,
                           SkewMap d)
    : shape_(make_shape(base, {std::move(var)})), f_(std::move(f)), d_(std::move(d)) {
  if (!base.is_polynomial_ring())
    throw MathError("Ore extensions with an endomorphism need a polynomial base ring");
  require_same_context(base.context(), f_.context());
  injectivity_ = endo_injectivity(f_);
  if (injectivity_ == Injectivity::NotInjective) throw NotInjective();
  if (const auto* der = std::get_if<Derivation>(&d_)) {
    if (!f_.is_identity()) throw MathError("an ordinary derivation requires f = id");
    if (!(der->ring() == base)) throw ContextMismatch("derivation is not defined on the base ring");
  } else if (const auto* sd = std::get_if<SkewDerivation>(&d_)) {
    if (!(sd->endomorphism() == f_))
      throw MathError("skew derivation must be twisted by the same endomorphism");
  }
}

bool OreExtension::derivation_is_zero() const {
  if (const auto* der = std::get_if<Derivation>(&d_)) return der->is_zero();
  if (const auto* sd = std::get_if<SkewDerivation>(&d_)) return sd->is_zero();
  return true;
}

SkewPoly OreExtension::from_base(const Poly& r) const {
  SkewPoly out(shape_);
  out.add_term(Monomial(1), r);
  return out;
}

SkewPoly OreExtension::skew_variable() const {
  SkewPoly out(shape_);
  out.add_term(Monomial::unit(1, 0), base().one());
  return out;
}

Poly OreExtension::apply_f(const Poly& r) const { return f_.apply(r); }

Poly OreExtension::apply_d(const Poly& r) const {
  if (const auto* der = std::get_if<Derivation>(&d_)) return der->apply(r);
  if (const auto* sd = std::get_if<SkewDerivation>(&d_)) return sd->apply(r);
  return Poly(base().context());
}

SkewPoly ore_push(const OreExtension& O, std::uint64_t n, const Poly& r) {
  SkewPoly current = O.from_base(r);
  for (std::uint64_t step = 0; step < n; ++step) {
    SkewPoly next = O.zero();
    for (const auto& [alpha, c] : current.terms()) {
      next.add_term(Monomial::unit(1, 0, alpha[0] + 1), O.apply_f(c));
      next.add_term(alpha, O.apply_d(c));
    }
    current = std::move(next);
  }
  return current;
}

SkewPoly endo_skew_mul(const OreExtension& O, const SkewPoly& u, const SkewPoly& v) {
  if (u.shape() != O.shape() || v.shape() != O.shape())
    throw ContextMismatch("element does not belong to this Ore extension");
  const bool closed = O.derivation_is_zero();
  SkewPoly out = O.zero();
  for (const auto& [alpha, r] : u.terms()) {
    for (const auto& [beta, s] : v.terms()) {
      if (closed) {
        out.add_term(alpha * beta, r * O.endomorphism().apply_power(s, alpha[0]));
        continue;
      }
      SkewPoly pushed = ore_push(O, alpha[0], s);
      for (const auto& [gamma, c] : pushed.terms()) out.add_term(gamma * beta, r * c);
    }
  }
  return out;
}

// --------------------------------------------------------------- simplicity

SimplicityVerdict skew_simplicity(const SkewRing& S, const GroebnerOptions& opts) {
  SimplicityVerdict v;
  const QuotientRing& R = S.base();
  const auto& ders = S.derivations();
  if (R.field().characteristic() != 0) {
    v.reason = "prime characteristic base not supported";
    return v;
  }
  if (R.is_zero_ring()) {
    v.reason = "zero ring";
    return v;
  }
  if (ders.empty()) {
    v.reason = "no skew variables";
    return v;
  }
  if (R.is_polynomial_ring()) {
    bool all = true;
    for (std::size_t i = 0; i < R.context().size() && all; ++i) {
      Derivation p = Derivation::partial(R, i);
      all = std::find(ders.begin(), ders.end(), p) != ders.end();
    }
    if (all) {
      v.status = Verdict::Simple;
      v.criterion = "all partial derivatives on a polynomial ring";
      return v;
    }
  }
  if (krull_dimension(R.basis()) == 1) {
    for (const auto& d : ders) {
      SimplicityVerdict base = fg_dim1_simplicity(R, d, opts);
      if (base.status != Verdict::Simple) continue;
      v.status = Verdict::Simple;
      v.criterion = "base ring simple for one derivation by the unit-ideal criterion in dimension 1";
      v.unit = std::move(base.unit);
      v.diagnostics = std::move(base.diagnostics);
      return v;
    }
  }
  if (auto w = find_stable_ideal_witness(R, ders, opts)) {
    v.status = Verdict::NotSimple;
    v.criterion = "proper nonzero ideal of the base stable under every derivation";
    v.witness = std::move(*w);
    return v;
  }
  v.reason = "no decidable criterion applies";
  return v;
}

}  // namespace skewalg
