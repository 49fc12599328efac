#include "skewalg/groebner.hpp"

#include <algorithm>
#include <cstdint>

namespace skewalg {

namespace {

struct Term {
  Monomial m;
  Scalar c;
};

// Terms in ascending term order; the leading term is back().
using Terms = std::vector<Term>;

struct OrderedView {
  TermOrder order;
  const FieldSpec* field;

  bool less(const Monomial& a, const Monomial& b) const {
    return compare_monomials(a, b, order) < 0;
  }

  Terms from_poly(const Poly& p) const {
    Terms t;
    t.reserve(p.num_terms());
    for (const auto& [m, c] : p.terms()) t.push_back({m, c});
    std::sort(t.begin(), t.end(), [&](const Term& a, const Term& b) { return less(a.m, b.m); });
    return t;
  }

  Poly to_poly(const VarContext& ctx, const Terms& t) const {
    Poly p(ctx);
    for (const auto& term : t) p.add_term(term.m, term.c);
    return p;
  }

  // f - c * mono * g
  Terms sub_scaled(const Terms& f, const Scalar& c, const Monomial& mono, const Terms& g) const {
    Terms out;
    out.reserve(f.size() + g.size());
    std::size_t i = 0, j = 0;
    while (i < f.size() || j < g.size()) {
      if (j == g.size()) {
        out.push_back(f[i++]);
        continue;
      }
      Monomial gm = g[j].m * mono;
      if (i == f.size() || less(gm, f[i].m)) {
        out.push_back({std::move(gm), field->neg(field->mul(c, g[j].c))});
        ++j;
        continue;
      }
      if (less(f[i].m, gm)) {
        out.push_back(f[i++]);
        continue;
      }
      Scalar v = field->sub(f[i].c, field->mul(c, g[j].c));
      if (v != 0) out.push_back({f[i].m, std::move(v)});
      ++i;
      ++j;
    }
    return out;
  }

  void make_monic(Terms& t, std::vector<Poly>* cof) const {
    if (t.empty()) return;
    Scalar inv = field->inv(t.back().c);
    if (inv == 1) return;
    for (auto& term : t) term.c = field->mul(term.c, inv);
    if (cof)
      for (auto& p : *cof) p = p.scaled(inv);
  }
};

struct Entry {
  Terms terms;
  Monomial lead;
  std::vector<Poly> cof;
};

struct EngineOutput {
  std::vector<Poly> basis;
  std::vector<Monomial> leads;
  std::optional<std::vector<std::vector<Poly>>> cof;
};

struct Pair {
  std::size_t i, j;
  Monomial lcm;
  std::uint64_t degree;
};

class Engine {
 public:
  Engine(const VarContext& ctx, const GroebnerOptions& opts)
      : ctx_(ctx), opts_(opts), view_{opts.order, &ctx.field()} {}

  // Fully reduces f (and its cofactors) by the active basis.
  Terms reduce(Terms f, std::vector<Poly>* cof, const std::vector<std::size_t>& basis,
               std::optional<std::size_t> skip = std::nullopt) {
    Terms done;  // collected in descending order
    while (!f.empty()) {
      const Term& lt = f.back();
      const Entry* div = nullptr;
      for (std::size_t idx : basis) {
        if (skip && idx == *skip) continue;
        if (entries_[idx].lead.divides(lt.m)) {
          div = &entries_[idx];
          break;
        }
      }
      if (!div) {
        done.push_back(lt);
        f.pop_back();
        continue;
      }
      Scalar q = lt.c;  // basis elements are monic
      Monomial mono = lt.m / div->lead;
      if (cof) {
        for (std::size_t k = 0; k < cof->size(); ++k)
          if (!div->cof[k].is_zero()) (*cof)[k] -= div->cof[k].times_monomial(mono, q);
      }
      f.pop_back();
      Terms tail(div->terms.begin(), div->terms.end() - 1);
      f = view_.sub_scaled(f, q, mono, tail);
    }
    std::reverse(done.begin(), done.end());
    return done;
  }

  EngineOutput run(const std::vector<Poly>& gens) {
    const std::size_t ninputs = gens.size();
    for (std::size_t k = 0; k < ninputs; ++k) {
      if (gens[k].is_zero()) continue;
      Entry e;
      e.terms = view_.from_poly(gens[k]);
      if (opts_.track_cofactors) {
        e.cof.assign(ninputs, Poly(ctx_));
        e.cof[k] = Poly::constant(ctx_, 1);
      }
      e.terms = reduce(std::move(e.terms), opts_.track_cofactors ? &e.cof : nullptr, active_);
      if (e.terms.empty()) continue;
      view_.make_monic(e.terms, opts_.track_cofactors ? &e.cof : nullptr);
      e.lead = e.terms.back().m;
      if (e.lead.is_one()) return unit_result(std::move(e));
      insert(std::move(e));
    }

    std::size_t steps = 0;
    while (!pairs_.empty()) {
      auto best = std::min_element(pairs_.begin(), pairs_.end(), [&](const Pair& a, const Pair& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        int c = compare_monomials(a.lcm, b.lcm, opts_.order);
        if (c != 0) return c < 0;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
      });
      Pair p = *best;
      pairs_.erase(best);
      if (++steps > opts_.budget) throw BudgetExhausted(opts_.budget);

      const Entry& a = entries_[p.i];
      const Entry& b = entries_[p.j];
      Monomial ma = p.lcm / a.lead, mb = p.lcm / b.lead;
      Terms sa = view_.sub_scaled({}, Scalar(-1), ma, a.terms);
      Terms s = view_.sub_scaled(sa, Scalar(1), mb, b.terms);
      std::vector<Poly> cof;
      if (opts_.track_cofactors) {
        cof.assign(ninputs, Poly(ctx_));
        for (std::size_t k = 0; k < ninputs; ++k)
          cof[k] = a.cof[k].times_monomial(ma, Scalar(1)) - b.cof[k].times_monomial(mb, Scalar(1));
      }
      s = reduce(std::move(s), opts_.track_cofactors ? &cof : nullptr, active_);
      if (s.empty()) continue;
      Entry e;
      e.terms = std::move(s);
      e.cof = std::move(cof);
      view_.make_monic(e.terms, opts_.track_cofactors ? &e.cof : nullptr);
      e.lead = e.terms.back().m;
      if (e.lead.is_one()) return unit_result(std::move(e));
      insert(std::move(e));
    }
    return finish();
  }

 private:
  EngineOutput unit_result(Entry e) {
    EngineOutput out;
    out.basis = {Poly::constant(ctx_, 1)};
    out.leads = {Monomial(ctx_.size())};
    if (opts_.track_cofactors) out.cof = std::vector<std::vector<Poly>>{std::move(e.cof)};
    return out;
  }

  EngineOutput finish() {
    // Inter-reduce the minimal basis.
    std::vector<std::size_t> basis = active_;
    for (std::size_t idx : basis) {
      Entry& e = entries_[idx];
      Term lt = e.terms.back();
      Terms tail(e.terms.begin(), e.terms.end() - 1);
      std::vector<Poly>* cof = opts_.track_cofactors ? &e.cof : nullptr;
      Terms reduced = reduce(std::move(tail), cof, basis, idx);
      reduced.push_back(std::move(lt));
      e.terms = std::move(reduced);
    }
    std::sort(basis.begin(), basis.end(), [&](std::size_t a, std::size_t b) {
      return compare_monomials(entries_[a].lead, entries_[b].lead, opts_.order) > 0;
    });
    EngineOutput out;
    std::vector<std::vector<Poly>> cofs;
    for (std::size_t idx : basis) {
      out.basis.push_back(view_.to_poly(ctx_, entries_[idx].terms));
      out.leads.push_back(entries_[idx].lead);
      if (opts_.track_cofactors) cofs.push_back(entries_[idx].cof);
    }
    if (opts_.track_cofactors) out.cof = std::move(cofs);
    return out;
  }

  // Gebauer-Moeller update.
  void insert(Entry h) {
    const std::size_t hi = entries_.size();
    entries_.push_back(std::move(h));
    const Monomial& lh = entries_[hi].lead;

    std::vector<Pair> cands;
    for (std::size_t g : active_) {
      Monomial l = lcm(lh, entries_[g].lead);
      cands.push_back({g, hi, l, l.degree()});
    }
    // Chain criterion among the new pairs.
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < cands.size(); ++a) {
      const Pair& p = cands[a];
      bool coprime = lh.coprime(entries_[p.i].lead);
      bool dominated = false;
      if (!coprime) {
        for (std::size_t b = 0; b < cands.size() && !dominated; ++b) {
          if (b == a) continue;
          const Pair& q = cands[b];
          if (!q.lcm.divides(p.lcm)) continue;
          // Ties between equal lcms are broken by index so one survives.
          if (q.lcm == p.lcm && b > a) continue;
          dominated = true;
        }
      }
      if (!dominated) kept.push_back(p);
    }
    // Product criterion.
    std::vector<Pair> fresh;
    for (auto& p : kept)
      if (!lh.coprime(entries_[p.i].lead)) fresh.push_back(std::move(p));
    // Old pairs made redundant by h.
    std::vector<Pair> old;
    for (auto& p : pairs_) {
      bool drop = lh.divides(p.lcm) && !(lcm(entries_[p.i].lead, lh) == p.lcm) &&
                  !(lcm(entries_[p.j].lead, lh) == p.lcm);
      if (!drop) old.push_back(std::move(p));
    }
    pairs_ = std::move(old);
    for (auto& p : fresh) pairs_.push_back(std::move(p));

    std::vector<std::size_t> still;
    for (std::size_t g : active_)
      if (!lh.divides(entries_[g].lead)) still.push_back(g);
    still.push_back(hi);
    active_ = std::move(still);
  }

  VarContext ctx_;
  GroebnerOptions opts_;
  OrderedView view_;
  std::vector<Entry> entries_;
  std::vector<std::size_t> active_;
  std::vector<Pair> pairs_;

};

}  // namespace

bool GroebnerBasis::is_unit() const {
  return basis_.size() == 1 && basis_.front().is_constant() && !basis_.front().is_zero();
}

GroebnerBasis buchberger(const VarContext& ctx, const std::vector<Poly>& gens,
                         const GroebnerOptions& opts) {
  for (const auto& g : gens) require_same_context(ctx, g.context());
  Engine engine(ctx, opts);
  EngineOutput out = engine.run(gens);
  GroebnerBasis gb(ctx, opts.order);
  gb.basis_ = std::move(out.basis);
  gb.leads_ = std::move(out.leads);
  gb.inputs_ = gens;
  gb.cofactors_ = std::move(out.cof);
  return gb;
}

GroebnerBasis buchberger(const IdealHandle& ideal, const GroebnerOptions& opts) {
  return buchberger(ideal.context(), ideal.generators(), opts);
}

IdealHandle::IdealHandle(VarContext ctx, std::vector<Poly> gens) : ctx_(std::move(ctx)) {
  for (auto& g : gens) {
    require_same_context(ctx_, g.context());
    if (!g.is_zero()) gens_.push_back(std::move(g));
  }
}

Division divide(const Poly& f, const GroebnerBasis& g) {
  require_same_context(f.context(), g.context());
  const VarContext& ctx = g.context();
  OrderedView view{g.order(), &ctx.field()};
  std::vector<Terms> basis;
  for (const auto& p : g.polys()) basis.push_back(view.from_poly(p));

  Division out{std::vector<Poly>(basis.size(), Poly(ctx)), Poly(ctx)};
  Terms rest = view.from_poly(f);
  while (!rest.empty()) {
    const Term lt = rest.back();
    std::size_t k = 0;
    while (k < basis.size() && !g.leading_monomials()[k].divides(lt.m)) ++k;
    if (k == basis.size()) {
      out.remainder.add_term(lt.m, lt.c);
      rest.pop_back();
      continue;
    }
    Monomial mono = lt.m / g.leading_monomials()[k];
    out.quotients[k].add_term(mono, lt.c);
    rest.pop_back();
    Terms tail(basis[k].begin(), basis[k].end() - 1);
    rest = view.sub_scaled(rest, lt.c, mono, tail);
  }
  return out;
}

Poly normal_form(const Poly& f, const GroebnerBasis& g) { return divide(f, g).remainder; }

bool ideal_member(const Poly& f, const IdealHandle& ideal, const GroebnerOptions& opts) {
  require_same_context(f.context(), ideal.context());
  return normal_form(f, buchberger(ideal, opts)).is_zero();
}

bool is_unit_ideal(const IdealHandle& ideal, const GroebnerOptions& opts) {
  return buchberger(ideal, opts).is_unit();
}

std::optional<std::vector<Poly>> unit_ideal_witness(const IdealHandle& ideal,
                                                    const GroebnerOptions& opts) {
  GroebnerOptions o = opts;
  o.track_cofactors = true;
  GroebnerBasis gb = buchberger(ideal, o);
  if (!gb.is_unit()) return std::nullopt;
  // The unit element is monic, so its cofactors already sum to 1.
  return gb.cofactors()->front();
}

std::vector<std::size_t> independent_variables(const GroebnerBasis& g) {
  if (g.is_unit()) throw UnitIdealHasNoDimension();
  const std::size_t n = g.context().size();
  if (n > 30) throw MathError("too many variables for the independent-set search");
  std::vector<std::uint32_t> supports;
  for (const auto& m : g.leading_monomials()) {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (m[i] > 0) s |= 1u << i;
    supports.push_back(s);
  }
  std::uint32_t best = 0;
  int best_size = -1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    auto s = static_cast<std::uint32_t>(mask);
    int size = __builtin_popcount(s);
    if (size <= best_size) continue;
    bool independent = std::none_of(supports.begin(), supports.end(),
                                     [&](std::uint32_t sup) { return (sup & ~s) == 0; });
    if (independent) {
      best = s;
      best_size = size;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i)
    if (best & (1u << i)) out.push_back(i);
  return out;
}

std::size_t krull_dimension(const GroebnerBasis& g) { return independent_variables(g).size(); }

std::size_t krull_dimension(const IdealHandle& ideal, const GroebnerOptions& opts) {
  return krull_dimension(buchberger(ideal, opts));
}

QuotientRing::QuotientRing(VarContext ctx, TermOrder order)
    : ctx_(ctx), ideal_(ctx), basis_(ctx, order) {}

QuotientRing::QuotientRing(IdealHandle ideal, const GroebnerOptions& opts)
    : ctx_(ideal.context()), ideal_(ideal), basis_(buchberger(ideal, opts)) {}

Poly QuotientRing::reduce(const Poly& f) const {
  require_same_context(ctx_, f.context());
  if (basis_.is_zero_ideal()) return f;
  return normal_form(f, basis_);
}

Poly quotient_reduce(const QuotientRing& q, const Poly& f) { return q.reduce(f); }

}  // namespace skewalg
