#include <algorithm>
#include <map>

#include "skewalg/simplicity.hpp"

namespace skewalg {

std::string to_string(DarbouxStatus s) {
  switch (s) {
    case DarbouxStatus::Found: return "Found";
    case DarbouxStatus::NoneUpToBound: return "NoneUpToBound";
    case DarbouxStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Derivation darboux_derivation(const Poly& F) {
  const VarContext& ctx = F.context();
  if (ctx.size() != 2) throw MathError("Darboux search works in k[x, y]: two variables expected");
  return Derivation(QuotientRing(ctx), {Poly::constant(ctx, 1), F});
}

namespace {

// Divisors of a positive integer, or nullopt when it is too large to factor
// by trial division.
std::optional<std::vector<mpz_class>> divisors(mpz_class n) {
  if (n < 0) n = -n;
  if (n > mpz_class("1000000000000")) return std::nullopt;
  std::vector<mpz_class> out;
  for (mpz_class d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d * d != n) out.push_back(n / d);
  }
  return out;
}

struct RootSearch {
  std::vector<Scalar> roots;
  bool complete = true;
};

// Rational roots of a univariate polynomial (variable `var` of its context).
RootSearch rational_roots(const Poly& p, std::size_t var) {
  std::map<std::uint32_t, Scalar> coeff;
  for (const auto& [m, c] : p.terms()) coeff[m[var]] += c;
  RootSearch out;
  std::uint32_t low = coeff.begin()->first;
  if (low > 0) out.roots.push_back(Scalar(0));
  mpz_class den_lcm = 1;
  for (const auto& [e, c] : coeff) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
  mpz_class c0 = mpz_class(coeff.begin()->second * den_lcm);
  mpz_class cn = mpz_class(coeff.rbegin()->second * den_lcm);
  if (coeff.size() == 1) return out;
  auto num_divs = divisors(c0);
  auto den_divs = divisors(cn);
  if (!num_divs || !den_divs) {
    out.complete = false;
    return out;
  }
  auto eval = [&](const Scalar& t) {
    Scalar acc = 0;
    for (const auto& [e, c] : coeff) {
      Scalar pw = 1;
      for (std::uint32_t k = 0; k < e; ++k) pw *= t;
      acc += c * pw;
    }
    return acc;
  };
  std::vector<Scalar> found;
  for (const auto& a : *num_divs)
    for (const auto& b : *den_divs)
      for (int sign : {1, -1}) {
        Scalar t(mpz_class(sign * a), b);
        t.canonicalize();
        if (std::find(found.begin(), found.end(), t) != found.end()) continue;
        if (eval(t) == 0) found.push_back(t);
      }
  std::sort(found.begin(), found.end());
  for (auto& t : found) out.roots.push_back(t);
  return out;
}

struct PointSearch {
  std::optional<std::vector<Scalar>> point;
  bool exhausted_candidates = false;
};

// Backtracking search for a rational zero of the system, fixing variables
// from the last (smallest in lex) to the first.
void search_point(const VarContext& ctx, std::vector<Poly> system, std::size_t remaining,
                  std::vector<Scalar>& values, const GroebnerOptions& opts, PointSearch& out) {
  GroebnerOptions lex = opts;
  lex.order = TermOrder::Lex;
  lex.track_cofactors = false;
  GroebnerBasis gb = buchberger(ctx, system, lex);
  if (gb.is_unit()) return;
  if (remaining == 0) {
    out.point = values;
    return;
  }
  const std::size_t var = remaining - 1;
  std::vector<Scalar> candidates;
  const Poly* univariate = nullptr;
  for (const auto& g : gb.polys()) {
    bool only_var = true;
    for (std::size_t k = 0; k < ctx.size() && only_var; ++k)
      if (k != var && g.uses_variable(k)) only_var = false;
    if (only_var && g.uses_variable(var)) {
      univariate = &g;
      break;
    }
  }
  if (univariate) {
    RootSearch rs = rational_roots(*univariate, var);
    if (!rs.complete) out.exhausted_candidates = true;
    candidates = rs.roots;
    if (candidates.empty()) out.exhausted_candidates = true;
  } else {
    for (long v : {0L, 1L, -1L, 2L, -2L, 3L, -3L}) candidates.push_back(Scalar(v));
  }
  for (const auto& c : candidates) {
    std::vector<Poly> next = gb.polys();
    next.push_back(Poly::variable(ctx, var) - Poly::constant(ctx, c));
    values[var] = c;
    search_point(ctx, std::move(next), remaining - 1, values, opts, out);
    if (out.point) return;
  }
  if (!univariate) out.exhausted_candidates = true;
}

// Grevlex-ascending list of monomials x^i y^j with i + j <= n.
std::vector<Monomial> monomials_up_to(std::size_t n) {
  std::vector<Monomial> out;
  for (std::uint32_t d = 0; d <= n; ++d)
    for (std::uint32_t i = 0; i <= d; ++i) out.push_back(Monomial(std::vector<std::uint32_t>{i, d - i}));
  std::sort(out.begin(), out.end(), [](const Monomial& a, const Monomial& b) {
    return compare_monomials(a, b, TermOrder::GrevLex) < 0;
  });
  return out;
}

std::string mono_tag(const Monomial& m) {
  return std::to_string(m[0]) + "_" + std::to_string(m[1]);
}

}  // namespace

DarbouxResult darboux_search(const Poly& F, unsigned bound, const GroebnerOptions& opts) {
  const VarContext& ctx = F.context();
  if (ctx.size() != 2) throw MathError("Darboux search works in k[x, y]: two variables expected");
  if (ctx.field().characteristic() != 0) throw MathError("Darboux search needs characteristic 0");
  if (bound < 1) throw MathError("Darboux degree bound must be at least 1");
  const Derivation d = darboux_derivation(F);

  DarbouxResult result;
  result.bound = bound;
  const long degF = F.total_degree();
  const std::size_t cof_deg = std::min<std::size_t>(static_cast<std::size_t>(std::max(degF - 1, 0L)), bound);

  const std::vector<Monomial> h_monos = monomials_up_to(bound);
  const std::vector<Monomial> l_monos = monomials_up_to(cof_deg);
  bool inconclusive = false;

  // Candidate leading monomials of h, smallest first; h is monic in grevlex.
  for (std::size_t lead = 1; lead < h_monos.size(); ++lead) {
    // Unknowns: coefficients of the smaller h monomials, then of the cofactor.
    std::vector<std::string> names{ctx.name(0), ctx.name(1)};
    for (std::size_t k = 0; k < lead; ++k) names.push_back("h" + mono_tag(h_monos[k]));
    for (const auto& m : l_monos) names.push_back("c" + mono_tag(m));
    VarContext big(names, ctx.field());
    const std::size_t nunknowns = names.size() - 2;
    auto lift = [&](const Monomial& xy, std::size_t unknown) {
      Monomial m(big.size());
      m[0] = xy[0];
      m[1] = xy[1];
      if (unknown != SIZE_MAX) m[2 + unknown] = 1;
      return m;
    };
    Poly H = Poly::term(big, lift(h_monos[lead], SIZE_MAX), Scalar(1));
    for (std::size_t k = 0; k < lead; ++k) H += Poly::term(big, lift(h_monos[k], k), Scalar(1));
    Poly L(big);
    for (std::size_t k = 0; k < l_monos.size(); ++k) L += Poly::term(big, lift(l_monos[k], lead + k), Scalar(1));
    Poly Fbig(big);
    for (const auto& [m, c] : F.terms()) Fbig += Poly::term(big, lift(m, SIZE_MAX), c);
    Poly residual = partial(H, 0) + Fbig * partial(H, 1) - L * H;

    // One equation per monomial in x, y.
    VarContext unknowns(std::vector<std::string>(names.begin() + 2, names.end()), ctx.field());
    std::map<std::pair<std::uint32_t, std::uint32_t>, Poly> eqs;
    for (const auto& [m, c] : residual.terms()) {
      Monomial u(std::vector<std::uint32_t>(m.exponents().begin() + 2, m.exponents().end()));
      auto [it, _] = eqs.try_emplace({m[0], m[1]}, unknowns);
      it->second += Poly::term(unknowns, u, c);
    }
    std::vector<Poly> system;
    for (auto& [k, p] : eqs) system.push_back(std::move(p));

    GroebnerOptions g = opts;
    g.track_cofactors = false;
    if (buchberger(unknowns, system, g).is_unit()) continue;

    PointSearch ps;
    std::vector<Scalar> values(nunknowns, Scalar(0));
    search_point(unknowns, system, nunknowns, values, g, ps);
    if (!ps.point) {
      inconclusive = true;
      continue;
    }
    const auto& val = *ps.point;
    Poly h = Poly::term(ctx, h_monos[lead], Scalar(1));
    for (std::size_t k = 0; k < lead; ++k) h += Poly::term(ctx, h_monos[k], val[k]);
    Poly lam(ctx);
    for (std::size_t k = 0; k < l_monos.size(); ++k) lam += Poly::term(ctx, l_monos[k], val[lead + k]);
    if (!(d.apply(h) == lam * h) || h.is_constant())
      throw std::logic_error("Darboux candidate failed verification");
    result.status = DarbouxStatus::Found;
    result.h = std::move(h);
    result.cofactor = std::move(lam);
    return result;
  }
  if (inconclusive) {
    result.status = DarbouxStatus::Inconclusive;
    result.reason = "solutions exist only outside the rational search grid";
  } else {
    result.status = DarbouxStatus::NoneUpToBound;
  }
  return result;
}

}  // namespace skewalg
