// Acceptance runner: one PASS/FAIL line per criterion; exit status 1 if any fails.
// Usage: acceptance <session.sk>  (expected output is <session>.jsonl)

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <gmpxx.h>

#include "oracles.hpp"
#include "skewalg/session.hpp"
#include "support.hpp"

using namespace skewalg;
using namespace testing_support;

namespace {

std::string session_path;

// Collects the first failed expectation of a criterion.
struct Check {
  std::string failure;
  void expect(bool ok, const std::string& what) {
    if (!ok && failure.empty()) failure = what;
  }
};

SkewPoly random_skew(const SkewRing& S, std::mt19937& rng, unsigned xdeg, unsigned ydeg) {
  std::uniform_int_distribution<unsigned> d(0, xdeg);
  SkewPoly out = S.zero();
  for (int t = 0; t < 3; ++t) {
    unsigned budget = d(rng);
    Monomial a(S.num_vars());
    for (std::size_t v = 0; v < S.num_vars() && budget; ++v) {
      std::uniform_int_distribution<unsigned> e(0, budget);
      a[v] = e(rng);
      budget -= a[v];
    }
    out.add_term(a, random_poly(S.base().context(), rng, ydeg, 2));
  }
  return out;
}

void weyl_relations(Check& c) {
  for (std::size_t n = 1; n <= 3; ++n) {
    SkewRing A = weyl_algebra(n, FieldSpec::rationals());
    const SkewPoly one = A.from_base(A.base().one());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::string at = "n=" + std::to_string(n) + " i=" + std::to_string(i + 1) +
                               " j=" + std::to_string(j + 1);
        SkewPoly xy = skew_mul(A, A.skew_variable(i), A.base_variable(j)) -
                      skew_mul(A, A.base_variable(j), A.skew_variable(i));
        c.expect(xy == (i == j ? one : A.zero()), "[x_i, y_j] at " + at);
        c.expect(skew_commutator(A, A.skew_variable(i), A.skew_variable(j)).is_zero(),
                 "[x_i, x_j] at " + at);
      }
  }
  SkewRing A2 = weyl_algebra(2, FieldSpec::rationals());
  SkewPoly x2x1 = skew_mul(A2, A2.skew_variable(1), A2.skew_variable(0));
  c.expect(x2x1 == skew_mul(A2, A2.skew_variable(0), A2.skew_variable(1)), "x2 x1 = x1 x2");
}

// x (x (... r)) with one rewrite x s = s x + d(s) per step.
SkewPoly single_step_push(const SkewRing& S, std::uint64_t n, const Poly& r) {
  const Derivation& d = S.derivations()[0];
  std::map<std::uint32_t, Poly> cur{{0, r}};
  for (std::uint64_t step = 0; step < n; ++step) {
    std::map<std::uint32_t, Poly> next;
    for (const auto& [k, s] : cur) {
      next.try_emplace(k + 1, Poly(s.context())).first->second += s;
      next.try_emplace(k, Poly(s.context())).first->second += d.apply(s);
    }
    cur = std::move(next);
  }
  SkewPoly out = S.zero();
  for (const auto& [k, s] : cur) out.add_term(Monomial::unit(1, 0, k), s);
  return out;
}

void binomial_push_oracle(Check& c) {
  std::mt19937 rng(2);
  SkewRing A1 = weyl_algebra(1, FieldSpec::rationals());
  QuotientRing yz(ctx({"y", "z"}));
  SkewRing other =
      SkewRing::build(yz, {"x"}, {Derivation(yz, {P(yz.context(), "z"), P(yz.context(), "y*z")})});
  for (const SkewRing* S : {&A1, &other})
    for (int t = 0; t < 50; ++t) {
      Poly r = random_poly(S->base().context(), rng, 4, 4);
      for (std::uint64_t n = 0; n <= 6; ++n)
        c.expect(binomial_push(*S, 0, n, r) == single_step_push(*S, n, r),
                 "n=" + std::to_string(n) + " r=" + r.to_string());
    }
}

void associativity(Check& c) {
  std::mt19937 rng(3);
  QuotientRing yz(ctx({"y", "z"}));
  const VarContext& v = yz.context();
  SkewRing custom = SkewRing::build(
      yz, {"s", "t"}, {Derivation(yz, {P(v, "z"), Poly(v)}), Derivation(yz, {P(v, "y"), P(v, "z")})});
  int n = 0;
  for (const SkewRing& S :
       {weyl_algebra(1, FieldSpec::rationals()), weyl_algebra(2, FieldSpec::rationals()), custom}) {
    for (int t = 0; t < 200; ++t) {
      SkewPoly u = random_skew(S, rng, 3, 2), w1 = random_skew(S, rng, 3, 2), w2 = random_skew(S, rng, 3, 2);
      c.expect(skew_mul(S, skew_mul(S, u, w1), w2) == skew_mul(S, u, skew_mul(S, w1, w2)),
               "triple " + std::to_string(n));
      ++n;
    }
  }
}

void commuting_gate(Check& c) {
  QuotientRing y12(ctx({"y1", "y2"}));
  const VarContext& v = y12.context();
  Derivation d1(y12, {P(v, "y2"), Poly(v)});
  Derivation d2(y12, {Poly(v), P(v, "y1")});
  try {
    SkewRing::build(y12, {"x1", "x2"}, {d1, d2});
    c.expect(false, "non-commuting pair accepted");
  } catch (const NonCommutingDerivations& e) {
    c.expect(e.generator() == 0 && e.image() == P(v, "-y1"), "witness is not -y1 at y1");
  }
  std::vector<Derivation> partials{Derivation::partial(y12, 0), Derivation::partial(y12, 1)};
  c.expect(commuting_set_check(partials).commuting, "partials reported non-commuting");
  SkewRing::build(y12, {"x1", "x2"}, partials);
}

void sphere_tangency(Check& c) {
  QuotientRing xyz(ctx({"x", "y", "z"}));
  const VarContext& v = xyz.context();
  const Poly s = P(v, "x^2 + y^2 + z^2 - 1");
  QuotientRing sphere(IdealHandle(v, {s}));
  for (const Derivation& d : {Derivation(xyz, {P(v, "y + z"), P(v, "z - x"), P(v, "-x - y")}),
                              Derivation(xyz, {P(v, "y + 2*z"), P(v, "x*y*z - x"), P(v, "-x*y^2 - 2*x")})}) {
    c.expect(d.apply(s).is_zero(), "d(sphere) != 0 for " + d.to_string());
    // Chain rule by hand: sum 2 v_i d(v_i).
    Poly direct = Poly(v);
    for (std::size_t i = 0; i < 3; ++i) direct += P(v, "2") * Poly::variable(v, i) * d.images()[i];
    c.expect(direct.is_zero(), "chain rule expansion nonzero");
    Derivation bar = induce_on_quotient(d, sphere);
    c.expect(bar.ring() == sphere, "induced on the wrong ring");
  }
}

void circle_simplicity(Check& c) {
  VarContext v = ctx({"x1", "x2"});
  const Poly rel = P(v, "x1^2 + x2^2 - 1");
  QuotientRing q(IdealHandle(v, {rel}));
  Derivation rot(q, {P(v, "-x2"), P(v, "x1")});
  c.expect(krull_dimension(q.ideal()) == 1, "dimension is not 1");
  SimplicityVerdict verdict = fg_dim1_simplicity(q, rot);
  c.expect(verdict.status == Verdict::Simple, "verdict is not Simple");
  c.expect(verdict.unit && verdict.unit->verify(), "unit witness missing or invalid");
  // 1 = x1*x1 + (-x2)*(-x2) - (x1^2 + x2^2 - 1), replayed through normal forms.
  const Poly combo = P(v, "x1") * P(v, "x1") + P(v, "-x2") * P(v, "-x2") - rel;
  c.expect(combo == P(v, "1"), "stated witness does not expand to 1");
  GroebnerBasis gb = buchberger(v, {P(v, "-x2"), P(v, "x1"), rel});
  c.expect(normal_form(P(v, "1"), gb).is_zero(), "1 not reduced to 0 by the image ideal");
  c.expect(q.reduce(P(v, "x1") * P(v, "x1") + P(v, "-x2") * P(v, "-x2")) == q.one(),
           "x1^2 + x2^2 != 1 in the ring");
}

void negative_control(Check& c) {
  QuotientRing y(ctx({"y"}));
  std::vector<Derivation> ds{Derivation(y, {P(y.context(), "y")})};
  SimplicityVerdict v = fg_dim1_simplicity(y, ds[0]);
  c.expect(v.status == Verdict::NotSimple, "base verdict is not NotSimple");
  c.expect(v.witness && buchberger(*v.witness) == buchberger(y.context(), {P(y.context(), "y")}),
           "witness is not (y)");
  c.expect(v.witness && is_proper_nonzero_d_ideal(*v.witness, ds), "witness is not a D-ideal");
  SkewRing S = SkewRing::build(y, {"x"}, ds);
  SimplicityVerdict sv = skew_simplicity(S);
  c.expect(sv.status == Verdict::NotSimple, "skew verdict is not NotSimple");
  c.expect(sv.witness && is_proper_nonzero_d_ideal(*sv.witness, ds), "skew witness invalid");
}

void certificates(Check& c) {
  std::mt19937 rng(8);
  VarContext v = ctx({"x1", "x2", "x3"});
  QuotientRing r(v);
  std::vector<Derivation> ds;
  for (std::size_t i = 0; i < 3; ++i) ds.push_back(Derivation::partial(r, i));
  for (int t = 0; t < 100; ++t) {
    Poly f = random_nonzero(v, rng, 5, 4);
    SimplicityCertificate cert = partials_certificate(f);
    // Replay with the plain formal partial, independent of Derivation.
    Poly g = f;
    for (std::size_t i : cert.word) g = partial(g, i);
    c.expect(!cert.final_constant.is_zero() && g == Poly::constant(v, cert.final_constant.value()),
             "char 0 certificate for " + f.to_string());
    c.expect(verify_certificate(f, cert, ds), "verify_certificate rejected " + f.to_string());
  }
  for (std::uint64_t p : {2, 3, 5}) {
    VarContext fp = ctx({"x1", "x2"}, FieldSpec::prime(p));
    std::vector<Poly> gens{Poly::variable(fp, 0).pow(p), Poly::variable(fp, 1).pow(p)};
    QuotientRing q(IdealHandle(fp, gens));
    std::vector<Derivation> qd;
    for (std::size_t i = 0; i < 2; ++i) qd.push_back(induce_on_quotient(Derivation::partial(QuotientRing(fp), i), q));
    std::uniform_int_distribution<std::uint32_t> e(0, std::uint32_t(p - 1));
    for (int t = 0; t < 100; ++t) {
      Poly f(fp);
      while (f.is_zero())
        for (int k = 0; k < 4; ++k)
          f += Poly::term(fp, Monomial(std::vector<std::uint32_t>{e(rng), e(rng)}), fp.field().from_int(long(e(rng))));
      SimplicityCertificate cert = truncated_certificate(f);
      Poly g = f;
      for (std::size_t i : cert.word) g = q.reduce(partial(g, i));
      c.expect(!cert.final_constant.is_zero() && g == Poly::constant(fp, cert.final_constant.value()),
               "GF(" + std::to_string(p) + ") certificate for " + f.to_string());
      c.expect(verify_certificate(f, cert, qd), "verify_certificate rejected " + f.to_string());
    }
  }
}

void charp(Check& c) {
  QuotientRing f2(ctx({"x"}, FieldSpec::prime(2)));
  std::vector<Derivation> ds{Derivation::partial(f2, 0)};
  SimplicityVerdict v = charp_obstruction(f2, ds);
  c.expect(v.status == Verdict::NotSimple, "verdict is not NotSimple");
  c.expect(v.witness.has_value(), "no witness");
  if (!v.witness) return;
  c.expect(d_ideal_check(*v.witness, ds).invariant, "witness not D-stable");
  c.expect(!is_unit_ideal(*v.witness), "witness not proper");
  c.expect(!v.witness->is_zero(), "witness is zero");
  // d(x^2) = 2x = 0 over GF(2).
  c.expect(partial(P(f2.context(), "x^2"), 0).is_zero(), "d(x^2) != 0");
}

void darboux(Check& c) {
  VarContext v = ctx({"x", "y"});
  auto replay = [&](const Poly& F, const DarbouxResult& r) {
    if (r.status != DarbouxStatus::Found) return;
    Derivation d = darboux_derivation(F);
    // d(h) = h_x + F h_y, expanded with formal partials.
    Poly dh = partial(*r.h, 0) + F * partial(*r.h, 1);
    c.expect(dh == *r.cofactor * *r.h && d.apply(*r.h) == dh && !r.h->is_constant(),
             "Found pair does not replay for F = " + F.to_string());
  };
  DarbouxResult ry = darboux_search(P(v, "y"), 3);
  c.expect(ry.status == DarbouxStatus::Found && *ry.h == P(v, "y") && *ry.cofactor == P(v, "1"),
           "F = y did not give (y, 1)");
  replay(P(v, "y"), ry);
  DarbouxResult rn = darboux_search(P(v, "y^2 + x"), 3);
  c.expect(rn.status == DarbouxStatus::NoneUpToBound && rn.bound == 3,
           "F = y^2 + x did not give NoneUpToBound(3)");
  for (const char* f : {"0", "x + y", "-y^2", "x*y", "2*y - x^2"}) {
    DarbouxResult r = darboux_search(P(v, f), 3);
    c.expect(r.status == DarbouxStatus::Found, std::string("expected a pair for F = ") + f);
    replay(P(v, f), r);
  }
}

void inner_derivations(Check& c) {
  SkewRing A1 = weyl_algebra(1, FieldSpec::rationals());
  const VarContext& v = A1.base().context();
  InnerAnalysis ix = inner_induced(A1, A1.skew_variable(0));
  c.expect(ix.induced && *ix.derivation == Derivation::partial(A1.base(), 0), "inner(x) != d/dy");
  SkewPoly f = A1.zero();
  f.add_term(Monomial::unit(1, 0, 2), P(v, "1"));
  f.add_term(Monomial::unit(1, 0, 1), P(v, "y"));
  InnerAnalysis bad = inner_induced(A1, f);
  SkewPoly expected = A1.zero();
  expected.add_term(Monomial::unit(1, 0, 1), P(v, "2"));
  expected.add_term(Monomial(1), P(v, "y"));
  c.expect(!bad.induced && bad.generator == 0u && bad.residual && *bad.residual == expected,
           "inner(x^2 + y*x) does not fail at y with residual 2*x + y");

  std::mt19937 rng(11);
  QuotientRing yr(ctx({"y"}));
  const VarContext& w = yr.context();
  const std::vector<Derivation> ders{Derivation::partial(yr, 0), Derivation(yr, {P(w, "y")}),
                                     Derivation(yr, {P(w, "y^2 - 1")})};
  int agree = 0, induced = 0;
  for (int t = 0; t < 50; ++t) {
    SkewRing S = SkewRing::build(yr, {"x"}, {ders[t % 3]});
    SkewPoly g = S.zero();
    const int n = int(rng() % 4);
    for (int i = 0; i <= n; ++i) {
      Poly a = (t % 4 == 0 || i == 0) ? random_poly(w, rng, 2, 2) : Poly::constant(w, long(rng() % 4));
      g.add_term(Monomial::unit(1, 0, std::uint32_t(i)), a);
    }
    CoefficientResiduals res = coefficient_residuals(S, g, P(w, "y"));
    bool zero = std::all_of(res.residuals.begin(), res.residuals.end(), [](const Poly& p) { return p.is_zero(); });
    InnerAnalysis a = inner_induced(S, g);
    agree += a.induced == zero;
    induced += a.induced;
  }
  c.expect(agree == 50, "residuals disagree with inner_induced on " + std::to_string(50 - agree) + " instances");
  c.expect(induced > 0 && induced < 50, "randomized instances did not cover both outcomes");
}

void groebner_oracle(Check& c) {
  std::mt19937 rng(12);
  for (int t = 0; t < 50; ++t) {
    std::vector<std::string> names{"x", "y", "z"};
    names.resize(1 + t % 3);
    VarContext v = ctx(names);
    std::vector<Poly> gens;
    for (std::size_t i = 0; i < std::min<std::size_t>(names.size(), 2); ++i) gens.push_back(random_nonzero(v, rng, 3, 3));
    unsigned max_gen = 0;
    for (const Poly& g : gens) max_gen = std::max(max_gen, unsigned(g.total_degree()));
    std::vector<Poly> h;
    for (std::size_t i = 0; i < gens.size(); ++i) h.push_back(random_poly(v, rng, 2, 3));
    const Poly member = oracles::combination(h, gens);
    for (const Poly& f : {member, member + random_nonzero(v, rng, 2, 1)}) {
      const unsigned bound = unsigned(std::max<long>(f.total_degree(), 0)) + max_gen + 2;
      c.expect(ideal_member(f, IdealHandle(v, gens)) == oracles::bounded_cofactor_member(f, gens, bound),
               "membership of " + f.to_string());
    }
  }
  VarContext xy = ctx({"x", "y"}), x12 = ctx({"x1", "x2"}), xyz = ctx({"x", "y", "z"});
  for (const IdealHandle& I : {IdealHandle(xy), IdealHandle(x12, {P(x12, "x1^2 + x2^2 - 1")}),
                               IdealHandle(xy, {P(xy, "x*y")}),
                               IdealHandle(xyz, {P(xyz, "x^2 + y^2 + z^2 - 1")}),
                               IdealHandle(xyz, {P(xyz, "x - y^2"), P(xyz, "z - y^3")})}) {
    GroebnerOptions lex, grevlex;
    lex.order = TermOrder::Lex;
    grevlex.order = TermOrder::GrevLex;
    c.expect(krull_dimension(I, lex) == krull_dimension(I, grevlex), "dimension depends on the order");
  }
}

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void cli_round_trip(Check& c) {
  const std::string text = read(session_path);
  c.expect(!text.empty(), "session file missing: " + session_path);
  std::string outputs[2];
  for (auto& out : outputs) {
    Session s;
    std::ostringstream o, e;
    c.expect(s.run(text, o, e, OutputMode::Json) == ExitOk, "session failed: " + e.str());
    out = o.str();
  }
  c.expect(outputs[0] == outputs[1], "consecutive replays differ");
  const std::string expected_path = session_path.substr(0, session_path.rfind('.')) + ".jsonl";
  c.expect(outputs[0] == read(expected_path), "output differs from " + expected_path);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) session_path = argv[1];
  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
      {"Weyl relations", weyl_relations},
      {"binomial push oracle", binomial_push_oracle},
      {"associativity suite", associativity},
      {"commuting-derivations gate", commuting_gate},
      {"sphere tangency", sphere_tangency},
      {"circle simplicity", circle_simplicity},
      {"negative control", negative_control},
      {"certificates", certificates},
      {"char-p obstruction", charp},
      {"Darboux search", darboux},
      {"inner derivations", inner_derivations},
      {"Groebner oracle", groebner_oracle},
      {"CLI round trip", cli_round_trip},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ostringstream line;
    line << (c.failure.empty() ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << " ("
         << secs << " s)";
    if (!c.failure.empty()) line << ": " << c.failure;
    std::cout << line.str() << "\n";
    failed += !c.failure.empty();
  }
  return failed ? 1 : 0;
}
