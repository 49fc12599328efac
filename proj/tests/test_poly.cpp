#include <doctest.h>

#include "skewalg/poly.hpp"
#include "support.hpp"

using namespace skewalg;
using namespace testing_support;

TEST_CASE("poly_arith") {
  VarContext c = ctx({"x", "y"});
  CHECK(poly_arith(P(c, "x + 1"), P(c, "x - 1"), PolyOp::Mul) == P(c, "x^2 - 1"));
  Poly sum = poly_arith(P(c, "x^2*y + y"), P(c, "-y"), PolyOp::Add);
  CHECK(sum == P(c, "x^2*y"));
  CHECK(sum.num_terms() == 1);

  VarContext f2 = ctx({"x"}, FieldSpec::prime(2));
  Poly sq = P(f2, "x + 1").pow(2);
  CHECK(sq == P(f2, "x^2 + 1"));
  // Brute-force expansion: (x+1)(x+1) = x^2 + 2x + 1 with 2 = 0.
  CHECK(sq.coefficient(Monomial(std::vector<std::uint32_t>{1})) == 0);

  CHECK_THROWS_AS(P(c, "x") + P(ctx({"x", "z"}), "x"), ContextMismatch);
}

TEST_CASE("partial derivatives") {
  VarContext c = ctx({"x", "y"});
  CHECK(partial(P(c, "x^2*y"), 0) == P(c, "2*x*y"));
  CHECK(partial(P(c, "x^2"), 1).is_zero());
  VarContext f2 = ctx({"x"}, FieldSpec::prime(2));
  CHECK(partial(P(f2, "x^2"), 0).is_zero());
  CHECK_THROWS(partial(P(c, "x"), 5));
}

TEST_CASE("apply_endo") {
  VarContext x = ctx({"x"});
  CHECK(apply_endo(RingEndomorphism(x, {P(x, "x^2")}), P(x, "x + 1")) == P(x, "x^2 + 1"));
  CHECK(apply_endo(RingEndomorphism(x, {P(x, "x + 1")}), P(x, "x^2")) == P(x, "x^2 + 2*x + 1"));
  VarContext c = ctx({"x", "y"});
  CHECK(apply_endo(RingEndomorphism(c, {P(c, "y"), P(c, "x")}), P(c, "x^2*y")) == P(c, "y^2*x"));
}

TEST_CASE("endo_injectivity") {
  VarContext x = ctx({"x"});
  CHECK(endo_injectivity(RingEndomorphism(x, {P(x, "x^2")})) == Injectivity::Injective);
  VarContext c = ctx({"x", "y"});
  CHECK(endo_injectivity(RingEndomorphism(c, {P(c, "x"), P(c, "x")})) == Injectivity::NotInjective);
  CHECK(endo_injectivity(RingEndomorphism::identity(c)) == Injectivity::Injective);
  CHECK(endo_injectivity(RingEndomorphism(c, {P(c, "x*y"), P(c, "x^2*y^2")})) ==
        Injectivity::NotInjective);
  CHECK(endo_injectivity(RingEndomorphism(c, {P(c, "x + y"), P(c, "x - y")})) ==
        Injectivity::Injective);
  VarContext f3 = ctx({"x", "y"}, FieldSpec::prime(3));
  CHECK(endo_injectivity(RingEndomorphism(f3, {P(f3, "y"), P(f3, "x")})) == Injectivity::Injective);
  CHECK(endo_injectivity(RingEndomorphism(f3, {P(f3, "x^2"), P(f3, "y")})) == Injectivity::Unknown);
}

TEST_CASE("leading_term") {
  VarContext c = ctx({"x", "y"});
  auto [m1, c1] = leading_term(P(c, "x^2*y + x*y^2"), TermOrder::Lex);
  CHECK(m1 == Monomial(std::vector<std::uint32_t>{2, 1}));
  CHECK(c1.value() == 1);
  CHECK(leading_term(P(c, "x + y^2"), TermOrder::Lex).first == Monomial(std::vector<std::uint32_t>{1, 0}));
  CHECK(leading_term(P(c, "x + y^2"), TermOrder::GrevLex).first ==
        Monomial(std::vector<std::uint32_t>{0, 2}));
  CHECK_THROWS_AS(leading_term(Poly(c), TermOrder::Lex), MathError);
}

TEST_CASE("grevlex breaks degree ties by the last variable") {
  VarContext c = ctx({"x", "y", "z"});
  // x*z^2 vs y^3: degree 3 both; smaller z-exponent ranks higher.
  Monomial xz2(std::vector<std::uint32_t>{1, 0, 2}), y3(std::vector<std::uint32_t>{0, 3, 0});
  CHECK(compare_monomials(y3, xz2, TermOrder::GrevLex) > 0);
  CHECK(compare_monomials(xz2, y3, TermOrder::Lex) > 0);
}

TEST_CASE("printing round-trips through the parser") {
  VarContext c = ctx({"x", "y", "z"});
  std::mt19937 rng(11);
  for (int t = 0; t < 200; ++t) {
    Poly p = random_poly(c, rng, 4, 5).scaled(Scalar(1, 1 + t % 4));
    CHECK(P(c, p.to_string()) == p);
  }
  CHECK(P(c, "2/3*x^2*y - y + 1").to_string() == "2/3*x^2*y - y + 1");
  CHECK(Poly(c).to_string() == "0");
}

TEST_CASE("ring axioms, Leibniz and multiplicativity on random polynomials") {
  VarContext c = ctx({"x", "y", "z"});
  std::mt19937 rng(3);
  RingEndomorphism phi(c, {P(c, "x + y^2"), P(c, "z"), P(c, "x*y - 1")});
  for (int t = 0; t < 100; ++t) {
    Poly a = random_poly(c, rng, 3), b = random_poly(c, rng, 3), d = random_poly(c, rng, 3);
    CHECK((a * b) * d == a * (b * d));
    CHECK(a * b == b * a);
    CHECK(a * (b + d) == a * b + a * d);
    CHECK(a - a == Poly(c));
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(partial(a * b, i) == partial(a, i) * b + a * partial(b, i));
    CHECK(phi.apply(a * b) == phi.apply(a) * phi.apply(b));
  }
}

TEST_CASE("contexts validate their names") {
  CHECK_THROWS(VarContext({"x", "x"}, FieldSpec::rationals()));
  CHECK_THROWS(VarContext({""}, FieldSpec::rationals()));
  CHECK(ctx({"x"}) == ctx({"x"}));
  CHECK_FALSE(ctx({"x"}) == ctx({"x"}, FieldSpec::prime(2)));
}

TEST_CASE("parser errors carry positions") {
  VarContext c = ctx({"x", "y"});
  try {
    P(c, "x + t");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos().column == 5);
  }
  CHECK_THROWS_AS(P(c, "x +"), ParseError);
  CHECK_THROWS_AS(P(c, "x y"), ParseError);
  CHECK_THROWS_AS(P(c, "1/0"), ParseError);
  CHECK(P(c, "-(x - y)^2") == P(c, "-x^2 + 2*x*y - y^2"));
  CHECK(P(c, "x^0") == P(c, "1"));
}
