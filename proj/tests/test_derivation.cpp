#include <doctest.h>

#include "oracles.hpp"
#include "skewalg/derivation.hpp"
#include "support.hpp"

using namespace skewalg;
using namespace testing_support;

namespace {

Derivation der(const QuotientRing& q, std::vector<std::string> images) {
  std::vector<Poly> polys;
  for (const auto& s : images) polys.push_back(P(q.context(), s));
  return Derivation(q, std::move(polys));
}

QuotientRing poly_ring(std::vector<std::string> names, FieldSpec f = FieldSpec::rationals()) {
  return QuotientRing(ctx(std::move(names), f));
}

}  // namespace

TEST_CASE("apply examples") {
  QuotientRing xy = poly_ring({"x", "y"});
  CHECK(der(xy, {"-y", "x"}).apply(P(xy.context(), "x^2 + y^2")).is_zero());
  CHECK(Derivation::partial(xy, 1).apply(P(xy.context(), "y^3")) == P(xy.context(), "3*y^2"));

  QuotientRing xyz = poly_ring({"x", "y", "z"});
  const Poly sphere = P(xyz.context(), "x^2 + y^2 + z^2 - 1");
  Derivation d1 = der(xyz, {"y + z", "z - x", "-x - y"});
  Derivation d2 = der(xyz, {"y + 2*z", "x*y*z - x", "-x*y^2 - 2*x"});
  CHECK(d1.apply(sphere).is_zero());
  CHECK(d2.apply(sphere).is_zero());
}

TEST_CASE("commutator examples") {
  QuotientRing xy = poly_ring({"x", "y"});
  CHECK(commutator(Derivation::partial(xy, 0), Derivation::partial(xy, 1)).is_zero());

  QuotientRing y = poly_ring({"y"});
  Derivation dy = Derivation::partial(y, 0);
  Derivation ydy = der(y, {"y"});
  CHECK(commutator(dy, ydy) == dy);

  QuotientRing y12 = poly_ring({"y1", "y2"});
  Derivation a = der(y12, {"y2", "0"});
  Derivation b = der(y12, {"0", "y1"});
  Derivation c = commutator(a, b);
  CHECK(c.images()[0] == P(y12.context(), "-y1"));
  // Direct: a(b(y1)) - b(a(y1)) = a(0) - b(y2) = -y1.
  CHECK(a.apply(b.apply(P(y12.context(), "y1"))) - b.apply(a.apply(P(y12.context(), "y1"))) ==
        P(y12.context(), "-y1"));
}

TEST_CASE("commuting_set_check examples") {
  QuotientRing r3 = poly_ring({"x1", "x2", "x3"});
  std::vector<Derivation> partials;
  for (std::size_t i = 0; i < 3; ++i) partials.push_back(Derivation::partial(r3, i));
  CHECK(commuting_set_check(partials).commuting);

  QuotientRing y12 = poly_ring({"y1", "y2"});
  std::vector<Derivation> pair{der(y12, {"y2", "0"}), der(y12, {"0", "y1"})};
  CommutingReport rep = commuting_set_check(pair);
  CHECK_FALSE(rep.commuting);
  REQUIRE(rep.pair.has_value());
  CHECK(*rep.pair == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(*rep.generator == 0);
  CHECK(*rep.image == P(y12.context(), "-y1"));

  std::vector<Derivation> single{der(y12, {"y1*y2", "1"})};
  CHECK(commuting_set_check(single).commuting);
}

TEST_CASE("d_ideal_check examples") {
  QuotientRing xyz = poly_ring({"x", "y", "z"});
  std::vector<Derivation> sphere_ders{der(xyz, {"y + z", "z - x", "-x - y"}),
                                      der(xyz, {"y + 2*z", "x*y*z - x", "-x*y^2 - 2*x"})};
  CHECK(d_ideal_check(IdealHandle(xyz.context(), {P(xyz.context(), "x^2 + y^2 + z^2 - 1")}),
                      sphere_ders)
            .invariant);

  QuotientRing x = poly_ring({"x"});
  std::vector<Derivation> dx{Derivation::partial(x, 0)};
  DIdealReport rep = d_ideal_check(IdealHandle(x.context(), {P(x.context(), "x^2")}), dx);
  CHECK_FALSE(rep.invariant);
  CHECK(*rep.image == P(x.context(), "2*x"));

  for (std::uint64_t p : {2, 3, 5}) {
    QuotientRing fp = poly_ring({"x1", "x2"}, FieldSpec::prime(p));
    const std::string e = std::to_string(p);
    IdealHandle trunc(fp.context(), {P(fp.context(), "x1^" + e), P(fp.context(), "x2^" + e)});
    std::vector<Derivation> ds{Derivation::partial(fp, 0), Derivation::partial(fp, 1)};
    CHECK(d_ideal_check(trunc, ds).invariant);
  }
}

TEST_CASE("induce_on_quotient examples") {
  QuotientRing xyz = poly_ring({"x", "y", "z"});
  QuotientRing sphere(IdealHandle(xyz.context(), {P(xyz.context(), "x^2 + y^2 + z^2 - 1")}));
  CHECK_NOTHROW(induce_on_quotient(der(xyz, {"y + z", "z - x", "-x - y"}), sphere));
  CHECK_NOTHROW(induce_on_quotient(der(xyz, {"y + 2*z", "x*y*z - x", "-x*y^2 - 2*x"}), sphere));

  QuotientRing x = poly_ring({"x"});
  QuotientRing x2(IdealHandle(x.context(), {P(x.context(), "x^2")}));
  try {
    induce_on_quotient(Derivation::partial(x, 0), x2);
    FAIL("expected NotInvariant");
  } catch (const NotInvariant& e) {
    CHECK(e.generator() == P(x.context(), "x^2"));
    CHECK(e.image() == P(x.context(), "2*x"));
  }

  QuotientRing f2 = poly_ring({"x"}, FieldSpec::prime(2));
  QuotientRing f2q(IdealHandle(f2.context(), {P(f2.context(), "x^2")}));
  Derivation d = induce_on_quotient(Derivation::partial(f2, 0), f2q);
  CHECK(d.images()[0] == P(f2.context(), "1"));
  CHECK(d.apply(P(f2.context(), "x + x^3")) == P(f2.context(), "1"));
}

TEST_CASE("quotient derivations revalidate the ideal") {
  QuotientRing x = poly_ring({"x"});
  QuotientRing x2(IdealHandle(x.context(), {P(x.context(), "x^2")}));
  CHECK_THROWS_AS(der(x2, {"1"}), NotInvariant);
  CHECK_NOTHROW(der(x2, {"x"}));
  CHECK_THROWS(der(x, {"1", "2"}));
}

TEST_CASE("family_skew_derivation examples") {
  VarContext y = ctx({"y"});
  SkewDerivation d = family_skew_derivation(P(y, "1"), RingEndomorphism(y, {P(y, "y^2")}));
  CHECK(d.apply(P(y, "y")) == P(y, "y^2 - y"));
  CHECK(d.apply(P(y, "y^2")) == P(y, "y^4 - y^2"));
  CHECK(P(y, "y") * d.apply(P(y, "y")) + d.apply(P(y, "y")) * P(y, "y^2") == P(y, "y^4 - y^2"));

  SkewDerivation zero_c = family_skew_derivation(Poly(y), RingEndomorphism(y, {P(y, "y^2")}));
  CHECK(zero_c.is_zero());
  CHECK(zero_c.apply(P(y, "y^3 + 1")).is_zero());
  SkewDerivation id = family_skew_derivation(P(y, "y"), RingEndomorphism::identity(y));
  CHECK(id.is_zero());

  VarContext xy = ctx({"x", "y"});
  CHECK_THROWS_AS(family_skew_derivation(P(xy, "1"), RingEndomorphism(xy, {P(xy, "x"), P(xy, "x")})),
                  NotInjective);
}

TEST_CASE("Leibniz rules on random inputs") {
  std::mt19937 rng(99);
  QuotientRing r = poly_ring({"x", "y", "z"});
  const VarContext& c = r.context();
  for (int t = 0; t < 20; ++t) {
    Derivation d1(r, {random_poly(c, rng, 2, 3), random_poly(c, rng, 2, 3), random_poly(c, rng, 2, 3)});
    Derivation d2(r, {random_poly(c, rng, 2, 3), random_poly(c, rng, 2, 3), random_poly(c, rng, 2, 3)});
    Derivation comm = commutator(d1, d2);
    for (int k = 0; k < 3; ++k) {
      Poly f = random_poly(c, rng, 3), g = random_poly(c, rng, 3);
      CHECK(d1.apply(f * g) == d1.apply(f) * g + f * d1.apply(g));
      CHECK(comm.apply(f * g) == comm.apply(f) * g + f * comm.apply(g));
      CHECK(comm.apply(f) == d1.apply(d2.apply(f)) - d2.apply(d1.apply(f)));
    }
  }

  VarContext y = ctx({"y", "z"});
  RingEndomorphism phi(y, {P(y, "y^2 + z"), P(y, "z - 1")});
  SkewDerivation sd = family_skew_derivation(P(y, "y*z + 2"), phi);
  for (int t = 0; t < 50; ++t) {
    Poly a = random_poly(y, rng, 3), b = random_poly(y, rng, 3);
    CHECK(sd.apply(a * b) == a * sd.apply(b) + sd.apply(a) * phi.apply(b));
  }
}

TEST_CASE("D-ideals are closed under the derivations") {
  std::mt19937 rng(7);
  QuotientRing r = poly_ring({"x", "y", "z"});
  const VarContext& c = r.context();
  const std::vector<Poly> gens{P(c, "x^2 + y^2 + z^2 - 1")};
  IdealHandle ideal(c, gens);
  std::vector<Derivation> ders{der(r, {"y + z", "z - x", "-x - y"}),
                               der(r, {"y + 2*z", "x*y*z - x", "-x*y^2 - 2*x"})};
  REQUIRE(d_ideal_check(ideal, ders).invariant);
  for (int t = 0; t < 20; ++t) {
    Poly h = oracles::combination({random_poly(c, rng, 3)}, gens);
    for (const Derivation& d : ders) CHECK(ideal_member(d.apply(h), ideal));
  }
}

TEST_CASE("induced derivations commute with reduction") {
  std::mt19937 rng(8);
  QuotientRing r = poly_ring({"x", "y", "z"});
  const VarContext& c = r.context();
  QuotientRing sphere(IdealHandle(c, {P(c, "x^2 + y^2 + z^2 - 1")}));
  Derivation d = der(r, {"y + 2*z", "x*y*z - x", "-x*y^2 - 2*x"});
  Derivation bar = induce_on_quotient(d, sphere);
  for (int t = 0; t < 30; ++t) {
    Poly f = random_poly(c, rng, 4, 5);
    CHECK(bar.apply(f) == quotient_reduce(sphere, d.apply(f)));
    CHECK(bar.apply(quotient_reduce(sphere, f)) == bar.apply(f));
  }
}
