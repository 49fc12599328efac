#include "skewalg/derivation.hpp"

#include <random>
#include <stdexcept>

namespace skewalg {

Poly apply_unreduced(const std::vector<Poly>& images, const Poly& f) {
  Poly out(f.context());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].is_zero() || !f.uses_variable(i)) continue;
    out += partial(f, i) * images[i];
  }
  return out;
}

Derivation::Derivation(QuotientRing ring, std::vector<Poly> images, Unchecked)
    : ring_(std::move(ring)), images_(std::move(images)) {
  for (auto& img : images_) img = ring_.reduce(img);
}

Derivation::Derivation(QuotientRing ring, std::vector<Poly> images)
    : Derivation(std::move(ring), std::move(images), Unchecked{}) {
  if (images_.size() != ring_.context().size())
    throw std::invalid_argument("derivation needs one image per generator");
  for (const auto& img : images_) require_same_context(ring_.context(), img.context());
  if (ring_.is_polynomial_ring()) return;
  for (const auto& g : ring_.ideal().generators()) {
    Poly image = apply_unreduced(images_, g);
    if (!ring_.reduce(image).is_zero()) throw NotInvariant(g, image);
  }
}

Derivation Derivation::partial(const QuotientRing& ring, std::size_t i) {
  std::vector<Poly> imgs;
  for (std::size_t k = 0; k < ring.context().size(); ++k)
    imgs.push_back(Poly::constant(ring.context(), k == i ? 1 : 0));
  return Derivation(ring, std::move(imgs));
}

Derivation Derivation::zero(const QuotientRing& ring) {
  return Derivation(ring, std::vector<Poly>(ring.context().size(), Poly(ring.context())),
                    Unchecked{});
}

bool Derivation::is_zero() const {
  for (const auto& img : images_)
    if (!img.is_zero()) return false;
  return true;
}

Poly Derivation::apply(const Poly& f) const {
  require_same_context(context(), f.context());
  return ring_.reduce(apply_unreduced(images_, f));
}

Poly Derivation::apply_power(const Poly& f, std::size_t k) const {
  Poly r = ring_.reduce(f);
  for (std::size_t i = 0; i < k && !r.is_zero(); ++i) r = apply(r);
  return r;
}

std::string Derivation::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) out += ", ";
    out += context().name(i) + " -> " + images_[i].to_string();
  }
  return out;
}

Derivation commutator(const Derivation& d1, const Derivation& d2) {
  if (!(d1.ring() == d2.ring())) throw ContextMismatch("derivations live on different rings");
  std::vector<Poly> imgs;
  for (std::size_t i = 0; i < d1.images().size(); ++i)
    imgs.push_back(d1.apply(d2.images()[i]) - d2.apply(d1.images()[i]));
  return Derivation(d1.ring(), std::move(imgs), Derivation::Unchecked{});
}

CommutingReport commuting_set_check(std::span<const Derivation> ders) {
  CommutingReport report;
  for (std::size_t i = 0; i < ders.size(); ++i) {
    for (std::size_t j = i + 1; j < ders.size(); ++j) {
      Derivation c = commutator(ders[i], ders[j]);
      for (std::size_t g = 0; g < c.images().size(); ++g) {
        if (c.images()[g].is_zero()) continue;
        report.commuting = false;
        report.pair = {i, j};
        report.generator = g;
        report.image = c.images()[g];
        return report;
      }
    }
  }
  return report;
}

DIdealReport d_ideal_check(const IdealHandle& ideal, std::span<const Derivation> ders,
                           const GroebnerOptions& opts) {
  DIdealReport report;
  if (ders.empty()) return report;
  const QuotientRing& ring = ders.front().ring();
  for (const auto& d : ders) {
    if (!(d.ring() == ring)) throw ContextMismatch("derivations live on different rings");
  }
  require_same_context(ideal.context(), ring.context());
  std::vector<Poly> gens = ideal.generators();
  for (const auto& g : ring.ideal().generators()) gens.push_back(g);
  GroebnerBasis gb = buchberger(ring.context(), gens, opts);
  for (std::size_t k = 0; k < ders.size(); ++k) {
    for (std::size_t g = 0; g < ideal.generators().size(); ++g) {
      Poly image = ders[k].apply(ideal.generators()[g]);
      if (normal_form(image, gb).is_zero()) continue;
      report.invariant = false;
      report.derivation = k;
      report.generator = g;
      report.image = std::move(image);
      return report;
    }
  }
  return report;
}

Derivation induce_on_quotient(const Derivation& d, const QuotientRing& q) {
  if (!d.ring().is_polynomial_ring())
    throw MathError("induce_on_quotient expects a derivation of the polynomial ring");
  require_same_context(d.context(), q.context());
  const Derivation ders[] = {d};
  DIdealReport report = d_ideal_check(q.ideal(), ders);
  if (!report.invariant)
    throw NotInvariant(q.ideal().generators()[*report.generator], *report.image);
  return Derivation(q, d.images(), Derivation::Unchecked{});
}

// ----------------------------------------------------------- SkewDerivation

bool SkewDerivation::is_zero() const { return c_.is_zero() || phi_.is_identity(); }

Poly SkewDerivation::apply(const Poly& r) const {
  require_same_context(context(), r.context());
  if (is_zero()) return Poly(context());
  return c_ * (phi_.apply(r) - r);
}

namespace {

Poly small_random_poly(const VarContext& ctx, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> expo(0, 2);
  Poly p(ctx);
  for (int t = 0; t < 3; ++t) {
    Monomial m(ctx.size());
    for (std::size_t v = 0; v < ctx.size(); ++v) m[v] = static_cast<std::uint32_t>(expo(rng));
    p += Poly::term(ctx, m, Scalar(coef(rng)));
  }
  return p;
}

}  // namespace

SkewDerivation family_skew_derivation(Poly c, RingEndomorphism phi) {
  require_same_context(c.context(), phi.context());
  if (endo_injectivity(phi) == Injectivity::NotInjective) throw NotInjective();
  SkewDerivation d(std::move(c), std::move(phi));
  std::mt19937 rng(20240601);
  for (int trial = 0; trial < 8; ++trial) {
    Poly a = small_random_poly(d.context(), rng);
    Poly b = small_random_poly(d.context(), rng);
    Poly lhs = d.apply(a * b);
    Poly rhs = a * d.apply(b) + d.apply(a) * d.endomorphism().apply(b);
    if (!(lhs == rhs)) throw std::logic_error("twisted Leibniz identity failed");
  }
  return d;
}

}  // namespace skewalg
