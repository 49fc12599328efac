#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "skewalg/groebner.hpp"

namespace skewalg {

// A derivation of k[y1..yn]/I stored by the images of the generators.
// Construction over a proper quotient checks d(I) ⊆ I.
class Derivation {
 public:
  Derivation(QuotientRing ring, std::vector<Poly> images);

  static Derivation partial(const QuotientRing& ring, std::size_t i);
  static Derivation zero(const QuotientRing& ring);

  const QuotientRing& ring() const { return ring_; }
  const VarContext& context() const { return ring_.context(); }
  // Reduced images d(y_i).
  const std::vector<Poly>& images() const { return images_; }
  bool is_zero() const;

  // sum_i partial(f, i) * d(y_i), reduced in the ring.
  Poly apply(const Poly& f) const;
  Poly apply_power(const Poly& f, std::size_t k) const;

  std::string to_string() const;

  friend bool operator==(const Derivation& a, const Derivation& b) {
    return a.ring_ == b.ring_ && a.images_ == b.images_;
  }

 private:
  struct Unchecked {};
  Derivation(QuotientRing ring, std::vector<Poly> images, Unchecked);
  friend Derivation induce_on_quotient(const Derivation&, const QuotientRing&);
  friend Derivation commutator(const Derivation&, const Derivation&);

  QuotientRing ring_;
  std::vector<Poly> images_;
};

// Derivation applied to a polynomial of the ambient ring, no reduction.
Poly apply_unreduced(const std::vector<Poly>& images, const Poly& f);

Derivation commutator(const Derivation& d1, const Derivation& d2);

struct CommutingReport {
  bool commuting = true;
  // First non-commuting pair (indices into the input) and a generator index
  // with a nonzero commutator image.
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::optional<std::size_t> generator;
  std::optional<Poly> image;
};

CommutingReport commuting_set_check(std::span<const Derivation> ders);

struct DIdealReport {
  bool invariant = true;
  std::optional<std::size_t> derivation;  // index into the derivation list
  std::optional<std::size_t> generator;   // index into the ideal generators
  std::optional<Poly> image;              // d(g), not in the ideal
};

// Whether d(g) lies in I (+ the ring's defining ideal) for every generator g
// of I and every d. I lives in the ambient polynomial ring of the derivations.
DIdealReport d_ideal_check(const IdealHandle& ideal, std::span<const Derivation> ders,
                           const GroebnerOptions& opts = {});

class NotInvariant : public MathError {
 public:
  NotInvariant(Poly generator, Poly image)
      : MathError("derivation does not preserve the ideal: d(" + generator.to_string() +
                  ") = " + image.to_string()),
        generator_(std::move(generator)),
        image_(std::move(image)) {}
  const Poly& generator() const { return generator_; }
  const Poly& image() const { return image_; }

 private:
  Poly generator_;
  Poly image_;
};

// Pushes a derivation of the ambient polynomial ring down to q.
// Throws NotInvariant with a witness generator when d(I) is not inside I.
Derivation induce_on_quotient(const Derivation& d, const QuotientRing& q);

class NotInjective : public MathError {
 public:
  NotInjective() : MathError("endomorphism is not injective") {}
};

// r -> c * (phi(r) - r), a phi-derivation of k[y1..yn]:
// d(ab) = a d(b) + d(a) phi(b).
class SkewDerivation {
 public:
  const RingEndomorphism& endomorphism() const { return phi_; }
  const Poly& scale() const { return c_; }
  const VarContext& context() const { return phi_.context(); }
  bool is_zero() const;

  Poly apply(const Poly& r) const;

 private:
  friend SkewDerivation family_skew_derivation(Poly c, RingEndomorphism phi);
  SkewDerivation(Poly c, RingEndomorphism phi) : phi_(std::move(phi)), c_(std::move(c)) {}

  RingEndomorphism phi_;
  Poly c_;
};

// Throws NotInjective if phi is provably not injective. The twisted Leibniz
// identity is spot-checked on pseudo-random pairs before returning.
SkewDerivation family_skew_derivation(Poly c, RingEndomorphism phi);

}  // namespace skewalg
