#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skewalg/simplicity.hpp"

namespace skewalg {

// Graded lex, larger first.
struct GradedLexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class NonCommutingExtension : public MathError {
 public:
  NonCommutingExtension(std::size_t i, std::size_t generator, Poly image)
      : MathError("derivation does not commute with skew derivation " + std::to_string(i + 1) +
                  ": commutator sends " + image.context().name(generator) + " to " +
                  image.to_string()),
        i_(i),
        generator_(generator),
        image_(std::move(image)) {}
  std::size_t index() const { return i_; }
  std::size_t generator() const { return generator_; }
  const Poly& image() const { return image_; }

 private:
  std::size_t i_, generator_;
  Poly image_;
};

// Base ring plus skew variable names; shared by every element of one ring.
struct SkewShape {
  QuotientRing base;
  std::vector<std::string> vars;
};

// Element sum r_(a) x^(a) with base coefficients on the left of the
// x-monomial. Coefficients are reduced in the base ring and nonzero.
class SkewPoly {
 public:
  using TermMap = std::map<Monomial, Poly, GradedLexGreater>;

  explicit SkewPoly(std::shared_ptr<const SkewShape> shape) : shape_(std::move(shape)) {}

  const std::shared_ptr<const SkewShape>& shape() const { return shape_; }
  const QuotientRing& base() const { return shape_->base; }
  std::size_t num_vars() const { return shape_->vars.size(); }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  // Highest total x-degree; -1 for zero.
  long x_degree() const;
  // The coefficient of x^alpha (zero when absent).
  Poly coefficient(const Monomial& alpha) const;

  // Adds r x^alpha in place; r is reduced first.
  void add_term(const Monomial& alpha, const Poly& r);

  SkewPoly operator-() const;
  SkewPoly& operator+=(const SkewPoly& o);
  SkewPoly& operator-=(const SkewPoly& o);
  friend SkewPoly operator+(SkewPoly a, const SkewPoly& b) { return a += b; }
  friend SkewPoly operator-(SkewPoly a, const SkewPoly& b) { return a -= b; }
  // Left multiplication by a base element; exact since r commutes with r'.
  SkewPoly left_scaled(const Poly& r) const;

  // Terms like "2*y^2*x1*x2 - y + 1", coefficients expanded.
  std::string to_string() const;

  friend bool operator==(const SkewPoly& a, const SkewPoly& b) {
    return a.shape_ == b.shape_ && a.terms_ == b.terms_;
  }

 private:
  std::shared_ptr<const SkewShape> shape_;
  TermMap terms_;
};

class NonCommutingDerivations : public MathError {
 public:
  NonCommutingDerivations(std::size_t i, std::size_t j, std::size_t generator, Poly image)
      : MathError("derivations " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                  " do not commute: commutator sends " + image.context().name(generator) +
                  " to " + image.to_string()),
        i_(i),
        j_(j),
        generator_(generator),
        image_(std::move(image)) {}
  std::size_t first() const { return i_; }
  std::size_t second() const { return j_; }
  std::size_t generator() const { return generator_; }
  const Poly& image() const { return image_; }

 private:
  std::size_t i_, j_, generator_;
  Poly image_;
};

// R[x1; d1]...[xn; dn] with x_i r = r x_i + d_i(r) and x_i x_j = x_j x_i.
class SkewRing {
 public:
  // Refuses non-commuting derivations and names clashing with the base.
  static SkewRing build(const QuotientRing& base, std::vector<std::string> vars,
                        std::vector<Derivation> ders);

  const QuotientRing& base() const { return shape_->base; }
  const std::vector<std::string>& vars() const { return shape_->vars; }
  const std::vector<Derivation>& derivations() const { return ders_; }
  const std::shared_ptr<const SkewShape>& shape() const { return shape_; }
  std::size_t num_vars() const { return shape_->vars.size(); }

  SkewPoly zero() const { return SkewPoly(shape_); }
  SkewPoly from_base(const Poly& r) const;
  SkewPoly skew_variable(std::size_t i) const;
  SkewPoly base_variable(std::size_t i) const;

  friend bool operator==(const SkewRing& a, const SkewRing& b) { return a.shape_ == b.shape_; }

 private:
  SkewRing(std::shared_ptr<const SkewShape> shape, std::vector<Derivation> ders)
      : shape_(std::move(shape)), ders_(std::move(ders)) {}

  std::shared_ptr<const SkewShape> shape_;
  std::vector<Derivation> ders_;
};

SkewPoly skew_mul(const SkewRing& S, const SkewPoly& u, const SkewPoly& v);

// x_i^n r = sum_k C(n, k) d_i^k(r) x_i^(n-k).
SkewPoly binomial_push(const SkewRing& S, std::size_t i, std::uint64_t n, const Poly& r);

// uv - vu.
SkewPoly skew_commutator(const SkewRing& S, const SkewPoly& u, const SkewPoly& v);

// field[y1..yn][x1; d/dy1]...[xn; d/dyn]; for n = 1 the names are y and x.
SkewRing weyl_algebra(std::size_t n, const FieldSpec& field);

// A base derivation extended to S by x_i -> 0, acting on coefficients.
class ExtendedDerivation {
 public:
  const SkewRing& ring() const { return ring_; }
  const Derivation& base_derivation() const { return d_; }
  SkewPoly apply(const SkewPoly& u) const;

 private:
  friend ExtendedDerivation extend_derivation(const Derivation& d, const SkewRing& S);
  ExtendedDerivation(SkewRing S, Derivation d) : ring_(std::move(S)), d_(std::move(d)) {}

  SkewRing ring_;
  Derivation d_;
};

// Throws NonCommutingExtension when d fails to commute with some d_i.
ExtendedDerivation extend_derivation(const Derivation& d, const SkewRing& S);

struct InnerAnalysis {
  SkewPoly element;
  bool induced = false;
  // Set when induced: r -> f r - r f on the base.
  std::optional<Derivation> derivation;
  // Set otherwise: first base generator whose image has positive x-degree.
  std::optional<std::size_t> generator;
  std::optional<SkewPoly> residual;
};

InnerAnalysis inner_induced(const SkewRing& S, const SkewPoly& f);

// For f = sum a_i x^i in a one-variable ring: the coefficients of f r - r f.
struct CoefficientResiduals {
  Poly induced_value;          // coefficient of x^0
  std::vector<Poly> residuals; // coefficient of x^k for k = 1..deg f
};

CoefficientResiduals coefficient_residuals(const SkewRing& S, const SkewPoly& f, const Poly& r);

// R[x; f, d] over a polynomial base: x r = f(r) x + d(r).
class OreExtension {
 public:
  using SkewMap = std::variant<std::monostate, Derivation, SkewDerivation>;

  // d is zero (monostate), an ordinary derivation (requires f = id), or a
  // member of the family c (phi(r) - r) with phi = f.
  OreExtension(const QuotientRing& base, std::string var, RingEndomorphism f, SkewMap d);

  const QuotientRing& base() const { return shape_->base; }
  const std::string& var() const { return shape_->vars.front(); }
  const RingEndomorphism& endomorphism() const { return f_; }
  const SkewMap& skew_map() const { return d_; }
  const std::shared_ptr<const SkewShape>& shape() const { return shape_; }
  bool derivation_is_zero() const;
  Injectivity injectivity() const { return injectivity_; }

  SkewPoly zero() const { return SkewPoly(shape_); }
  SkewPoly from_base(const Poly& r) const;
  SkewPoly skew_variable() const;

  Poly apply_f(const Poly& r) const;
  Poly apply_d(const Poly& r) const;

  friend bool operator==(const OreExtension& a, const OreExtension& b) {
    return a.shape_ == b.shape_;
  }

 private:
  std::shared_ptr<const SkewShape> shape_;
  RingEndomorphism f_;
  SkewMap d_;
  Injectivity injectivity_;
};

// x^n r by repeated single rewrites.
SkewPoly ore_push(const OreExtension& O, std::uint64_t n, const Poly& r);
SkewPoly endo_skew_mul(const OreExtension& O, const SkewPoly& u, const SkewPoly& v);

// Simplicity of S from D-simplicity of its commutative base.
SimplicityVerdict skew_simplicity(const SkewRing& S, const GroebnerOptions& opts = {});

}  // namespace skewalg
