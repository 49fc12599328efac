#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skewalg/field.hpp"

namespace skewalg {

// Ordered variable names plus coefficient field. Immutable and cheap to copy;
// two contexts are equal when names and field agree.
class VarContext {
 public:
  VarContext(std::vector<std::string> names, FieldSpec field);

  std::size_t size() const { return data_->names.size(); }
  const std::string& name(std::size_t i) const { return data_->names.at(i); }
  const std::vector<std::string>& names() const { return data_->names; }
  const FieldSpec& field() const { return data_->field; }
  std::optional<std::size_t> index_of(const std::string& name) const;

  friend bool operator==(const VarContext& a, const VarContext& b) {
    return a.data_ == b.data_ ||
           (a.data_->field == b.data_->field && a.data_->names == b.data_->names);
  }

 private:
  struct Data {
    std::vector<std::string> names;
    FieldSpec field;
  };
  std::shared_ptr<const Data> data_;
};

// Dense exponent vector.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> e) : e_(std::move(e)) {}

  static Monomial unit(std::size_t nvars, std::size_t i, std::uint32_t power = 1);

  std::size_t size() const { return e_.size(); }
  std::uint32_t operator[](std::size_t i) const { return e_[i]; }
  std::uint32_t& operator[](std::size_t i) { return e_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return e_; }

  std::uint64_t degree() const;
  bool is_one() const;
  bool divides(const Monomial& other) const;
  bool coprime(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  // Requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  friend Monomial lcm(const Monomial& a, const Monomial& b);

  // Lexicographic on exponent vectors: x1 > x2 > ... > xn.
  friend auto operator<=>(const Monomial& a, const Monomial& b) = default;
  friend bool operator==(const Monomial& a, const Monomial& b) = default;

 private:
  std::vector<std::uint32_t> e_;
};

// Multivariate polynomial over a VarContext. Terms are kept in descending lex
// order with no zero coefficients; the empty map is the zero polynomial.
class Poly {
 public:
  using TermMap = std::map<Monomial, Scalar, std::greater<Monomial>>;

  explicit Poly(VarContext ctx) : ctx_(std::move(ctx)) {}

  static Poly constant(const VarContext& ctx, const Scalar& c);
  static Poly constant(const VarContext& ctx, long c) { return constant(ctx, Scalar(c)); }
  static Poly variable(const VarContext& ctx, std::size_t i);
  static Poly term(const VarContext& ctx, const Monomial& m, const Scalar& c);

  const VarContext& context() const { return ctx_; }
  const FieldSpec& field() const { return ctx_.field(); }
  const TermMap& terms() const { return terms_; }
  std::size_t num_terms() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Coefficient of the monomial 1.
  Scalar constant_term() const;
  Scalar coefficient(const Monomial& m) const;
  // -1 for the zero polynomial.
  long total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;
  bool uses_variable(std::size_t var) const;

  // Adds c*m in place, dropping the term if it cancels. c must be canonical.
  void add_term(const Monomial& m, const Scalar& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Scalar& c) const;
  Poly times_monomial(const Monomial& m, const Scalar& c) const;
  Poly pow(std::uint64_t n) const;

  std::string to_string() const;

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
  }

 private:
  VarContext ctx_;
  TermMap terms_;
};

void require_same_context(const VarContext& a, const VarContext& b);

enum class TermOrder { Lex, GrevLex };
std::string to_string(TermOrder order);

// Negative, zero or positive as a is smaller, equal or larger than b.
int compare_monomials(const Monomial& a, const Monomial& b, TermOrder order);

// Throws MathError on the zero polynomial.
std::pair<Monomial, FieldElement> leading_term(const Poly& f, TermOrder order);

enum class PolyOp { Add, Sub, Mul };
Poly poly_arith(const Poly& a, const Poly& b, PolyOp op);

// Formal partial derivative in variable i; exponents are mapped into the field.
Poly partial(const Poly& f, std::size_t i);

// Algebra endomorphism of k[x1..xn] given by the images of the variables.
class RingEndomorphism {
 public:
  RingEndomorphism(VarContext ctx, std::vector<Poly> images);
  static RingEndomorphism identity(const VarContext& ctx);

  const VarContext& context() const { return ctx_; }
  const std::vector<Poly>& images() const { return images_; }
  bool is_identity() const;
  // Images are a permutation of the variables.
  bool is_variable_permutation() const;

  Poly apply(const Poly& f) const;
  // Applies the map n times.
  Poly apply_power(const Poly& f, std::uint64_t n) const;

  friend bool operator==(const RingEndomorphism& a, const RingEndomorphism& b) {
    return a.ctx_ == b.ctx_ && a.images_ == b.images_;
  }

 private:
  VarContext ctx_;
  std::vector<Poly> images_;
};

Poly apply_endo(const RingEndomorphism& phi, const Poly& f);

enum class Injectivity { Injective, NotInjective, Unknown };
std::string to_string(Injectivity v);

// Char 0: Jacobian rank test. Char p: Injective only for variable
// permutations, NotInjective for repeated or constant images, else Unknown.
Injectivity endo_injectivity(const RingEndomorphism& phi);

// Rank of a matrix with polynomial entries over the fraction field,
// by fraction-free row elimination.
std::size_t polynomial_matrix_rank(std::vector<std::vector<Poly>> rows);

}  // namespace skewalg
