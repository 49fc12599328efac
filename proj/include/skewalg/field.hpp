#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "skewalg/errors.hpp"

namespace skewalg {

// Raw coefficient storage. Over QQ any canonical rational; over GF(p) an
// integer in [0, p). Always interpreted through a FieldSpec.
using Scalar = mpq_class;

enum class FieldKind { Rationals, PrimeField };

class FieldSpec {
 public:
  FieldSpec() = default;  // QQ

  static FieldSpec rationals() { return FieldSpec(); }
  // Throws std::invalid_argument unless p is prime (trial division).
  static FieldSpec prime(std::uint64_t p);

  FieldKind kind() const { return kind_; }
  bool is_rationals() const { return kind_ == FieldKind::Rationals; }
  std::uint64_t modulus() const { return p_; }
  std::uint64_t characteristic() const { return kind_ == FieldKind::Rationals ? 0 : p_; }

  // Canonical form of an arbitrary rational in this field. Over GF(p) the
  // rational a/b maps to a * b^-1 mod p; throws DivisionByZero if p | b.
  Scalar normalize(const Scalar& v) const;
  Scalar from_int(long v) const { return normalize(Scalar(v)); }
  Scalar from_mpz(const mpz_class& v) const { return normalize(Scalar(v)); }

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  // "QQ" or "GF(p)"
  std::string to_string() const;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }

 private:
  FieldSpec(FieldKind kind, std::uint64_t p) : kind_(kind), p_(p) {}

  FieldKind kind_ = FieldKind::Rationals;
  std::uint64_t p_ = 0;
};

std::uint64_t characteristic(const FieldSpec& spec);

bool is_prime(std::uint64_t n);

// An exact element of a FieldSpec; immutable value type.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldSpec spec, const Scalar& v) : spec_(spec), v_(spec.normalize(v)) {}

  static FieldElement from_int(FieldSpec spec, long v) { return {spec, Scalar(v)}; }

  const FieldSpec& field() const { return spec_; }
  const Scalar& value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  std::string to_string() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.spec_ == b.spec_ && a.v_ == b.v_;
  }

 private:
  FieldSpec spec_;
  Scalar v_;
};

FieldElement normalize_rational(const mpz_class& n, const mpz_class& d);

enum class FieldOp { Add, Sub, Mul, Div };

// Throws FieldMismatch on operands from different fields and DivisionByZero.
FieldElement field_op(const FieldElement& a, const FieldElement& b, FieldOp op);

FieldElement operator+(const FieldElement& a, const FieldElement& b);
FieldElement operator-(const FieldElement& a, const FieldElement& b);
FieldElement operator*(const FieldElement& a, const FieldElement& b);
FieldElement operator/(const FieldElement& a, const FieldElement& b);
FieldElement inverse(const FieldElement& a);

// Prints a Scalar the way the expression parser reads it back: "n" or "n/d".
std::string scalar_to_string(const Scalar& v);

}  // namespace skewalg
