#include "skewalg/field.hpp"

#include <stdexcept>

namespace skewalg {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (std::uint64_t f = 3; f <= n / f; f += 2)
    if (n % f == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime(std::uint64_t p) {
  // Coefficients are reduced through mpz, but products of two residues must
  // stay well inside 64 bits for the callers that hash or print them.
  if (p >= (std::uint64_t{1} << 31))
    throw std::invalid_argument("prime field modulus too large: " + std::to_string(p));
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  return FieldSpec(FieldKind::PrimeField, p);
}

std::uint64_t characteristic(const FieldSpec& spec) { return spec.characteristic(); }

namespace {

mpz_class mod_p(const mpz_class& v, std::uint64_t p) {
  mpz_class r;
  mpz_class m(static_cast<unsigned long>(p));
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  return r;
}

}  // namespace

Scalar FieldSpec::normalize(const Scalar& v) const {
  if (kind_ == FieldKind::Rationals) {
    Scalar out(v);
    out.canonicalize();
    return out;
  }
  mpz_class num = mod_p(v.get_num(), p_);
  mpz_class den = mod_p(v.get_den(), p_);
  if (den == 0) throw DivisionByZero();
  if (den != 1) {
    mpz_class m(static_cast<unsigned long>(p_));
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
    num = mod_p(num * inv, p_);
  }
  return Scalar(num);
}

Scalar FieldSpec::add(const Scalar& a, const Scalar& b) const {
  if (kind_ == FieldKind::Rationals) return a + b;
  mpz_class s = a.get_num() + b.get_num();
  if (s >= static_cast<unsigned long>(p_)) s -= static_cast<unsigned long>(p_);
  return Scalar(s);
}

Scalar FieldSpec::sub(const Scalar& a, const Scalar& b) const {
  if (kind_ == FieldKind::Rationals) return a - b;
  mpz_class s = a.get_num() - b.get_num();
  if (s < 0) s += static_cast<unsigned long>(p_);
  return Scalar(s);
}

Scalar FieldSpec::mul(const Scalar& a, const Scalar& b) const {
  if (kind_ == FieldKind::Rationals) return a * b;
  return Scalar(mod_p(a.get_num() * b.get_num(), p_));
}

Scalar FieldSpec::neg(const Scalar& a) const {
  if (kind_ == FieldKind::Rationals) return -a;
  if (a == 0) return a;
  return Scalar(mpz_class(static_cast<unsigned long>(p_)) - a.get_num());
}

Scalar FieldSpec::inv(const Scalar& a) const {
  if (a == 0) throw DivisionByZero();
  if (kind_ == FieldKind::Rationals) return 1 / a;
  mpz_class m(static_cast<unsigned long>(p_));
  mpz_class r;
  mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), m.get_mpz_t());
  return Scalar(r);
}

std::string FieldSpec::to_string() const {
  if (kind_ == FieldKind::Rationals) return "QQ";
  return "GF(" + std::to_string(p_) + ")";
}

std::string scalar_to_string(const Scalar& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string FieldElement::to_string() const { return scalar_to_string(v_); }

FieldElement normalize_rational(const mpz_class& n, const mpz_class& d) {
  if (d == 0) throw DivisionByZero();
  Scalar q(n, d);
  q.canonicalize();
  return FieldElement(FieldSpec::rationals(), q);
}

FieldElement field_op(const FieldElement& a, const FieldElement& b, FieldOp op) {
  if (!(a.field() == b.field())) throw FieldMismatch();
  const FieldSpec& f = a.field();
  switch (op) {
    case FieldOp::Add: return {f, f.add(a.value(), b.value())};
    case FieldOp::Sub: return {f, f.sub(a.value(), b.value())};
    case FieldOp::Mul: return {f, f.mul(a.value(), b.value())};
    case FieldOp::Div: return {f, f.div(a.value(), b.value())};
  }
  throw std::logic_error("unreachable");
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  return field_op(a, b, FieldOp::Add);
}
FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  return field_op(a, b, FieldOp::Sub);
}
FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  return field_op(a, b, FieldOp::Mul);
}
FieldElement operator/(const FieldElement& a, const FieldElement& b) {
  return field_op(a, b, FieldOp::Div);
}
FieldElement inverse(const FieldElement& a) {
  return {a.field(), a.field().inv(a.value())};
}

}  // namespace skewalg
