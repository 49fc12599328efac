#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "skewalg/poly.hpp"

namespace skewalg {

struct GroebnerOptions {
  TermOrder order = TermOrder::GrevLex;
  // Maximum number of S-pair reductions before BudgetExhausted is thrown.
  std::size_t budget = 200000;
  // Record, for every basis element, cofactors over the input generators.
  bool track_cofactors = false;
};

// Generators of an ideal in k[vars]; zero generators are dropped.
class IdealHandle {
 public:
  explicit IdealHandle(VarContext ctx, std::vector<Poly> gens = {});

  const VarContext& context() const { return ctx_; }
  const std::vector<Poly>& generators() const { return gens_; }
  bool is_zero() const { return gens_.empty(); }

 private:
  VarContext ctx_;
  std::vector<Poly> gens_;
};

// Reduced Groebner basis: monic, inter-reduced, sorted by descending leading
// monomial. Unique for a given ideal and order.
class GroebnerBasis {
 public:
  GroebnerBasis(VarContext ctx, TermOrder order) : ctx_(std::move(ctx)), order_(order) {}

  const VarContext& context() const { return ctx_; }
  TermOrder order() const { return order_; }
  const std::vector<Poly>& polys() const { return basis_; }
  const std::vector<Monomial>& leading_monomials() const { return leads_; }
  std::size_t size() const { return basis_.size(); }
  bool is_unit() const;
  bool is_zero_ideal() const { return basis_.empty(); }

  // basis[i] == sum_j cofactors()[i][j] * input[j]; only when tracked.
  const std::optional<std::vector<std::vector<Poly>>>& cofactors() const { return cofactors_; }
  const std::vector<Poly>& inputs() const { return inputs_; }

  friend bool operator==(const GroebnerBasis& a, const GroebnerBasis& b) {
    return a.ctx_ == b.ctx_ && a.order_ == b.order_ && a.basis_ == b.basis_;
  }

 private:
  friend GroebnerBasis buchberger(const VarContext&, const std::vector<Poly>&,
                                  const GroebnerOptions&);
  VarContext ctx_;
  TermOrder order_;
  std::vector<Poly> basis_;
  std::vector<Monomial> leads_;
  std::vector<Poly> inputs_;
  std::optional<std::vector<std::vector<Poly>>> cofactors_;
};

GroebnerBasis buchberger(const VarContext& ctx, const std::vector<Poly>& gens,
                         const GroebnerOptions& opts = {});
GroebnerBasis buchberger(const IdealHandle& ideal, const GroebnerOptions& opts = {});

struct Division {
  std::vector<Poly> quotients;  // one per basis element
  Poly remainder;
};

// Multivariate division by the basis; remainder is the unique normal form.
Division divide(const Poly& f, const GroebnerBasis& g);
Poly normal_form(const Poly& f, const GroebnerBasis& g);

bool ideal_member(const Poly& f, const IdealHandle& ideal, const GroebnerOptions& opts = {});
bool is_unit_ideal(const IdealHandle& ideal, const GroebnerOptions& opts = {});

// Cofactors c with sum c_i * generators_i == 1, or nullopt for a proper ideal.
std::optional<std::vector<Poly>> unit_ideal_witness(const IdealHandle& ideal,
                                                    const GroebnerOptions& opts = {});

// Dimension of k[vars]/I: size of a largest variable set S such that no
// leading monomial of the basis is supported inside S.
std::size_t krull_dimension(const GroebnerBasis& g);
std::size_t krull_dimension(const IdealHandle& ideal, const GroebnerOptions& opts = {});
// A maximal independent set realizing the dimension (variable indices).
std::vector<std::size_t> independent_variables(const GroebnerBasis& g);

// k[vars]/I with elements represented by normal forms. The zero ideal gives
// the polynomial ring itself.
class QuotientRing {
 public:
  explicit QuotientRing(VarContext ctx, TermOrder order = TermOrder::GrevLex);
  QuotientRing(IdealHandle ideal, const GroebnerOptions& opts = {});

  const VarContext& context() const { return ctx_; }
  const FieldSpec& field() const { return ctx_.field(); }
  const IdealHandle& ideal() const { return ideal_; }
  const GroebnerBasis& basis() const { return basis_; }
  bool is_polynomial_ring() const { return basis_.is_zero_ideal(); }
  bool is_zero_ring() const { return basis_.is_unit(); }

  Poly reduce(const Poly& f) const;
  Poly one() const { return reduce(Poly::constant(ctx_, 1)); }
  Poly variable(std::size_t i) const { return reduce(Poly::variable(ctx_, i)); }

  friend bool operator==(const QuotientRing& a, const QuotientRing& b) {
    return a.ctx_ == b.ctx_ && a.basis_.polys() == b.basis_.polys();
  }

 private:
  VarContext ctx_;
  IdealHandle ideal_;
  GroebnerBasis basis_;
};

Poly quotient_reduce(const QuotientRing& q, const Poly& f);

}  // namespace skewalg
