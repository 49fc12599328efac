#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skewalg/derivation.hpp"

namespace skewalg {

// A word of derivation indices that, applied left to right, takes the input
// element to the nonzero constant final_constant.
struct SimplicityCertificate {
  std::vector<std::size_t> word;
  FieldElement final_constant;
};

// Differentiates out the lowest-index variable present, to its maximal
// exponent, until a constant remains. Requires char 0 and f != 0.
SimplicityCertificate partials_certificate(const Poly& f);

// Same reduction in GF(p)[x1..xn]/(x1^p, ..., xn^p). f must be a nonzero
// representative with every exponent below p.
SimplicityCertificate truncated_certificate(const Poly& f);

// Applies the word with the given derivations; returns the final element.
Poly replay_certificate(const Poly& f, const SimplicityCertificate& cert,
                        std::span<const Derivation> ders);
bool verify_certificate(const Poly& f, const SimplicityCertificate& cert,
                        std::span<const Derivation> ders);

enum class Verdict { Simple, NotSimple, Unknown };
std::string to_string(Verdict v);

// 1 = sum cofactors[i] * generators[i], checkable by expansion.
struct UnitWitness {
  std::vector<Poly> generators;
  std::vector<Poly> cofactors;

  bool verify() const;
};

struct SimplicityVerdict {
  Verdict status = Verdict::Unknown;
  std::string criterion;  // which test decided a Simple/NotSimple verdict
  std::string reason;     // why the verdict is Unknown
  std::optional<IdealHandle> witness;     // NotSimple: a proper nonzero D-ideal
  std::optional<UnitWitness> unit;        // Simple via the unit-ideal test
  std::vector<std::string> diagnostics;
};

// Generators of (d(y_1), ..., d(y_n)) + I in the ambient ring.
std::vector<Poly> image_ideal_generators(const QuotientRing& q, std::span<const Derivation> ders);

// Whether (d(y_1), ..., d(y_n)) + I is the unit ideal.
bool necessary_unit_condition(const QuotientRing& q, const Derivation& d,
                              const GroebnerOptions& opts = {});
std::optional<UnitWitness> unit_condition_witness(const QuotientRing& q, const Derivation& d,
                                                  const GroebnerOptions& opts = {});

// Decides d-simplicity of a one-dimensional quotient in characteristic 0
// by the unit-ideal test; Unknown when the dimension is not 1.
SimplicityVerdict fg_dim1_simplicity(const QuotientRing& q, const Derivation& d,
                                     const GroebnerOptions& opts = {});

// Prime characteristic: positive dimension rules out D-simplicity and yields
// an ideal generated by p-th powers as witness.
SimplicityVerdict charp_obstruction(const QuotientRing& q, std::span<const Derivation> ders,
                                    const GroebnerOptions& opts = {});

// d(g) in (g) + I for every d.
bool principal_stability_check(const Poly& g, std::span<const Derivation> ders,
                               const GroebnerOptions& opts = {});

// Proper, nonzero in the ring, and stable under every derivation.
bool is_proper_nonzero_d_ideal(const IdealHandle& ideal, std::span<const Derivation> ders,
                               const GroebnerOptions& opts = {});

// A proper nonzero ideal stable under every derivation: first the ideal of
// all derivation images, then small principal candidates.
std::optional<IdealHandle> find_stable_ideal_witness(const QuotientRing& q,
                                                     std::span<const Derivation> ders,
                                                     const GroebnerOptions& opts = {});

enum class DarbouxStatus { Found, NoneUpToBound, Inconclusive };
std::string to_string(DarbouxStatus s);

struct DarbouxResult {
  DarbouxStatus status = DarbouxStatus::NoneUpToBound;
  std::optional<Poly> h;
  std::optional<Poly> cofactor;
  unsigned bound = 0;
  std::string reason;  // Inconclusive only
};

// The derivation d/dx + F d/dy of k[x, y] (first context variable is x).
Derivation darboux_derivation(const Poly& F);

// Searches nonconstant h of total degree <= bound with d(h) = cofactor * h.
// BudgetExhausted propagates; it never turns into NoneUpToBound.
DarbouxResult darboux_search(const Poly& F, unsigned bound, const GroebnerOptions& opts = {});

}  // namespace skewalg
