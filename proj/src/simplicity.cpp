#include "skewalg/simplicity.hpp"

#include <algorithm>

namespace skewalg {

namespace {

std::optional<std::size_t> lowest_used_variable(const Poly& f) {
  for (std::size_t i = 0; i < f.context().size(); ++i)
    if (f.uses_variable(i)) return i;
  return std::nullopt;
}

SimplicityCertificate reduce_to_constant(Poly f) {
  SimplicityCertificate cert;
  while (auto var = lowest_used_variable(f)) {
    std::uint32_t m = f.degree_in(*var);
    for (std::uint32_t k = 0; k < m; ++k) {
      f = partial(f, *var);
      cert.word.push_back(*var);
    }
  }
  cert.final_constant = FieldElement(f.field(), f.constant_term());
  if (cert.final_constant.is_zero()) throw std::logic_error("certificate reduced to zero");
  return cert;
}

}  // namespace

SimplicityCertificate partials_certificate(const Poly& f) {
  if (f.is_zero()) throw MathError("certificate requested for the zero polynomial");
  if (f.field().characteristic() != 0)
    throw MathError("partials certificate needs characteristic 0; use the truncated form");
  return reduce_to_constant(f);
}

SimplicityCertificate truncated_certificate(const Poly& f) {
  if (f.is_zero()) throw MathError("certificate requested for the zero polynomial");
  const auto p = f.field().characteristic();
  if (p == 0) throw MathError("truncated certificate needs a prime field");
  for (const auto& [m, c] : f.terms())
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] >= p)
        throw MathError("representative has exponent " + std::to_string(m[i]) + " >= p = " +
                        std::to_string(p));
  return reduce_to_constant(f);
}

Poly replay_certificate(const Poly& f, const SimplicityCertificate& cert,
                        std::span<const Derivation> ders) {
  Poly r = f;
  for (std::size_t idx : cert.word) r = ders[idx].apply(r);
  return r;
}

bool verify_certificate(const Poly& f, const SimplicityCertificate& cert,
                        std::span<const Derivation> ders) {
  for (std::size_t idx : cert.word)
    if (idx >= ders.size()) return false;
  Poly r = replay_certificate(f, cert, ders);
  return !cert.final_constant.is_zero() && r.is_constant() &&
         FieldElement(r.field(), r.constant_term()) == cert.final_constant;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Simple: return "Simple";
    case Verdict::NotSimple: return "NotSimple";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

bool UnitWitness::verify() const {
  if (generators.empty() || generators.size() != cofactors.size()) return false;
  Poly sum(generators.front().context());
  for (std::size_t i = 0; i < generators.size(); ++i) sum += cofactors[i] * generators[i];
  return sum == Poly::constant(sum.context(), 1);
}

std::vector<Poly> image_ideal_generators(const QuotientRing& q, std::span<const Derivation> ders) {
  std::vector<Poly> gens;
  for (const auto& d : ders) {
    require_same_context(q.context(), d.context());
    for (const auto& img : d.images())
      if (!img.is_zero()) gens.push_back(img);
  }
  for (const auto& g : q.ideal().generators()) gens.push_back(g);
  return gens;
}

bool necessary_unit_condition(const QuotientRing& q, const Derivation& d,
                              const GroebnerOptions& opts) {
  const Derivation ders[] = {d};
  return is_unit_ideal(IdealHandle(q.context(), image_ideal_generators(q, ders)), opts);
}

std::optional<UnitWitness> unit_condition_witness(const QuotientRing& q, const Derivation& d,
                                                  const GroebnerOptions& opts) {
  const Derivation ders[] = {d};
  IdealHandle ideal(q.context(), image_ideal_generators(q, ders));
  auto cof = unit_ideal_witness(ideal, opts);
  if (!cof) return std::nullopt;
  UnitWitness w{ideal.generators(), std::move(*cof)};
  if (!w.verify()) throw std::logic_error("unit-ideal witness failed to verify");
  return w;
}

bool principal_stability_check(const Poly& g, std::span<const Derivation> ders,
                               const GroebnerOptions& opts) {
  if (g.is_zero()) throw MathError("principal stability check on the zero polynomial");
  if (ders.empty()) return true;
  const QuotientRing& ring = ders.front().ring();
  require_same_context(ring.context(), g.context());
  std::vector<Poly> gens{g};
  for (const auto& r : ring.ideal().generators()) gens.push_back(r);
  GroebnerBasis gb = buchberger(ring.context(), gens, opts);
  for (const auto& d : ders) {
    if (!(d.ring() == ring)) throw ContextMismatch("derivations live on different rings");
    if (!normal_form(d.apply(g), gb).is_zero()) return false;
  }
  return true;
}

bool is_proper_nonzero_d_ideal(const IdealHandle& ideal, std::span<const Derivation> ders,
                               const GroebnerOptions& opts) {
  if (ders.empty()) return false;
  const QuotientRing& ring = ders.front().ring();
  std::vector<Poly> gens = ideal.generators();
  for (const auto& r : ring.ideal().generators()) gens.push_back(r);
  if (buchberger(ring.context(), gens, opts).is_unit()) return false;
  bool nonzero = std::any_of(ideal.generators().begin(), ideal.generators().end(),
                             [&](const Poly& g) { return !ring.reduce(g).is_zero(); });
  return nonzero && d_ideal_check(ideal, ders, opts).invariant;
}

std::optional<IdealHandle> find_stable_ideal_witness(const QuotientRing& q,
                                                     std::span<const Derivation> ders,
                                                     const GroebnerOptions& opts) {
  if (ders.empty()) return std::nullopt;
  const VarContext& ctx = q.context();
  // d(f) = sum df/dy_i * d(y_i), so the images generate a stable ideal.
  std::vector<Poly> imgs;
  for (const auto& d : ders)
    for (const auto& img : d.images())
      if (!img.is_zero() && std::find(imgs.begin(), imgs.end(), img) == imgs.end())
        imgs.push_back(img);
  if (!imgs.empty()) {
    IdealHandle cand(ctx, imgs);
    if (is_proper_nonzero_d_ideal(cand, ders, opts)) return cand;
  }
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    for (long shift : {0L, 1L, -1L, 2L, -2L}) {
      Poly g = Poly::variable(ctx, i) - Poly::constant(ctx, shift);
      if (q.reduce(g).is_zero()) continue;
      IdealHandle cand(ctx, {g});
      if (principal_stability_check(g, ders, opts) && is_proper_nonzero_d_ideal(cand, ders, opts))
        return cand;
    }
  }
  return std::nullopt;
}

SimplicityVerdict fg_dim1_simplicity(const QuotientRing& q, const Derivation& d,
                                     const GroebnerOptions& opts) {
  SimplicityVerdict v;
  if (!(d.ring() == q)) throw ContextMismatch("derivation is not defined on this ring");
  if (q.field().characteristic() != 0) {
    v.reason = "characteristic is not 0";
    return v;
  }
  if (q.is_zero_ring()) {
    v.reason = "zero ring";
    return v;
  }
  if (krull_dimension(q.basis()) != 1) {
    v.reason = "dimension ≠ 1";
    return v;
  }
  if (!q.is_polynomial_ring())
    v.diagnostics.push_back(
        "irreducibility of the defining ideal is not checked; the unit-ideal test is applied to "
        "the ring as given");
  v.criterion = "unit-ideal criterion in dimension 1";
  if (auto w = unit_condition_witness(q, d, opts)) {
    v.status = Verdict::Simple;
    v.unit = std::move(*w);
    return v;
  }
  v.status = Verdict::NotSimple;
  const Derivation ders[] = {d};
  if (auto w = find_stable_ideal_witness(q, ders, opts)) {
    v.witness = std::move(*w);
  } else {
    v.diagnostics.push_back("no explicit witness ideal found");
  }
  return v;
}

SimplicityVerdict charp_obstruction(const QuotientRing& q, std::span<const Derivation> ders,
                                    const GroebnerOptions& opts) {
  SimplicityVerdict v;
  for (const auto& d : ders)
    if (!(d.ring() == q)) throw ContextMismatch("derivation is not defined on this ring");
  const auto p = q.field().characteristic();
  if (p == 0) {
    v.reason = "characteristic 0";
    return v;
  }
  if (q.is_zero_ring()) {
    v.reason = "zero ring";
    return v;
  }
  std::vector<std::size_t> indep = independent_variables(q.basis());
  if (indep.empty()) {
    v.reason = "necessary condition passed";
    return v;
  }
  v.status = Verdict::NotSimple;
  v.criterion = "positive dimension in prime characteristic";
  // Any derivation kills a p-th power, so (g^p) is stable; an independent
  // variable keeps g^p outside the defining ideal.
  const VarContext& ctx = q.context();
  const std::uint64_t shifts = std::min<std::uint64_t>(p, 16);
  for (std::size_t var : indep) {
    for (std::uint64_t a = 0; a < shifts; ++a) {
      Poly g = (Poly::variable(ctx, var) - Poly::constant(ctx, static_cast<long>(a))).pow(p);
      std::vector<Poly> gens{g};
      for (const auto& r : q.ideal().generators()) gens.push_back(r);
      if (buchberger(ctx, gens, opts).is_unit()) continue;
      IdealHandle cand(ctx, {g});
      if (!ders.empty() && !is_proper_nonzero_d_ideal(cand, ders, opts))
        throw std::logic_error("p-th power ideal failed the D-ideal check");
      v.witness = cand;
      return v;
    }
  }
  v.diagnostics.push_back("no explicit p-th power witness over the prime field");
  return v;
}

}  // namespace skewalg
