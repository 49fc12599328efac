#pragma once

#include <random>
#include <string>
#include <vector>

#include "skewalg/expr.hpp"

namespace testing_support {

using namespace skewalg;

inline VarContext ctx(std::vector<std::string> names, FieldSpec f = FieldSpec::rationals()) {
  return VarContext(std::move(names), f);
}

inline Poly P(const VarContext& c, const std::string& text) { return parse_polynomial(text, c); }

// Random polynomial with up to `terms` terms, total degree <= max_deg and
// integer coefficients in [-5, 5].
inline Poly random_poly(const VarContext& c, std::mt19937& rng, unsigned max_deg, int terms = 4) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<unsigned> deg(0, max_deg);
  Poly p(c);
  for (int t = 0; t < terms; ++t) {
    unsigned budget = deg(rng);
    Monomial m(c.size());
    for (std::size_t v = 0; v < c.size() && budget > 0; ++v) {
      std::uniform_int_distribution<unsigned> e(0, budget);
      m[v] = e(rng);
      budget -= m[v];
    }
    p += Poly::term(c, m, Scalar(coef(rng)));
  }
  return p;
}

inline Poly random_nonzero(const VarContext& c, std::mt19937& rng, unsigned max_deg, int terms = 4) {
  while (true) {
    Poly p = random_poly(c, rng, max_deg, terms);
    if (!p.is_zero()) return p;
  }
}

}  // namespace testing_support
