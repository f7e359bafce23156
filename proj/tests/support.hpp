#pragma once

#include <vector>

#include "heckewalk/coxeter.hpp"
#include "heckewalk/hecke.hpp"
#include "heckewalk/random.hpp"

namespace hw::testing {

// Random element with up to `max_terms` terms and small rational
// coefficients; stochastic elements are renormalized to sum 1.
inline HeckeElement random_element(CoxeterFamily fam, const Rational& q, Rng& rng,
                                   int max_terms, bool stochastic) {
  const auto elements = enumerate_group(fam);
  HeckeElement h(fam, q);
  const int terms = 1 + static_cast<int>(rng.below(max_terms));
  for (int i = 0; i < terms; ++i) {
    const auto& w = elements[rng.below(elements.size())];
    long num = 1 + static_cast<long>(rng.below(9));
    if (!stochastic && rng.bernoulli(0.3)) num = -num;
    Rational c(num, 1 + static_cast<long>(rng.below(6)));
    c.canonicalize();
    h.add_term(w, c);
  }
  if (h.is_zero()) h.add_term(elements.front(), 1);
  if (stochastic) h = h.scaled(Rational(1) / h.coeff_sum());
  return h;
}

}  // namespace hw::testing
