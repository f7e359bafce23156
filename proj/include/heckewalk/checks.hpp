#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heckewalk/coxeter.hpp"
#include "heckewalk/hecke.hpp"
#include "heckewalk/random.hpp"
#include "heckewalk/rational.hpp"

namespace hw {

/// Random element with 1..max_terms terms and small rational coefficients;
/// stochastic elements have positive coefficients renormalized to sum 1.
HeckeElement random_hecke_element(CoxeterFamily fam, const Rational& q, Rng& rng,
                                  int max_terms, bool stochastic);

struct IdentityTally {
  long checked = 0;
  long failed = 0;
  bool ok() const { return failed == 0; }
};

/// Exact checks in H(W): T_s^2 = (1-q) T_s + q, the braid relations for all
/// pairs of generators, associativity on random triples, and the
/// involution anti-homomorphism on random stochastic pairs.
struct AlgebraCheck {
  CoxeterFamily family;
  Rational q;
  IdentityTally quadratic;
  IdentityTally braid;
  IdentityTally associativity;
  IdentityTally anti_homomorphism;
  bool ok() const {
    return quadratic.ok() && braid.ok() && associativity.ok() && anti_homomorphism.ok();
  }
};

AlgebraCheck algebra_identities(CoxeterFamily fam, const Rational& q, std::uint64_t seed,
                                int triples = 100, int pairs = 50);

/// Detailed balance of the Mallows weight for every bond kernel T_s and
/// every Y_{s,x} with x in xs, on S_n.
struct StationarityCheck {
  long kernels = 0;
  Rational max_residual;
  bool ok() const { return max_residual == 0; }
};

StationarityCheck mallows_stationarity(int n, const Rational& q, const std::vector<Rational>& xs);

std::string algebra_check_to_json(const std::vector<AlgebraCheck>& checks);

}  // namespace hw
