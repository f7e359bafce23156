#pragma once

#include <span>
#include <vector>

#include "heckewalk/coxeter.hpp"
#include "heckewalk/hecke.hpp"
#include "heckewalk/random.hpp"
#include "heckewalk/rational.hpp"

namespace hw {

/// Mallows measure on arrangements of n linearly ordered labels
/// a_1 < ... < a_n. The arrangement a_{c_1} ... a_{c_n} has weight
/// q^{n(n-1)/2 - inv(c)}, so a_n ... a_1 is the mode when q < 1.
struct MallowsSpec {
  double q = 0.0;
  std::vector<int> labels;  // strictly increasing

  static MallowsSpec with_n(int n, double q);
  int n() const { return static_cast<int>(labels.size()); }
  void validate() const;
};

/// P(G = z) = q^{z-1}(1-q)/(1-q^m), z = 1..m; one uniform per draw.
int truncated_geometric(double q, int m, Rng& rng);
/// P(G = z) = q^{z-1}(1-q), z >= 1.
long geometric(double q, Rng& rng);

/// Deletion algorithm: scan a_n ... a_1, step k removes the letter in
/// position G_{q,n-k+1} among the letters still present.
std::vector<int> sample_mallows(const MallowsSpec& spec, Rng& rng);
/// Mirror image of the deletion algorithm, filling positions from the right
/// out of the word a_1 ... a_n. Same law as sample_mallows.
std::vector<int> sample_mallows_from_right(const MallowsSpec& spec, Rng& rng);

/// [n]_q! = prod_{j=1}^{n} (1 + q + ... + q^{j-1}).
Rational q_factorial(int n, const Rational& q);

Rational mallows_pmf(std::span<const int> arrangement, std::span<const int> labels,
                     const Rational& q);
double mallows_pmf(std::span<const int> arrangement, const MallowsSpec& spec);

/// Same deletion algorithm over a half-infinite reservoir r_1 r_2 ... with
/// untruncated geometric draws; returns the reservoir indices (1-based) of
/// the first `depth` letters chosen.
std::vector<long> sample_infinite_prefix(double q, int depth, Rng& rng);

/// Rearranges the types occupying positions a..b by a fresh Mallows sample
/// ordered by type value; everything outside [a;b] is untouched. This is
/// the kernel of left multiplication by the normalized M_{a;b}.
GroupElement equilibrate_block(const GroupElement& state, int a, int b, double q,
                               Rng& rng);
void equilibrate_block_in_place(GroupElement& state, int a, int b, double q, Rng& rng);

/// Exact law of equilibrate_block started from `state`, as a stochastic
/// Hecke element (coefficient of T_u = probability of landing on u).
HeckeElement equilibrate_block_law(const GroupElement& state, int a, int b,
                                   const Rational& q);

}  // namespace hw
