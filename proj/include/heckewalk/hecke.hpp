#pragma once

#include <map>
#include <string>
#include <string_view>

#include "heckewalk/coxeter.hpp"
#include "heckewalk/rational.hpp"

namespace hw {

/// An element sum_w c_w T_w of the Hecke algebra H(W) with the
/// probabilistic normalization
///   T_s T_w = T_{sw}                 if l(sw) = l(w) + 1,
///   T_s T_w = (1-q) T_w + q T_{sw}   if l(sw) = l(w) - 1.
/// Coefficients are exact rationals; zero coefficients are never stored.
class HeckeElement {
 public:
  using Terms = std::map<GroupElement, Rational>;

  HeckeElement(CoxeterFamily fam, Rational q);

  static HeckeElement basis(const GroupElement& w, const Rational& q);
  static HeckeElement generator(CoxeterFamily fam, int s, const Rational& q);
  static HeckeElement unit(CoxeterFamily fam, const Rational& q);

  const CoxeterFamily& family() const { return fam_; }
  const Rational& q() const { return q_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coeff(const GroupElement& w) const;
  Rational coeff_sum() const;

  void add_term(const GroupElement& w, const Rational& c);
  HeckeElement& operator+=(const HeckeElement& rhs);
  HeckeElement scaled(const Rational& c) const;

  friend bool operator==(const HeckeElement& a, const HeckeElement& b) {
    return a.fam_ == b.fam_ && a.q_ == b.q_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  CoxeterFamily fam_;
  Rational q_;
  Terms terms_;
};

/// T_s * h.
HeckeElement mul_gen_left(int s, const HeckeElement& h);
/// Full product h1 * h2. Each basis term T_u of h1 is factored along the
/// greedy reduced word of u and folded through mul_gen_left.
HeckeElement mul(const HeckeElement& h1, const HeckeElement& h2);
inline HeckeElement operator*(const HeckeElement& a, const HeckeElement& b) {
  return mul(a, b);
}

/// Linear map T_w -> T_{w^{-1}}; an involutive anti-homomorphism.
HeckeElement involution(const HeckeElement& h);

/// M_{a;b} = sum_{w in S_{a;b}} q^{m(m-1)/2 - N(w)} T_w with m = b-a+1, in
/// H(S_n). With normalized = true the result is divided by its coefficient
/// sum [m]_q! and is stochastic. a == b yields T_e. Blocks wider than 7 are
/// refused.
HeckeElement mallows_block(CoxeterFamily fam, int a, int b, const Rational& q,
                           bool normalized);

/// Y_{s,x} = x T_s + (1-x) T_e.
HeckeElement six_vertex_element(CoxeterFamily fam, int s, const Rational& x,
                                const Rational& q);

struct StochasticReport {
  bool stochastic = false;
  Rational min_coeff;
  Rational sum;
};

StochasticReport is_stochastic(const HeckeElement& h);

/// Image of an element of H(S_{1;m}) in H(S_n) under the index shift
/// i -> i + shift (positions 1..m land on shift+1..shift+m).
HeckeElement shift_embed(const HeckeElement& y, CoxeterFamily target, int shift);

/// {"family":"A","rank":n,"q":"p/r","terms":[{"perm":[...],"coeff":"p/r"}]}
/// where "perm" is the one-line notation (images of 1..n; signed in type B).
std::string hecke_to_json(const HeckeElement& h);
HeckeElement hecke_from_json(std::string_view text);

}  // namespace hw
