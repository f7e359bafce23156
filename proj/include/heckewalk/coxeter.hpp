#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace hw {

enum class Family : std::uint8_t { A, B };

/// A finite Coxeter group of type A_{n-1} (the symmetric group S_n acting on
/// {1..n}) or B_N (signed permutations of {±1..±N}).
struct CoxeterFamily {
  Family family = Family::A;
  int rank = 1;

  static CoxeterFamily type_a(int n) { return {Family::A, n}; }
  static CoxeterFamily type_b(int n) { return {Family::B, n}; }

  int first_generator() const { return family == Family::A ? 1 : 0; }
  int last_generator() const { return rank - 1; }
  int generator_count() const { return last_generator() - first_generator() + 1; }
  bool valid_generator(int s) const {
    return s >= first_generator() && s <= last_generator();
  }
  std::vector<int> generators() const;

  /// Coxeter matrix entry m(s,t).
  int coxeter_m(int s, int t) const;
  /// Length of the longest element: n(n-1)/2 for S_n, N^2 for B_N.
  long longest_length() const;

  std::string name() const;

  auto operator<=>(const CoxeterFamily&) const = default;
};

/// A group element stored as the map types -> positions. images()[t-1] is
/// w(t); in type B the value may be negative (w(-t) = -w(t)). The inverse
/// map positions -> types is kept alongside so generator actions and
/// descent tests are O(1).
class GroupElement {
 public:
  GroupElement() = default;

  /// Validates images and builds the element. Throws hw::Error.
  GroupElement(CoxeterFamily fam, std::vector<int> images);

  static GroupElement identity(CoxeterFamily fam);
  /// Builds w from the (signed) type found at each position, i.e. from w^{-1}.
  static GroupElement from_types_by_position(CoxeterFamily fam, std::vector<int> types);
  /// s_{i_1} s_{i_2} ... s_{i_r}: the last letter acts first.
  static GroupElement from_word(CoxeterFamily fam, std::span<const int> word);

  const CoxeterFamily& family() const { return fam_; }
  int rank() const { return fam_.rank; }
  const std::vector<int>& images() const { return images_; }

  /// w(t) for a signed type t.
  int position_of(int type) const;
  /// w^{-1}(p): the (signed) type occupying position p >= 1.
  int type_at(int position) const { return types_[position - 1]; }
  /// One-line notation of w^{-1}: the type found at each position.
  const std::vector<int>& types_by_position() const { return types_; }

  bool is_identity() const;

  /// s * w. For s_i (i >= 1) the types at positions i and i+1 trade places;
  /// for s_0 the type at position 1 changes sign.
  GroupElement apply_left(int s) const;
  void apply_left_in_place(int s);

  /// Rewrites positions first..first+types.size()-1 with the given types,
  /// which must be a rearrangement of the types currently there.
  void place_types(int first_position, std::span<const int> types);

  /// length(s*w) - length(w), always +1 or -1.
  int length_delta(int s) const;
  long length() const;

  GroupElement inverse() const;
  /// Group product (this * rhs)(t) = this(rhs(t)).
  GroupElement compose(const GroupElement& rhs) const;

  /// Reduced word u = s_{w[0]} s_{w[1]} ... by greedy left descents, lowest
  /// generator index first.
  std::vector<int> reduced_word() const;

  std::string to_string() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.fam_ == b.fam_ && a.images_ == b.images_;
  }
  friend std::strong_ordering operator<=>(const GroupElement& a,
                                          const GroupElement& b) {
    if (auto c = a.fam_ <=> b.fam_; c != 0) return c;
    return a.images_ <=> b.images_;
  }

 private:
  void rebuild_types();

  CoxeterFamily fam_;
  std::vector<int> images_;
  std::vector<int> types_;
};

/// Number of inversions #{i<j : v[i] > v[j]} of a sequence.
long count_inversions(std::span<const int> v);

/// Every element of W, in breadth-first order from the identity.
std::vector<GroupElement> enumerate_group(CoxeterFamily fam);

/// Word length by breadth-first search in the Cayley graph. Test oracle;
/// refuses ranks beyond 7 (type A) or 5 (type B).
std::map<GroupElement, long> cayley_lengths(CoxeterFamily fam);
long cayley_length_oracle(const GroupElement& w);

}  // namespace hw
