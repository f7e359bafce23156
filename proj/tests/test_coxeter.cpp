#include <doctest.h>

#include "heckewalk/coxeter.hpp"
#include "heckewalk/error.hpp"

using namespace hw;

namespace {

const CoxeterFamily kS3 = CoxeterFamily::type_a(3);
const CoxeterFamily kS4 = CoxeterFamily::type_a(4);
const CoxeterFamily kB2 = CoxeterFamily::type_b(2);
const CoxeterFamily kB3 = CoxeterFamily::type_b(3);

GroupElement apply_alternating(GroupElement w, int s, int t, int letters) {
  for (int i = 0; i < letters; ++i) w.apply_left_in_place(i % 2 == 0 ? s : t);
  return w;
}

}  // namespace

TEST_CASE("identity elements") {
  CHECK(GroupElement::identity(kS3).images() == std::vector<int>{1, 2, 3});
  CHECK(GroupElement::identity(kB2).images() == std::vector<int>{1, 2});
  CHECK(GroupElement::identity(kS3).length() == 0);
  CHECK(GroupElement::identity(kB3).length() == 0);
  CHECK(cayley_length_oracle(GroupElement::identity(kB3)) == 0);
}

TEST_CASE("generator action on the left") {
  const GroupElement e = GroupElement::identity(kS3);
  const GroupElement s1e = e.apply_left(1);
  CHECK(s1e.images() == std::vector<int>{2, 1, 3});
  CHECK(s1e.apply_left(1) == e);
  CHECK(GroupElement::identity(kB2).apply_left(0).images() == std::vector<int>{-1, 2});

  // the types at positions i and i+1 trade places
  const GroupElement w(kS4, {3, 1, 4, 2});
  const GroupElement sw = w.apply_left(2);
  CHECK(sw.type_at(2) == w.type_at(3));
  CHECK(sw.type_at(3) == w.type_at(2));
  CHECK(sw.type_at(1) == w.type_at(1));

  CHECK_THROWS_AS(e.apply_left(0), Error);
  CHECK_THROWS_AS(e.apply_left(3), Error);
  CHECK_THROWS_AS(GroupElement::identity(kB2).apply_left(2), Error);
}

TEST_CASE("construction validates images") {
  CHECK_THROWS_AS(GroupElement(kS3, {1, 1, 2}), Error);
  CHECK_THROWS_AS(GroupElement(kS3, {1, 2}), Error);
  CHECK_THROWS_AS(GroupElement(kS3, {-1, 2, 3}), Error);
  CHECK_THROWS_AS(GroupElement(kB2, {2, -2}), Error);
  CHECK_NOTHROW(GroupElement(kB2, {-2, -1}));
}

TEST_CASE("length") {
  CHECK(GroupElement(kS3, {2, 1, 3}).length() == 1);
  CHECK(GroupElement(kS3, {3, 2, 1}).length() == 3);
  CHECK(GroupElement(kB2, {-1, 2}).length() == 1);
  CHECK(GroupElement(kB3, {-1, -2, -3}).length() == 9);
  CHECK(kB3.longest_length() == 9);
  CHECK(kS4.longest_length() == 6);
}

TEST_CASE("inverse") {
  CHECK(GroupElement(kS3, {2, 3, 1}).inverse().images() == std::vector<int>{3, 1, 2});
  CHECK(GroupElement::identity(kS4).inverse() == GroupElement::identity(kS4));
  const GroupElement w(kB2, {-2, 1});
  CHECK(w.compose(w.inverse()).is_identity());
  CHECK(w.inverse().compose(w).is_identity());
}

TEST_CASE("length agrees with the Cayley-graph oracle") {
  for (const auto fam : {kS4, kB3, CoxeterFamily::type_a(5), CoxeterFamily::type_b(4)}) {
    const auto oracle = cayley_lengths(fam);
    CHECK(oracle.size() == (fam.family == Family::A ? (fam.rank == 4 ? 24u : 120u)
                                                    : (fam.rank == 3 ? 48u : 384u)));
    for (const auto& [w, d] : oracle) {
      CHECK(w.length() == d);
      CHECK(w.inverse().length() == d);
    }
  }
}

TEST_CASE("length_delta is the exact length change") {
  for (const auto fam : {kS4, kB3}) {
    for (const auto& w : enumerate_group(fam)) {
      for (int s : fam.generators()) {
        const GroupElement sw = w.apply_left(s);
        CHECK(sw.length() - w.length() == w.length_delta(s));
        CHECK(sw.apply_left(s) == w);
      }
    }
  }
  CHECK(GroupElement::identity(kS3).length_delta(1) == +1);
  CHECK(GroupElement(kS3, {2, 1, 3}).length_delta(1) == -1);
}

TEST_CASE("braid relations hold on every element") {
  for (const auto fam : {kS4, kB3}) {
    const auto elements = enumerate_group(fam);
    for (int s : fam.generators()) {
      for (int t : fam.generators()) {
        if (s == t) continue;
        const int m = fam.coxeter_m(s, t);
        for (const auto& w : elements)
          CHECK(apply_alternating(w, s, t, m) == apply_alternating(w, t, s, m));
      }
    }
  }
  CHECK(kB3.coxeter_m(0, 1) == 4);
  CHECK(kB3.coxeter_m(1, 2) == 3);
  CHECK(kB3.coxeter_m(0, 2) == 2);
  CHECK(kS4.coxeter_m(1, 3) == 2);
}

TEST_CASE("reduced words rebuild the element") {
  for (const auto fam : {kS4, kB3}) {
    for (const auto& w : enumerate_group(fam)) {
      const auto word = w.reduced_word();
      CHECK(static_cast<long>(word.size()) == w.length());
      CHECK(GroupElement::from_word(fam, word) == w);
    }
  }
}

TEST_CASE("place_types and from_types_by_position") {
  GroupElement w(kS4, {3, 1, 4, 2});
  const GroupElement back = GroupElement::from_types_by_position(kS4, w.types_by_position());
  CHECK(back == w);
  const std::vector<int> block{w.type_at(3), w.type_at(2)};
  w.place_types(2, block);
  CHECK(w == GroupElement(kS4, {3, 1, 4, 2}).apply_left(2));
  const std::vector<int> bad{1, 1};
  CHECK_THROWS_AS(w.place_types(2, bad), Error);
}

TEST_CASE("oracle refuses large ranks") {
  CHECK_THROWS_AS(cayley_lengths(CoxeterFamily::type_a(8)), Error);
  CHECK_THROWS_AS(cayley_lengths(CoxeterFamily::type_b(6)), Error);
}
