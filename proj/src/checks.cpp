#include "heckewalk/checks.hpp"

#include <json.hpp>

#include "heckewalk/error.hpp"
#include "heckewalk/walks.hpp"

namespace hw {

HeckeElement random_hecke_element(CoxeterFamily fam, const Rational& q, Rng& rng, int max_terms,
                                  bool stochastic) {
  require(max_terms >= 1, "need at least one term");
  const auto elements = enumerate_group(fam);
  HeckeElement h(fam, q);
  const int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
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

namespace {

HeckeElement alternating(CoxeterFamily fam, int s, int t, int m, const Rational& q) {
  HeckeElement out = HeckeElement::unit(fam, q);
  for (int i = 0; i < m; ++i) out = mul(out, HeckeElement::generator(fam, i % 2 == 0 ? s : t, q));
  return out;
}

void tally(IdentityTally& t, bool holds) {
  ++t.checked;
  if (!holds) ++t.failed;
}

}  // namespace

AlgebraCheck algebra_identities(CoxeterFamily fam, const Rational& q, std::uint64_t seed,
                                int triples, int pairs) {
  require(triples >= 0 && pairs >= 0, "counts must be nonnegative");
  AlgebraCheck out;
  out.family = fam;
  out.q = q;
  const HeckeElement e = HeckeElement::unit(fam, q);
  for (int s : fam.generators()) {
    const HeckeElement ts = HeckeElement::generator(fam, s, q);
    HeckeElement rhs = ts.scaled(1 - q);
    rhs += e.scaled(q);
    tally(out.quadratic, mul(ts, ts) == rhs);
    for (int t : fam.generators()) {
      if (t <= s) continue;
      const int m = fam.coxeter_m(s, t);
      tally(out.braid, alternating(fam, s, t, m, q) == alternating(fam, t, s, m, q));
    }
  }
  Rng rng(seed);
  for (int i = 0; i < triples; ++i) {
    const auto a = random_hecke_element(fam, q, rng, 5, false);
    const auto b = random_hecke_element(fam, q, rng, 5, false);
    const auto c = random_hecke_element(fam, q, rng, 5, false);
    tally(out.associativity, mul(mul(a, b), c) == mul(a, mul(b, c)));
  }
  for (int i = 0; i < pairs; ++i) {
    const auto a = random_hecke_element(fam, q, rng, 6, true);
    const auto b = random_hecke_element(fam, q, rng, 6, true);
    tally(out.anti_homomorphism, involution(mul(a, b)) == mul(involution(b), involution(a)));
  }
  return out;
}

StationarityCheck mallows_stationarity(int n, const Rational& q, const std::vector<Rational>& xs) {
  const CoxeterFamily fam = CoxeterFamily::type_a(n);
  std::vector<HeckeElement> kernels;
  for (int s : fam.generators()) {
    kernels.push_back(HeckeElement::generator(fam, s, q));
    for (const Rational& x : xs) kernels.push_back(six_vertex_element(fam, s, x, q));
  }
  StationarityCheck out;
  out.kernels = static_cast<long>(kernels.size());
  out.max_residual = 0;
  for (const auto& k : kernels) {
    const Rational res = detailed_balance_residual(std::span<const HeckeElement>(&k, 1), q);
    if (res > out.max_residual) out.max_residual = res;
  }
  return out;
}

std::string algebra_check_to_json(const std::vector<AlgebraCheck>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  auto tally_json = [](const IdentityTally& t) {
    return nlohmann::json{{"checked", t.checked}, {"failed", t.failed}};
  };
  for (const auto& c : checks)
    arr.push_back({{"family", c.family.name()},
                   {"q", rational_to_string(c.q)},
                   {"quadratic", tally_json(c.quadratic)},
                   {"braid", tally_json(c.braid)},
                   {"associativity", tally_json(c.associativity)},
                   {"anti_homomorphism", tally_json(c.anti_homomorphism)},
                   {"ok", c.ok()}});
  return arr.dump(2) + "\n";
}

}  // namespace hw
