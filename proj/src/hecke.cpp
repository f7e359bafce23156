#include "heckewalk/hecke.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "heckewalk/error.hpp"

namespace hw {

using nlohmann::json;

namespace {

void check_compatible(const HeckeElement& a, const HeckeElement& b) {
  require(a.family() == b.family(), "Hecke elements live in different algebras");
  require(a.q() == b.q(), "Hecke elements use different q");
}

}  // namespace

HeckeElement::HeckeElement(CoxeterFamily fam, Rational q)
    : fam_(fam), q_(std::move(q)) {
  q_.canonicalize();
  require(fam_.rank >= 1, "rank must be positive");
}

HeckeElement HeckeElement::basis(const GroupElement& w, const Rational& q) {
  HeckeElement h(w.family(), q);
  h.terms_.emplace(w, Rational(1));
  return h;
}

HeckeElement HeckeElement::generator(CoxeterFamily fam, int s, const Rational& q) {
  return basis(GroupElement::identity(fam).apply_left(s), q);
}

HeckeElement HeckeElement::unit(CoxeterFamily fam, const Rational& q) {
  return basis(GroupElement::identity(fam), q);
}

Rational HeckeElement::coeff(const GroupElement& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational HeckeElement::coeff_sum() const {
  Rational s = 0;
  for (const auto& [w, c] : terms_) s += c;
  return s;
}

void HeckeElement::add_term(const GroupElement& w, const Rational& c) {
  require(w.family() == fam_, "term from a different Coxeter group");
  if (c == 0) return;
  Rational value = c;
  value.canonicalize();
  auto [it, inserted] = terms_.try_emplace(w, std::move(value));
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

HeckeElement& HeckeElement::operator+=(const HeckeElement& rhs) {
  check_compatible(*this, rhs);
  for (const auto& [w, c] : rhs.terms_) add_term(w, c);
  return *this;
}

HeckeElement HeckeElement::scaled(const Rational& c) const {
  HeckeElement out(fam_, q_);
  if (c == 0) return out;
  for (const auto& [w, v] : terms_) {
    Rational value = v * c;
    value.canonicalize();
    out.terms_.emplace(w, std::move(value));
  }
  return out;
}

std::string HeckeElement::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << rational_to_string(c) << "*T" << w.to_string();
  }
  return os.str();
}

HeckeElement mul_gen_left(int s, const HeckeElement& h) {
  require(h.family().valid_generator(s), "invalid generator index " + std::to_string(s));
  const Rational& q = h.q();
  const Rational one_minus_q = 1 - q;
  HeckeElement out(h.family(), q);
  for (const auto& [w, c] : h.terms()) {
    GroupElement sw = w.apply_left(s);
    if (w.length_delta(s) > 0) {
      out.add_term(sw, c);
    } else {
      out.add_term(w, c * one_minus_q);
      out.add_term(sw, c * q);
    }
  }
  return out;
}

HeckeElement mul(const HeckeElement& h1, const HeckeElement& h2) {
  check_compatible(h1, h2);
  HeckeElement out(h1.family(), h1.q());
  for (const auto& [u, c] : h1.terms()) {
    const std::vector<int> word = u.reduced_word();
    HeckeElement acc = h2;
    for (auto it = word.rbegin(); it != word.rend(); ++it) acc = mul_gen_left(*it, acc);
    out += acc.scaled(c);
  }
  return out;
}

HeckeElement involution(const HeckeElement& h) {
  HeckeElement out(h.family(), h.q());
  for (const auto& [w, c] : h.terms()) out.add_term(w.inverse(), c);
  return out;
}

HeckeElement mallows_block(CoxeterFamily fam, int a, int b, const Rational& q,
                           bool normalized) {
  require(fam.family == Family::A, "mallows_block is defined for type A only");
  require(1 <= a && a <= b && b <= fam.rank,
          "mallows_block: need 1 <= a <= b <= rank");
  require(q >= 0, "mallows_block: q must be nonnegative", ErrorCode::kDomain);
  const int m = b - a + 1;
  require(m <= 7, "mallows_block: block of width " + std::to_string(m) +
                      " is too large for exact enumeration",
          ErrorCode::kTooLarge);

  const long top = static_cast<long>(m) * (m - 1) / 2;
  HeckeElement out(fam, q);
  std::vector<int> block(m);
  std::iota(block.begin(), block.end(), a);
  std::vector<int> images(fam.rank);
  std::iota(images.begin(), images.end(), 1);
  do {
    std::copy(block.begin(), block.end(), images.begin() + (a - 1));
    GroupElement w(fam, images);
    out.add_term(w, rational_pow(q, top - count_inversions(block)));
  } while (std::next_permutation(block.begin(), block.end()));

  if (normalized) out = out.scaled(Rational(1) / out.coeff_sum());
  return out;
}

HeckeElement six_vertex_element(CoxeterFamily fam, int s, const Rational& x,
                                const Rational& q) {
  require(x >= 0 && x <= 1, "six_vertex_element: x must lie in [0,1]",
          ErrorCode::kDomain);
  HeckeElement y = HeckeElement::generator(fam, s, q).scaled(x);
  y += HeckeElement::unit(fam, q).scaled(1 - x);
  return y;
}

StochasticReport is_stochastic(const HeckeElement& h) {
  StochasticReport r;
  r.sum = h.coeff_sum();
  r.min_coeff = 0;
  bool first = true;
  for (const auto& [w, c] : h.terms()) {
    if (first || c < r.min_coeff) r.min_coeff = c;
    first = false;
  }
  r.stochastic = !h.is_zero() && r.min_coeff >= 0 && r.sum == 1;
  return r;
}

HeckeElement shift_embed(const HeckeElement& y, CoxeterFamily target, int shift) {
  require(y.family().family == Family::A && target.family == Family::A,
          "shift_embed: type A only");
  require(shift >= 0 && shift + y.family().rank <= target.rank,
          "shift_embed: shifted block does not fit");
  HeckeElement out(target, y.q());
  for (const auto& [u, c] : y.terms()) {
    std::vector<int> word = u.reduced_word();
    for (int& s : word) s += shift;
    out.add_term(GroupElement::from_word(target, word), c);
  }
  return out;
}

std::string hecke_to_json(const HeckeElement& h) {
  json j;
  j["family"] = h.family().family == Family::A ? "A" : "B";
  j["rank"] = h.family().rank;
  j["q"] = rational_to_string(h.q());
  json terms = json::array();
  for (const auto& [w, c] : h.terms())
    terms.push_back({{"perm", w.images()}, {"coeff", rational_to_string(c)}});
  j["terms"] = std::move(terms);
  return j.dump();
}

HeckeElement hecke_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
    const std::string fam_name = j.at("family").get<std::string>();
    require(fam_name == "A" || fam_name == "B", "family must be \"A\" or \"B\"");
    CoxeterFamily fam{fam_name == "A" ? Family::A : Family::B, j.at("rank").get<int>()};
    HeckeElement h(fam, parse_rational(j.at("q").get<std::string>()));
    for (const auto& t : j.at("terms")) {
      GroupElement w(fam, t.at("perm").get<std::vector<int>>());
      h.add_term(w, parse_rational(t.at("coeff").get<std::string>()));
    }
    return h;
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed Hecke element JSON: ") + e.what());
  }
}

}  // namespace hw
