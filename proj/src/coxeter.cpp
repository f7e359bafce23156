#include "heckewalk/coxeter.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <sstream>

#include "heckewalk/error.hpp"

namespace hw {

std::vector<int> CoxeterFamily::generators() const {
  std::vector<int> out;
  for (int s = first_generator(); s <= last_generator(); ++s) out.push_back(s);
  return out;
}

int CoxeterFamily::coxeter_m(int s, int t) const {
  require(valid_generator(s) && valid_generator(t), "coxeter_m: invalid generator");
  if (s == t) return 1;
  if (std::abs(s - t) > 1) return 2;
  if (family == Family::B && (s == 0 || t == 0)) return 4;
  return 3;
}

long CoxeterFamily::longest_length() const {
  const long n = rank;
  return family == Family::A ? n * (n - 1) / 2 : n * n;
}

std::string CoxeterFamily::name() const {
  return (family == Family::A ? "A" : "B") + std::to_string(rank);
}

GroupElement::GroupElement(CoxeterFamily fam, std::vector<int> images)
    : fam_(fam), images_(std::move(images)) {
  require(fam_.rank >= 1, "rank must be positive");
  require(static_cast<int>(images_.size()) == fam_.rank,
          "element size does not match the rank");
  std::vector<bool> seen(fam_.rank + 1, false);
  for (int v : images_) {
    const int a = std::abs(v);
    require(a >= 1 && a <= fam_.rank, "image out of range: " + std::to_string(v));
    require(fam_.family == Family::B || v > 0, "type A images must be positive");
    require(!seen[a], "images are not a (signed) permutation");
    seen[a] = true;
  }
  rebuild_types();
}

void GroupElement::rebuild_types() {
  types_.assign(fam_.rank, 0);
  for (int t = 1; t <= fam_.rank; ++t) {
    const int p = images_[t - 1];
    types_[std::abs(p) - 1] = p > 0 ? t : -t;
  }
}

GroupElement GroupElement::identity(CoxeterFamily fam) {
  require(fam.rank >= 1, "rank must be positive");
  std::vector<int> im(fam.rank);
  for (int t = 1; t <= fam.rank; ++t) im[t - 1] = t;
  return GroupElement(fam, std::move(im));
}

GroupElement GroupElement::from_types_by_position(CoxeterFamily fam,
                                                  std::vector<int> types) {
  require(static_cast<int>(types.size()) == fam.rank,
          "element size does not match the rank");
  std::vector<int> im(fam.rank, 0);
  for (int p = 1; p <= fam.rank; ++p) {
    const int u = types[p - 1];
    require(u != 0 && std::abs(u) <= fam.rank, "type out of range");
    im[std::abs(u) - 1] = u > 0 ? p : -p;
  }
  return GroupElement(fam, std::move(im));
}

GroupElement GroupElement::from_word(CoxeterFamily fam, std::span<const int> word) {
  GroupElement w = identity(fam);
  for (auto it = word.rbegin(); it != word.rend(); ++it) w.apply_left_in_place(*it);
  return w;
}

int GroupElement::position_of(int type) const {
  const int p = images_[std::abs(type) - 1];
  return type > 0 ? p : -p;
}

bool GroupElement::is_identity() const {
  for (int t = 1; t <= fam_.rank; ++t)
    if (images_[t - 1] != t) return false;
  return true;
}

GroupElement GroupElement::apply_left(int s) const {
  GroupElement out = *this;
  out.apply_left_in_place(s);
  return out;
}

void GroupElement::apply_left_in_place(int s) {
  require(fam_.valid_generator(s), "invalid generator index " + std::to_string(s) +
                                       " for " + fam_.name());
  auto place = [this](int type, int position) {
    // w(type) = position, with w(-t) = -w(t)
    if (type > 0)
      images_[type - 1] = position;
    else
      images_[-type - 1] = -position;
  };
  if (s == 0) {
    const int u = types_[0];
    place(u, -1);
    types_[0] = -u;
    return;
  }
  const int u = types_[s - 1];
  const int v = types_[s];
  place(u, s + 1);
  place(v, s);
  types_[s - 1] = v;
  types_[s] = u;
}

void GroupElement::place_types(int first_position, std::span<const int> types) {
  const int last = first_position + static_cast<int>(types.size()) - 1;
  require(first_position >= 1 && last <= fam_.rank, "place_types: block out of range");
  std::vector<int> before(types_.begin() + (first_position - 1), types_.begin() + last);
  std::vector<int> after(types.begin(), types.end());
  std::sort(before.begin(), before.end());
  std::sort(after.begin(), after.end());
  require(before == after, "place_types: not a rearrangement of the block");
  for (int p = first_position; p <= last; ++p) {
    const int u = types[p - first_position];
    types_[p - 1] = u;
    if (u > 0)
      images_[u - 1] = p;
    else
      images_[-u - 1] = -p;
  }
}

int GroupElement::length_delta(int s) const {
  require(fam_.valid_generator(s), "invalid generator index " + std::to_string(s));
  if (s == 0) return types_[0] > 0 ? +1 : -1;
  return types_[s - 1] < types_[s] ? +1 : -1;
}

long count_inversions(std::span<const int> v) {
  long inv = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] > v[j]) ++inv;
  return inv;
}

long GroupElement::length() const {
  long len = count_inversions(images_);
  if (fam_.family == Family::B) {
    // #{i <= j : -w(i) > w(j)}
    for (std::size_t i = 0; i < images_.size(); ++i)
      for (std::size_t j = i; j < images_.size(); ++j)
        if (-images_[i] > images_[j]) ++len;
  }
  return len;
}

GroupElement GroupElement::inverse() const {
  GroupElement out;
  out.fam_ = fam_;
  out.images_ = types_;
  out.types_ = images_;
  return out;
}

GroupElement GroupElement::compose(const GroupElement& rhs) const {
  require(fam_ == rhs.fam_, "compose: family mismatch");
  std::vector<int> im(fam_.rank);
  for (int t = 1; t <= fam_.rank; ++t) im[t - 1] = position_of(rhs.images_[t - 1]);
  return GroupElement(fam_, std::move(im));
}

std::vector<int> GroupElement::reduced_word() const {
  std::vector<int> word;
  GroupElement u = *this;
  const auto gens = fam_.generators();
  while (!u.is_identity()) {
    for (int s : gens) {
      if (u.length_delta(s) < 0) {
        word.push_back(s);
        u.apply_left_in_place(s);
        break;
      }
    }
  }
  return word;
}

std::string GroupElement::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) os << ',';
    os << images_[i];
  }
  os << ']';
  return os.str();
}

std::map<GroupElement, long> cayley_lengths(CoxeterFamily fam) {
  const int limit = fam.family == Family::A ? 7 : 5;
  require(fam.rank <= limit,
          "Cayley graph enumeration refused for " + fam.name() + " (too large)",
          ErrorCode::kTooLarge);
  std::map<GroupElement, long> dist;
  std::deque<GroupElement> frontier;
  const GroupElement e = GroupElement::identity(fam);
  dist.emplace(e, 0);
  frontier.push_back(e);
  const auto gens = fam.generators();
  while (!frontier.empty()) {
    const GroupElement w = std::move(frontier.front());
    frontier.pop_front();
    const long d = dist.at(w);
    for (int s : gens) {
      GroupElement sw = w.apply_left(s);
      if (dist.emplace(sw, d + 1).second) frontier.push_back(std::move(sw));
    }
  }
  return dist;
}

std::vector<GroupElement> enumerate_group(CoxeterFamily fam) {
  const auto dist = cayley_lengths(fam);
  std::vector<std::pair<long, GroupElement>> by_len;
  by_len.reserve(dist.size());
  for (const auto& [w, d] : dist) by_len.emplace_back(d, w);
  std::stable_sort(by_len.begin(), by_len.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<GroupElement> out;
  out.reserve(by_len.size());
  for (auto& [d, w] : by_len) out.push_back(std::move(w));
  return out;
}

long cayley_length_oracle(const GroupElement& w) {
  return cayley_lengths(w.family()).at(w);
}

}  // namespace hw
