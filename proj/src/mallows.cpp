#include "heckewalk/mallows.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "heckewalk/error.hpp"

namespace hw {

namespace {

void check_sampling_q(double q) {
  require(q >= 0.0 && q < 1.0, "Mallows sampling needs 0 <= q < 1", ErrorCode::kDomain);
}

void check_labels(std::span<const int> labels) {
  for (std::size_t i = 1; i < labels.size(); ++i)
    require(labels[i - 1] < labels[i], "Mallows labels must be strictly increasing");
}

// Ranks c_i (1-based) of the arrangement with respect to the sorted labels.
std::vector<int> ranks_of(std::span<const int> arrangement, std::span<const int> labels) {
  require(arrangement.size() == labels.size(), "arrangement has the wrong length");
  std::vector<int> c(arrangement.size());
  std::vector<bool> used(labels.size(), false);
  for (std::size_t i = 0; i < arrangement.size(); ++i) {
    auto it = std::lower_bound(labels.begin(), labels.end(), arrangement[i]);
    require(it != labels.end() && *it == arrangement[i],
            "arrangement contains an unknown label");
    const auto r = static_cast<std::size_t>(it - labels.begin());
    require(!used[r], "arrangement repeats a label");
    used[r] = true;
    c[i] = static_cast<int>(r) + 1;
  }
  return c;
}

}  // namespace

MallowsSpec MallowsSpec::with_n(int n, double q) {
  require(n >= 1, "Mallows item count must be positive");
  MallowsSpec s;
  s.q = q;
  s.labels.resize(n);
  std::iota(s.labels.begin(), s.labels.end(), 1);
  return s;
}

void MallowsSpec::validate() const {
  check_sampling_q(q);
  require(!labels.empty(), "Mallows spec has no labels");
  check_labels(labels);
}

int truncated_geometric(double q, int m, Rng& rng) {
  require(m >= 1, "truncated_geometric: m must be positive");
  check_sampling_q(q);
  const double u = rng.uniform();
  if (m == 1 || q == 0.0) return 1;
  // Inverse CDF: P(G <= z) = (1 - q^z) / (1 - q^m).
  const double mass = -std::expm1(m * std::log(q));
  const double z = std::floor(std::log1p(-u * mass) / std::log(q)) + 1.0;
  return static_cast<int>(std::clamp(z, 1.0, static_cast<double>(m)));
}

long geometric(double q, Rng& rng) {
  check_sampling_q(q);
  const double u = rng.uniform();
  if (q == 0.0) return 1;
  const double z = std::floor(std::log1p(-u) / std::log(q)) + 1.0;
  return z < 1.0 ? 1 : static_cast<long>(z);
}

std::vector<int> sample_mallows(const MallowsSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<int> word(spec.labels.rbegin(), spec.labels.rend());
  std::vector<int> out;
  out.reserve(word.size());
  while (!word.empty()) {
    const int g = truncated_geometric(spec.q, static_cast<int>(word.size()), rng);
    out.push_back(word[g - 1]);
    word.erase(word.begin() + (g - 1));
  }
  return out;
}

std::vector<int> sample_mallows_from_right(const MallowsSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<int> word(spec.labels.begin(), spec.labels.end());
  std::vector<int> out(word.size());
  for (auto slot = out.rbegin(); slot != out.rend(); ++slot) {
    const int g = truncated_geometric(spec.q, static_cast<int>(word.size()), rng);
    *slot = word[g - 1];
    word.erase(word.begin() + (g - 1));
  }
  return out;
}

Rational q_factorial(int n, const Rational& q) {
  require(n >= 0, "q_factorial: n must be nonnegative");
  Rational prod = 1;
  Rational bracket = 0;  // [j]_q = 1 + q + ... + q^{j-1}
  Rational power = 1;
  for (int j = 1; j <= n; ++j) {
    bracket += power;
    power *= q;
    prod *= bracket;
  }
  return prod;
}

Rational mallows_pmf(std::span<const int> arrangement, std::span<const int> labels,
                     const Rational& q) {
  check_labels(labels);
  require(q >= 0, "Mallows pmf needs q >= 0", ErrorCode::kDomain);
  const std::vector<int> c = ranks_of(arrangement, labels);
  const long n = static_cast<long>(labels.size());
  const long exponent = n * (n - 1) / 2 - count_inversions(c);
  // sum_c q^{n(n-1)/2 - inv(c)} = sum_c q^{inv(c)} = [n]_q!
  return rational_pow(q, exponent) / q_factorial(static_cast<int>(n), q);
}

double mallows_pmf(std::span<const int> arrangement, const MallowsSpec& spec) {
  spec.validate();
  const std::vector<int> c = ranks_of(arrangement, spec.labels);
  const long n = spec.n();
  const long exponent = n * (n - 1) / 2 - count_inversions(c);
  double z = 1.0, bracket = 0.0, power = 1.0;
  for (long j = 1; j <= n; ++j) {
    bracket += power;
    power *= spec.q;
    z *= bracket;
  }
  return std::pow(spec.q, static_cast<double>(exponent)) / z;
}

std::vector<long> sample_infinite_prefix(double q, int depth, Rng& rng) {
  check_sampling_q(q);
  require(depth >= 0, "depth must be nonnegative");
  std::vector<long> taken;  // kept sorted
  std::vector<long> out;
  out.reserve(depth);
  for (int k = 0; k < depth; ++k) {
    // index of the g-th letter not yet deleted
    long idx = geometric(q, rng);
    for (long t : taken) {
      if (t <= idx)
        ++idx;
      else
        break;
    }
    out.push_back(idx);
    taken.insert(std::upper_bound(taken.begin(), taken.end(), idx), idx);
  }
  return out;
}

void equilibrate_block_in_place(GroupElement& state, int a, int b, double q, Rng& rng) {
  require(state.family().family == Family::A, "equilibrate_block: type A only");
  require(1 <= a && a < b && b <= state.rank(), "equilibrate_block: invalid interval");
  MallowsSpec spec;
  spec.q = q;
  for (int p = a; p <= b; ++p) spec.labels.push_back(state.type_at(p));
  std::sort(spec.labels.begin(), spec.labels.end());
  const std::vector<int> arrangement = sample_mallows(spec, rng);
  state.place_types(a, arrangement);
}

GroupElement equilibrate_block(const GroupElement& state, int a, int b, double q,
                               Rng& rng) {
  GroupElement out = state;
  equilibrate_block_in_place(out, a, b, q, rng);
  return out;
}

HeckeElement equilibrate_block_law(const GroupElement& state, int a, int b,
                                   const Rational& q) {
  require(state.family().family == Family::A, "equilibrate_block: type A only");
  require(1 <= a && a < b && b <= state.rank(), "equilibrate_block: invalid interval");
  require(b - a + 1 <= 7, "equilibrate_block_law: block too large", ErrorCode::kTooLarge);
  std::vector<int> labels;
  for (int p = a; p <= b; ++p) labels.push_back(state.type_at(p));
  std::sort(labels.begin(), labels.end());
  HeckeElement law(state.family(), q);
  std::vector<int> arrangement = labels;
  do {
    GroupElement u = state;
    u.place_types(a, arrangement);
    law.add_term(u, mallows_pmf(arrangement, labels, q));
  } while (std::next_permutation(arrangement.begin(), arrangement.end()));
  return law;
}

}  // namespace hw
