#pragma once

#include <cmath>
#include <map>
#include <span>
#include <vector>

namespace hw {

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit of observed counts against cell probabilities.
/// Cells with zero probability must be empty (otherwise p = 0).
ChiSquareResult chi_square_gof(std::span<const long> observed,
                               std::span<const double> probabilities);

/// Keyed variant: cells are the union of both key sets.
template <class Key>
ChiSquareResult chi_square_gof(const std::map<Key, long>& observed,
                               const std::map<Key, double>& probabilities) {
  std::vector<long> obs;
  std::vector<double> prob;
  for (const auto& [k, p] : probabilities) {
    auto it = observed.find(k);
    obs.push_back(it == observed.end() ? 0 : it->second);
    prob.push_back(p);
  }
  for (const auto& [k, n] : observed) {
    if (!probabilities.count(k)) {
      obs.push_back(n);
      prob.push_back(0.0);
    }
  }
  return chi_square_gof(obs, prob);
}

/// Pearson homogeneity test of two samples over the union of their cells
/// (2 x K contingency table, K - 1 degrees of freedom).
ChiSquareResult chi_square_homogeneity(std::span<const long> a, std::span<const long> b);

template <class Key>
ChiSquareResult chi_square_homogeneity(const std::map<Key, long>& a,
                                       const std::map<Key, long>& b) {
  std::map<Key, std::pair<long, long>> cells;
  for (const auto& [k, n] : a) cells[k].first += n;
  for (const auto& [k, n] : b) cells[k].second += n;
  std::vector<long> xa, xb;
  for (const auto& [k, c] : cells) {
    xa.push_back(c.first);
    xb.push_back(c.second);
  }
  return chi_square_homogeneity(xa, xb);
}

/// Half the L1 distance between two distributions over the same key type.
template <class Key>
double total_variation(const std::map<Key, double>& a, const std::map<Key, double>& b) {
  double sum = 0.0;
  for (const auto& [k, p] : a) {
    auto it = b.find(k);
    sum += std::abs(p - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, p] : b)
    if (!a.count(k)) sum += std::abs(p);
  return 0.5 * sum;
}

}  // namespace hw
