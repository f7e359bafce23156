#include "heckewalk/stats.hpp"

#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "heckewalk/error.hpp"

namespace hw {

ChiSquareResult chi_square_gof(std::span<const long> observed,
                               std::span<const double> probabilities) {
  require(observed.size() == probabilities.size(), "chi_square_gof: size mismatch");
  long total = 0;
  for (long n : observed) total += n;
  require(total > 0, "chi_square_gof: no observations");
  ChiSquareResult r;
  int cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = probabilities[i] * static_cast<double>(total);
    if (probabilities[i] <= 0.0) {
      if (observed[i] > 0) {
        r.statistic = std::numeric_limits<double>::infinity();
        r.dof = 0;
        r.p_value = 0.0;
        return r;
      }
      continue;
    }
    const double d = static_cast<double>(observed[i]) - expected;
    r.statistic += d * d / expected;
    ++cells;
  }
  r.dof = cells - 1;
  if (r.dof <= 0) {
    r.p_value = 1.0;
    return r;
  }
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

ChiSquareResult chi_square_homogeneity(std::span<const long> a, std::span<const long> b) {
  require(a.size() == b.size(), "chi_square_homogeneity: size mismatch");
  double na = 0, nb = 0;
  for (long n : a) na += static_cast<double>(n);
  for (long n : b) nb += static_cast<double>(n);
  require(na > 0 && nb > 0, "chi_square_homogeneity: empty sample");
  ChiSquareResult r;
  int cells = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = static_cast<double>(a[i] + b[i]);
    if (col == 0) continue;
    const double ea = col * na / (na + nb);
    const double eb = col * nb / (na + nb);
    r.statistic += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
    ++cells;
  }
  r.dof = cells - 1;
  if (r.dof <= 0) return r;
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace hw
