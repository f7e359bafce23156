#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "heckewalk/hecke.hpp"
#include "heckewalk/random.hpp"
#include "heckewalk/rational.hpp"

namespace hw {

// ---------------------------------------------------------------------------
// Theory oracles

/// (a;q)_n = prod_{j=0}^{n-1} (1 - a q^j); n = nullopt is the infinite
/// product, cut once the next factor is within 1e-16 of 1.
double q_pochhammer(double a, double q, std::optional<long> n = std::nullopt);

/// Stationary density at position z of the q=0 half-line TASEP for alpha >= 1/2.
/// Exact rational evaluation with a single final conversion.
Rational rho_alpha_exact(long z, const Rational& alpha);
double rho_alpha(long z, double alpha);

/// P(eta(z) = ... = eta(z+m-1) = 1) = (1 + (2 rho - 1) m) / 2^m.
double block_occupancy_theory(long z, long m, double alpha);

/// q = 0 probability that the second-class particle leaves the half-line.
double exit_probability_theory(long k, long l, double alpha);

/// lim_t P(type k carries a negative sign) = alpha (alpha + (1-alpha) q)^{l-k},
/// alpha <= 1/2 only.
double survival_theory(long k, long l, double alpha, double q);

/// Effective reservoir density of the half-line boundary with injection rate
/// alpha and deletion rate alpha*q (bulk jumps 1 right, q left). Equals alpha
/// at q = 0 and at alpha = 1/2; the low-density bulk law is Bernoulli of it.
double halfline_reservoir_density(double alpha, double q);

/// kappa(alpha) = sum_{k>=0} q^k / (1 - alpha q^k)^2 and its inverse.
double kappa(double alpha, double q);
double alpha_of_kappa(double kappa_value, double q);

/// lim P(X_N(kappa N) = l) = (alpha;q)_inf alpha^l / (q;q)_l.
double qtazrp_marginal_theory(long l, double alpha, double q);

/// lim P(h(t)/t >= 1/kappa(alpha)): alpha for s = 0, 1 - alpha^2 (1-alpha)^{s-1}
/// for s >= 1.
double second_class_speed_cdf_theory(long s, double alpha);

// ---------------------------------------------------------------------------
// Reports

struct EstimateReport {
  std::string name;
  std::map<std::string, double> params;
  double estimate = 0.0;
  double stderr_ = 0.0;
  long trials = 0;
  long discards = 0;
  double theory = 0.0;
  double zscore = 0.0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds; not serialized

  void set_theory(double value);
};

/// estimate = mean of Bernoulli outcomes, stderr = sample std / sqrt(n).
EstimateReport bernoulli_report(std::string name, long successes, long trials);

/// Rounds to 12 significant digits, as serialized.
double round12(double x);

extern const char* const kReportCsvHeader;
/// Header line plus one line per report.
std::string reports_to_csv(const std::vector<EstimateReport>& reports);
std::string reports_to_json(const std::vector<EstimateReport>& reports);
std::vector<EstimateReport> reports_from_csv(std::string_view text);
std::vector<EstimateReport> reports_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Trial runner

/// Runs f(rng, index) for index = 0..trials-1 with the stream
/// Rng::stream(seed, index); results are stored by index, so the output is
/// independent of the worker count. workers = 0 uses all hardware threads.
template <class Result, class Fn>
std::vector<Result> run_trials(long trials, std::uint64_t seed, int workers, Fn&& f) {
  std::vector<Result> out(static_cast<std::size_t>(trials));
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long>(workers, std::max<long>(trials, 1)));
  std::atomic<long> next{0};
  auto body = [&] {
    for (long i; (i = next.fetch_add(1)) < trials;) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
      out[static_cast<std::size_t>(i)] = f(rng, i);
    }
  };
  if (workers == 1) {
    body();
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      try {
        body();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = trials;
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// ---------------------------------------------------------------------------
// Estimators

/// Half-line second-class system: the tracked type k starts at position l.
struct HalflineConfig {
  long k = 1;
  long l = 1;
  double alpha = 0.3;
  double q = 0.0;
  double t = 200.0;
  long window = 0;  // 0 means 4t
  long trials = 100000;
  std::uint64_t seed = 1;
  int workers = 0;
  bool require_plateau = true;  // exit estimator only
};

/// Frequency of "type k carries a negative sign at time t" vs survival_theory
/// (or exit_probability_theory at q = 0). Throws kExcessiveDiscards if more
/// than 1% of the trials touch the window edge.
EstimateReport estimate_survival(const HalflineConfig& config);

struct ExitEstimate {
  EstimateReport at_t;
  EstimateReport at_2t;
  bool plateau = false;
};

/// q = 0: frequency of exit by t (and by 2t for the plateau check) vs
/// exit_probability_theory. Throws kPlateauNotReached when the two differ by
/// 2 standard errors or more and require_plateau is set.
ExitEstimate estimate_exit(const HalflineConfig& config);

struct QtazrpMarginalConfig {
  long n = 200;
  double kappa_multiplier = 1.0;
  double q = 0.5;
  double alpha = 0.5;
  long trials = 100000;
  std::uint64_t seed = 1;
  int workers = 0;
  long max_l = 0;  // 0: up to the largest observed count
};

struct QtazrpMarginalEstimate {
  double time = 0.0;
  std::vector<EstimateReport> per_l;  // frequency of X_N = l
  double total_variation = 0.0;       // empirical pmf vs theory, all l
  double neighbour_correlation = 0.0; // corr(X_N, X_{N+1})
  double neighbour_chi2_p = 1.0;      // independence test of (X_N, X_{N+1})
};

QtazrpMarginalEstimate estimate_qtazrp_marginal(const QtazrpMarginalConfig& config);

struct SecondClassSpeedConfig {
  long s = 0;
  double q = 0.5;
  std::vector<double> alphas{0.5};
  long n = 200;
  long trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;
};

struct SecondClassSpeedEstimate {
  std::vector<EstimateReport> per_alpha;  // tail frequency of h(t) >= N at t = kappa N
  std::vector<double> times;
  double max_speed = 0.0;                 // max over trials and grid of h(t)/t
};

SecondClassSpeedEstimate estimate_second_class_speed(const SecondClassSpeedConfig& config);

// JSON configs (CLI and C API); unknown keys are rejected.
HalflineConfig halfline_config_from_json(std::string_view text);
QtazrpMarginalConfig qtazrp_marginal_config_from_json(std::string_view text);
SecondClassSpeedConfig second_class_speed_config_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Type-position symmetry at the observable level

/// Exact check on B_N of the identity used for the half-line theorems:
/// side A starts at s_{l-1}...s_k (applied to e, s_k first), runs the
/// continuous walk for time t and reads P(w(k) < 0); side B runs from e and
/// then applies s_{l-1}, ..., s_k and reads P(w^{-1}(k) < 0). Both sides are
/// computed per uniformization term as exact rationals.
struct SymmetryCheck {
  std::vector<Rational> side_a;  // per Poisson term n
  std::vector<Rational> side_b;
  double probability_a = 0.0;
  double probability_b = 0.0;
  bool exact_equal = false;
};

SymmetryCheck type_position_symmetry(int rank, int k, int l, const Rational& alpha,
                                     const Rational& q, double t);

}  // namespace hw
