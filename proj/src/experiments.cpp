#include "heckewalk/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "heckewalk/error.hpp"
#include "heckewalk/systems.hpp"
#include "heckewalk/walks.hpp"

namespace hw {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_probability_param(double alpha, const char* name) {
  require(alpha >= 0.0 && alpha < 1.0, std::string(name) + " must lie in [0,1)",
          ErrorCode::kDomain);
}

}  // namespace

// ---------------------------------------------------------------------------
// Theory

double q_pochhammer(double a, double q, std::optional<long> n) {
  if (n) {
    require(*n >= 0, "q_pochhammer: n must be nonnegative");
    double prod = 1.0, power = 1.0;
    for (long j = 0; j < *n; ++j) {
      prod *= 1.0 - a * power;
      power *= q;
    }
    return prod;
  }
  require(std::abs(q) < 1.0, "q_pochhammer: infinite product needs |q| < 1",
          ErrorCode::kDomain);
  double prod = 1.0, power = 1.0;
  for (long j = 0; j < 100000; ++j) {
    const double term = a * power;
    if (std::abs(term) < 1e-16) break;
    prod *= 1.0 - term;
    power *= q;
  }
  return prod;
}

Rational rho_alpha_exact(long z, const Rational& alpha) {
  require(z >= 1, "rho_alpha: z must be at least 1");
  require(alpha >= Rational(1, 2), "rho_alpha: formula holds for alpha >= 1/2 only "
                                   "(use the Bernoulli(alpha) regime below)",
          ErrorCode::kDomain);
  if (z == 1) return 1 - 1 / (4 * alpha);
  require(z <= 20000, "rho_alpha: z too large for exact evaluation", ErrorCode::kTooLarge);
  // factorials 0..2z
  std::vector<BigInt> fact(2 * z + 1);
  fact[0] = 1;
  for (long i = 1; i <= 2 * z; ++i) fact[i] = fact[i - 1] * i;
  const Rational inv_alpha = 1 / alpha;
  Rational sum = 0;
  Rational inv_alpha_pow = inv_alpha;  // alpha^{-k}, starting at k = 1
  BigInt two_pow = 2;
  for (long k = 2; k <= z; ++k) {
    inv_alpha_pow *= inv_alpha;
    two_pow *= 2;
    const BigInt coef = fact[2 * (z - 1) - k] * (k - 1);
    const BigInt den = fact[z - 1] * fact[z - k];
    sum += Rational(coef, den) * (Rational((1 + k) * two_pow) - inv_alpha_pow);
  }
  BigInt four_pow;
  mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(z));
  Rational out = sum / four_pow;
  out.canonicalize();
  return out;
}

double rho_alpha(long z, double alpha) { return rho_alpha_exact(z, Rational(alpha)).get_d(); }

double block_occupancy_theory(long z, long m, double alpha) {
  require(m >= 1, "block length must be positive");
  const double rho = rho_alpha(z, alpha);
  return (1.0 + (2.0 * rho - 1.0) * static_cast<double>(m)) / std::pow(2.0, m);
}

double exit_probability_theory(long k, long l, double alpha) {
  require(1 <= k && k <= l, "exit probability needs 1 <= k <= l");
  require(alpha > 0.0, "alpha must be positive", ErrorCode::kDomain);
  if (alpha >= 0.5) {
    const double rho = rho_alpha(k, alpha);
    return (1.0 + (2.0 * rho - 1.0) * static_cast<double>(l - k)) / std::pow(2.0, l - k + 1);
  }
  return std::pow(alpha, l - k + 1);
}

double survival_theory(long k, long l, double alpha, double q) {
  require(1 <= k && k <= l, "survival probability needs 1 <= k <= l");
  require(alpha > 0.0, "alpha must be positive", ErrorCode::kDomain);
  require(alpha <= 0.5, "survival limit is known for alpha <= 1/2 only", ErrorCode::kDomain);
  require(q >= 0.0 && q < 1.0, "q must lie in [0,1)", ErrorCode::kDomain);
  return alpha * std::pow(alpha + (1.0 - alpha) * q, l - k);
}

double halfline_reservoir_density(double alpha, double q) {
  require(alpha > 0.0, "alpha must be positive", ErrorCode::kDomain);
  require(q >= 0.0 && q < 1.0, "q must lie in [0,1)", ErrorCode::kDomain);
  const double gamma = alpha * q;
  const double b = 1.0 - q - alpha + gamma;
  const double a = (b + std::sqrt(b * b + 4.0 * alpha * gamma)) / (2.0 * alpha);
  return 1.0 / (1.0 + a);
}

double kappa(double alpha, double q) {
  check_probability_param(alpha, "alpha");
  check_probability_param(q, "q");
  double sum = 0.0, power = 1.0;
  for (long k = 0; k < 10000000; ++k) {
    const double d = 1.0 - alpha * power;
    const double term = power / (d * d);
    sum += term;
    if (term < 1e-16) break;
    power *= q;
    if (power == 0.0) break;
  }
  return sum;
}

double alpha_of_kappa(double kappa_value, double q) {
  check_probability_param(q, "q");
  const double k0 = 1.0 / (1.0 - q);
  require(kappa_value >= k0 - 1e-15, "kappa must be at least 1/(1-q)", ErrorCode::kDomain);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double v = kappa(mid, q);
    if (std::abs(v - kappa_value) < 1e-12) return mid;
    (v < kappa_value ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double qtazrp_marginal_theory(long l, double alpha, double q) {
  require(l >= 0, "particle count must be nonnegative");
  check_probability_param(alpha, "alpha");
  check_probability_param(q, "q");
  return q_pochhammer(alpha, q) * std::pow(alpha, static_cast<double>(l)) /
         q_pochhammer(q, q, l);
}

double second_class_speed_cdf_theory(long s, double alpha) {
  require(s >= 0, "starting site must be nonnegative");
  check_probability_param(alpha, "alpha");
  if (s == 0) return alpha;
  return 1.0 - alpha * alpha * std::pow(1.0 - alpha, static_cast<double>(s - 1));
}

// ---------------------------------------------------------------------------
// Reports

void EstimateReport::set_theory(double value) {
  theory = value;
  if (std::isnan(value)) {
    zscore = kNaN;
  } else if (stderr_ > 0.0) {
    zscore = (estimate - value) / stderr_;
  } else {
    zscore = estimate == value ? 0.0
                               : std::copysign(std::numeric_limits<double>::infinity(),
                                               estimate - value);
  }
}

EstimateReport bernoulli_report(std::string name, long successes, long trials) {
  EstimateReport r;
  r.name = std::move(name);
  r.trials = trials;
  if (trials > 0) {
    const double p = static_cast<double>(successes) / static_cast<double>(trials);
    r.estimate = p;
    r.stderr_ = trials > 1 ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials - 1)) : 0.0;
  }
  r.theory = kNaN;
  r.zscore = kNaN;
  return r;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

const char* const kReportCsvHeader = "estimate,stderr,trials,discards,theory,zscore,seed";

namespace {

std::string fmt12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

double number_from(const json& j) {
  if (j.is_null()) return kNaN;
  return j.get<double>();
}

}  // namespace

std::string reports_to_csv(const std::vector<EstimateReport>& reports) {
  std::ostringstream os;
  os << kReportCsvHeader << '\n';
  for (const auto& r : reports)
    os << fmt12(r.estimate) << ',' << fmt12(r.stderr_) << ',' << r.trials << ',' << r.discards
       << ',' << fmt12(r.theory) << ',' << fmt12(r.zscore) << ',' << r.seed << '\n';
  return os.str();
}

std::vector<EstimateReport> reports_from_csv(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  require(static_cast<bool>(std::getline(is, line)) && line == kReportCsvHeader,
          "report CSV: unexpected header");
  std::vector<EstimateReport> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    require(cells.size() == 7, "report CSV: expected 7 fields, got " + std::to_string(cells.size()));
    EstimateReport r;
    try {
      r.estimate = std::stod(cells[0]);
      r.stderr_ = std::stod(cells[1]);
      r.trials = std::stol(cells[2]);
      r.discards = std::stol(cells[3]);
      r.theory = std::stod(cells[4]);
      r.zscore = std::stod(cells[5]);
      r.seed = std::stoull(cells[6]);
    } catch (const std::logic_error&) {
      fail(ErrorCode::kInvalidArgument, "report CSV: malformed number in line '" + line + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string reports_to_json(const std::vector<EstimateReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    json params = json::object();
    for (const auto& [k, v] : r.params) params[k] = number_or_null(v);
    arr.push_back(json{{"name", r.name},
                       {"params", params},
                       {"estimate", number_or_null(r.estimate)},
                       {"stderr", number_or_null(r.stderr_)},
                       {"trials", r.trials},
                       {"discards", r.discards},
                       {"theory", number_or_null(r.theory)},
                       {"zscore", number_or_null(r.zscore)},
                       {"seed", r.seed}});
  }
  return arr.dump(2) + "\n";
}

std::vector<EstimateReport> reports_from_json(std::string_view text) {
  std::vector<EstimateReport> out;
  try {
    const json arr = json::parse(text);
    require(arr.is_array(), "report JSON must be an array");
    for (const auto& j : arr) {
      EstimateReport r;
      r.name = j.at("name").get<std::string>();
      for (const auto& [k, v] : j.at("params").items()) r.params[k] = number_from(v);
      r.estimate = number_from(j.at("estimate"));
      r.stderr_ = number_from(j.at("stderr"));
      r.trials = j.at("trials").get<long>();
      r.discards = j.at("discards").get<long>();
      r.theory = number_from(j.at("theory"));
      r.zscore = number_from(j.at("zscore"));
      r.seed = j.at("seed").get<std::uint64_t>();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed report JSON: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Half-line estimators

namespace {

std::vector<std::uint8_t> second_class_labels(long k, long l) {
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(l), kHole);
  for (long p = 1; p < k; ++p) labels[p - 1] = kFirst;
  labels[l - 1] = kSecond;
  return labels;
}

long resolve_window(const HalflineConfig& c, double horizon) {
  if (c.window > 0) return c.window;
  return static_cast<long>(std::ceil(4.0 * horizon)) + 2;
}

void check_halfline_config(const HalflineConfig& c) {
  require(1 <= c.k && c.k <= c.l, "need 1 <= k <= l");
  require(c.alpha > 0.0, "alpha must be positive", ErrorCode::kDomain);
  require(c.q >= 0.0 && c.q < 1.0, "q must lie in [0,1)", ErrorCode::kDomain);
  require(c.t >= 0.0, "t must be nonnegative");
  require(c.trials >= 1, "need at least one trial");
}

void check_discards(long discards, long trials) {
  if (discards * 100 > trials)
    fail(ErrorCode::kExcessiveDiscards,
         std::to_string(discards) + " of " + std::to_string(trials) +
             " trials touched the window edge (> 1%); enlarge the window");
}

std::map<std::string, double> halfline_params(const HalflineConfig& c, long window) {
  return {{"k", double(c.k)},         {"l", double(c.l)}, {"alpha", c.alpha},
          {"q", c.q},                 {"t", c.t},         {"window", double(window)}};
}

double halfline_theory(const HalflineConfig& c) {
  if (c.q == 0.0) return exit_probability_theory(c.k, c.l, c.alpha);
  if (c.alpha <= 0.5) return survival_theory(c.k, c.l, c.alpha, c.q);
  return kNaN;
}

}  // namespace

EstimateReport estimate_survival(const HalflineConfig& c) {
  check_halfline_config(c);
  const auto start = std::chrono::steady_clock::now();
  const long window = resolve_window(c, c.t);
  require(window > c.l, "window must extend beyond l");
  const auto init = second_class_labels(c.k, c.l);
  const LabelChainRules rules = LabelChainRules::second_class(c.alpha, c.q);

  struct Outcome {
    bool discarded = false;
    bool negative = false;
  };
  const auto outcomes = run_trials<Outcome>(c.trials, c.seed, c.workers, [&](Rng& rng, long) {
    LabelChainState st = make_label_state(init, static_cast<int>(window), kHole);
    bool negative = false;
    run_label_chain(st, rules, c.t, rng, [&](double, std::uint8_t from, std::uint8_t to) {
      if (to == kExited) negative = true;
      if (from == kExited) negative = false;
      return false;
    });
    return Outcome{st.window_contact, negative};
  });
  long kept = 0, hits = 0, discards = 0;
  for (const auto& o : outcomes) {
    if (o.discarded) {
      ++discards;
      continue;
    }
    ++kept;
    hits += o.negative;
  }
  check_discards(discards, c.trials);
  EstimateReport r = bernoulli_report("survival", hits, kept);
  r.discards = discards;
  r.seed = c.seed;
  r.params = halfline_params(c, window);
  r.set_theory(halfline_theory(c));
  r.wall_time = seconds_since(start);
  return r;
}

ExitEstimate estimate_exit(const HalflineConfig& c) {
  check_halfline_config(c);
  require(c.q == 0.0, "the exit estimator is defined for q = 0", ErrorCode::kDomain);
  const auto start = std::chrono::steady_clock::now();
  const double horizon = 2.0 * c.t;
  const long window = resolve_window(c, horizon);
  require(window > c.l, "window must extend beyond l");
  const auto init = second_class_labels(c.k, c.l);
  const LabelChainRules rules = LabelChainRules::second_class(c.alpha, 0.0);

  struct Outcome {
    bool discarded = false;
    double exit_time = -1.0;
  };
  const auto outcomes = run_trials<Outcome>(c.trials, c.seed, c.workers, [&](Rng& rng, long) {
    LabelChainState st = make_label_state(init, static_cast<int>(window), kHole);
    double exit_time = -1.0;
    run_label_chain(st, rules, horizon, rng, [&](double time, std::uint8_t, std::uint8_t to) {
      if (to != kExited) return false;
      exit_time = time;
      return true;  // absorbing at q = 0
    });
    return Outcome{exit_time < 0.0 && st.window_contact, exit_time};
  });
  long kept = 0, by_t = 0, by_2t = 0, discards = 0;
  for (const auto& o : outcomes) {
    if (o.discarded) {
      ++discards;
      continue;
    }
    ++kept;
    if (o.exit_time >= 0.0 && o.exit_time <= c.t) ++by_t;
    if (o.exit_time >= 0.0) ++by_2t;
  }
  check_discards(discards, c.trials);
  ExitEstimate out;
  const double theory = exit_probability_theory(c.k, c.l, c.alpha);
  out.at_t = bernoulli_report("exit", by_t, kept);
  out.at_2t = bernoulli_report("exit-2t", by_2t, kept);
  for (EstimateReport* r : {&out.at_t, &out.at_2t}) {
    r->discards = discards;
    r->seed = c.seed;
    r->params = halfline_params(c, window);
    r->set_theory(theory);
  }
  out.at_2t.params["t"] = horizon;
  const double diff = std::abs(out.at_2t.estimate - out.at_t.estimate);
  out.plateau = out.at_t.stderr_ > 0.0 ? diff < 2.0 * out.at_t.stderr_ : diff == 0.0;
  out.at_t.wall_time = out.at_2t.wall_time = seconds_since(start);
  if (c.require_plateau && !out.plateau)
    fail(ErrorCode::kPlateauNotReached,
         "exit estimate still moving between t and 2t (" + fmt12(out.at_t.estimate) + " vs " +
             fmt12(out.at_2t.estimate) + "); increase t");
  return out;
}

// ---------------------------------------------------------------------------
// qTAZRP estimators

QtazrpMarginalEstimate estimate_qtazrp_marginal(const QtazrpMarginalConfig& c) {
  require(c.n >= 1, "N must be positive");
  require(c.kappa_multiplier > 0.0, "kappa multiplier must be positive");
  require(c.trials >= 1, "need at least one trial");
  check_probability_param(c.alpha, "alpha");
  check_probability_param(c.q, "q");
  const auto start = std::chrono::steady_clock::now();
  QtazrpMarginalEstimate out;
  out.time = kappa(c.alpha, c.q) * static_cast<double>(c.n) * c.kappa_multiplier;
  struct Outcome {
    int here = 0;
    int next = 0;
  };
  const auto outcomes = run_trials<Outcome>(c.trials, c.seed, c.workers, [&](Rng& rng, long) {
    const auto counts = sample_qtazrp_counts(static_cast<int>(c.n) + 2, c.q, out.time, rng);
    return Outcome{counts[c.n], counts[c.n + 1]};
  });

  long max_seen = 0;
  for (const auto& o : outcomes) max_seen = std::max<long>(max_seen, o.here);
  const long top = std::max(max_seen, c.max_l);
  std::vector<long> hist(static_cast<std::size_t>(top + 1), 0);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (const auto& o : outcomes) {
    ++hist[o.here];
    sx += o.here;
    sy += o.next;
    sxx += double(o.here) * o.here;
    syy += double(o.next) * o.next;
    sxy += double(o.here) * o.next;
  }
  const double n = static_cast<double>(c.trials);
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n), vy = syy / n - (sy / n) * (sy / n);
  out.neighbour_correlation = vx > 0 && vy > 0 ? cov / std::sqrt(vx * vy) : 0.0;

  // independence of (X_N, X_{N+1}) on a table pooled at >= 4 particles
  constexpr int kCells = 5;
  std::vector<std::vector<double>> table(kCells, std::vector<double>(kCells, 0.0));
  for (const auto& o : outcomes) table[std::min(o.here, kCells - 1)][std::min(o.next, kCells - 1)] += 1;
  std::vector<double> rows(kCells, 0.0), cols(kCells, 0.0);
  for (int i = 0; i < kCells; ++i)
    for (int j = 0; j < kCells; ++j) {
      rows[i] += table[i][j];
      cols[j] += table[i][j];
    }
  double stat = 0.0;
  int used_rows = 0, used_cols = 0;
  for (int i = 0; i < kCells; ++i) used_rows += rows[i] > 0;
  for (int j = 0; j < kCells; ++j) used_cols += cols[j] > 0;
  for (int i = 0; i < kCells; ++i)
    for (int j = 0; j < kCells; ++j) {
      const double e = rows[i] * cols[j] / n;
      if (e > 0) stat += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  const int dof = (used_rows - 1) * (used_cols - 1);
  out.neighbour_chi2_p =
      dof > 0 ? boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), stat)) : 1.0;

  double theory_mass = 0.0, l1 = 0.0;
  for (long l = 0; l <= top; ++l) {
    EstimateReport r = bernoulli_report("qtazrp-marginal", hist[l], c.trials);
    r.seed = c.seed;
    r.params = {{"l", double(l)},   {"n", double(c.n)}, {"alpha", c.alpha},
                {"q", c.q},         {"t", out.time}};
    const double th = qtazrp_marginal_theory(l, c.alpha, c.q);
    r.set_theory(th);
    theory_mass += th;
    l1 += std::abs(r.estimate - th);
    out.per_l.push_back(std::move(r));
  }
  l1 += std::max(0.0, 1.0 - theory_mass);
  out.total_variation = 0.5 * l1;
  const double wall = seconds_since(start);
  for (auto& r : out.per_l) r.wall_time = wall;
  return out;
}

SecondClassSpeedEstimate estimate_second_class_speed(const SecondClassSpeedConfig& c) {
  require(c.s >= 0, "starting site must be nonnegative");
  require(c.n >= 1, "N must be positive");
  require(c.trials >= 1, "need at least one trial");
  require(!c.alphas.empty(), "alpha grid is empty");
  check_probability_param(c.q, "q");
  for (double a : c.alphas) check_probability_param(a, "alpha");
  const auto start = std::chrono::steady_clock::now();
  SecondClassSpeedEstimate out;
  for (double a : c.alphas) out.times.push_back(kappa(a, c.q) * static_cast<double>(c.n));
  std::vector<double> sorted = out.times;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto positions =
      run_trials<std::vector<int>>(c.trials, c.seed, c.workers, [&](Rng& rng, long) {
        return sample_qtazrp_second_class(static_cast<int>(c.s), c.q, sorted, rng);
      });

  for (std::size_t g = 0; g < c.alphas.size(); ++g) {
    const auto idx = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), out.times[g]) - sorted.begin());
    long hits = 0;
    for (const auto& p : positions) {
      if (p[idx] >= c.n) ++hits;
      if (sorted[idx] > 0) out.max_speed = std::max(out.max_speed, p[idx] / sorted[idx]);
    }
    EstimateReport r = bernoulli_report("second-class-speed", hits, c.trials);
    r.seed = c.seed;
    r.params = {{"s", double(c.s)}, {"alpha", c.alphas[g]}, {"q", c.q},
                {"n", double(c.n)}, {"t", out.times[g]}};
    r.set_theory(second_class_speed_cdf_theory(c.s, c.alphas[g]));
    out.per_alpha.push_back(std::move(r));
  }
  const double wall = seconds_since(start);
  for (auto& r : out.per_alpha) r.wall_time = wall;
  return out;
}

// ---------------------------------------------------------------------------
// JSON configs

namespace {

json parse_object(std::string_view text, const std::set<std::string>& allowed) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("malformed config JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  for (const auto& [k, v] : j.items())
    require(allowed.count(k) > 0, "unknown config key '" + k + "'");
  return j;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::kInvalidArgument, std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

HalflineConfig halfline_config_from_json(std::string_view text) {
  const json j = parse_object(text, {"k", "l", "alpha", "q", "t", "window", "trials", "seed",
                                     "workers", "require_plateau"});
  HalflineConfig c;
  read(j, "k", c.k);
  read(j, "l", c.l);
  read(j, "alpha", c.alpha);
  read(j, "q", c.q);
  read(j, "t", c.t);
  read(j, "window", c.window);
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  read(j, "workers", c.workers);
  read(j, "require_plateau", c.require_plateau);
  return c;
}

QtazrpMarginalConfig qtazrp_marginal_config_from_json(std::string_view text) {
  const json j = parse_object(text, {"n", "kappa_multiplier", "q", "alpha", "trials", "seed",
                                     "workers", "max_l"});
  QtazrpMarginalConfig c;
  read(j, "n", c.n);
  read(j, "kappa_multiplier", c.kappa_multiplier);
  read(j, "q", c.q);
  read(j, "alpha", c.alpha);
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  read(j, "workers", c.workers);
  read(j, "max_l", c.max_l);
  return c;
}

SecondClassSpeedConfig second_class_speed_config_from_json(std::string_view text) {
  const json j = parse_object(text, {"s", "q", "alphas", "n", "trials", "seed", "workers"});
  SecondClassSpeedConfig c;
  read(j, "s", c.s);
  read(j, "q", c.q);
  read(j, "alphas", c.alphas);
  read(j, "n", c.n);
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  read(j, "workers", c.workers);
  return c;
}

// ---------------------------------------------------------------------------
// Type-position symmetry

SymmetryCheck type_position_symmetry(int rank, int k, int l, const Rational& alpha,
                                     const Rational& q, double t) {
  const SystemSpec spec = make_halfline(rank, alpha, q);
  require(1 <= k && k <= l && l <= rank, "need 1 <= k <= l <= rank");
  std::vector<int> word;
  for (int s = l - 1; s >= k; --s) word.push_back(s);  // s_k acts first
  const GroupElement g = GroupElement::from_word(spec.family, word);

  const UniformizedLaw side_a = exact_continuous(HeckeElement::basis(g, q), spec.kernels, t);
  const UniformizedLaw side_b =
      exact_continuous(HeckeElement::unit(spec.family, q), spec.kernels, t)
          .transformed([&](const HeckeElement& x) {
            HeckeElement y = x;
            for (int s = l - 1; s >= k; --s) y = mul_gen_left(s, y);
            return y;
          });

  SymmetryCheck out;
  out.exact_equal = side_a.terms.size() == side_b.terms.size();
  for (std::size_t n = 0; n < side_a.terms.size(); ++n) {
    Rational pa = 0, pb = 0;
    for (const auto& [w, c] : side_a.terms[n].terms())
      if (w.position_of(k) < 0) pa += c;
    for (const auto& [w, c] : side_b.terms[n].terms())
      if (w.type_at(k) < 0) pb += c;
    out.probability_a += side_a.weights[n] * pa.get_d();
    out.probability_b += side_b.weights[n] * pb.get_d();
    if (pa != pb) out.exact_equal = false;
    out.side_a.push_back(pa);
    out.side_b.push_back(pb);
  }
  return out;
}

}  // namespace hw
