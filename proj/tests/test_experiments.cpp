#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "heckewalk/error.hpp"
#include "heckewalk/experiments.hpp"

using namespace hw;

namespace {

Rational r(long p, long q = 1) {
  Rational v(p, q);
  v.canonicalize();
  return v;
}

// Direct floating evaluation of the density series with log-gamma
// coefficients; fine for small z where cancellation is mild.
double rho_floating(long z, double alpha) {
  if (z == 1) return 1.0 - 1.0 / (4.0 * alpha);
  long double sum = 0.0L;
  for (long k = 2; k <= z; ++k) {
    const long double log_coef = std::lgamma(2.0L * (z - 1) - k + 1) - std::lgamma(z * 1.0L) -
                                 std::lgamma(z - k + 1.0L);
    sum += std::exp(log_coef) * (k - 1) *
           ((1 + k) * std::pow(2.0L, k) - std::pow(1.0L / alpha, k));
  }
  return static_cast<double>(sum / std::pow(4.0L, z));
}

double kappa_direct(double alpha, double q) {
  double sum = 0.0;
  for (int k = 0; k < 4000; ++k) {
    const double p = std::pow(q, k);
    sum += p / ((1 - alpha * p) * (1 - alpha * p));
  }
  return sum;
}

}  // namespace

TEST_CASE("q-Pochhammer symbols") {
  CHECK(q_pochhammer(0.5, 0.5) == doctest::Approx(0.288788095086602).epsilon(1e-13));
  CHECK(q_pochhammer(0.3, 0.7, 0) == 1.0);
  CHECK(q_pochhammer(0.3, 0.7, 2) == doctest::Approx(0.7 * (1 - 0.21)));
  CHECK(q_pochhammer(0.0, 0.9) == 1.0);
  // finite products converge to the infinite one
  CHECK(q_pochhammer(0.4, 0.6, 200) == doctest::Approx(q_pochhammer(0.4, 0.6)).epsilon(1e-14));
  CHECK_THROWS_AS(q_pochhammer(0.5, 1.0), Error);
}

TEST_CASE("stationary densities of the q=0 half-line") {
  for (long z = 1; z <= 40; ++z) CHECK(rho_alpha_exact(z, r(1, 2)) == r(1, 2));
  CHECK(rho_alpha_exact(2, r(1)) == r(11, 16));
  CHECK(rho_alpha_exact(1, r(1)) == r(3, 4));
  CHECK(rho_alpha_exact(1, r(3, 5)) == 1 - 1 / (4 * r(3, 5)));
  for (double a : {0.55, 0.7, 1.0, 2.0})
    for (long z = 1; z <= 15; ++z)
      CHECK(rho_alpha(z, a) == doctest::Approx(rho_floating(z, a)).epsilon(1e-9));
  // densities decrease towards the bulk value 1/2
  for (long z = 1; z < 30; ++z) CHECK(rho_alpha(z + 1, 1.0) < rho_alpha(z, 1.0));
  CHECK(std::abs(rho_alpha(2000, 1.0) - 0.5) < 0.01);
  CHECK(rho_alpha(2000, 1.0) > 0.5);
  CHECK_THROWS_AS(rho_alpha(3, 0.4), Error);
  CHECK_THROWS_AS(rho_alpha(0, 0.7), Error);

  for (long z = 1; z <= 6; ++z) CHECK(block_occupancy_theory(z, 1, 0.8) == rho_alpha(z, 0.8));
  CHECK(block_occupancy_theory(3, 4, 0.5) == doctest::Approx(1.0 / 16));
}

TEST_CASE("exit and survival limits") {
  CHECK(exit_probability_theory(1, 3, 0.3) == doctest::Approx(0.027));
  CHECK(exit_probability_theory(2, 3, 1.0) == doctest::Approx(0.34375));
  CHECK(exit_probability_theory(4, 4, 0.2) == doctest::Approx(0.2));
  CHECK(exit_probability_theory(2, 3, 0.3) == doctest::Approx(0.09));
  // the two branches agree at alpha = 1/2
  for (long k = 1; k <= 6; ++k)
    for (long l = k; l <= k + 10; ++l) {
      const double expected = std::pow(2.0, -(l - k + 1));
      CHECK(exit_probability_theory(k, l, 0.5) == doctest::Approx(expected).epsilon(1e-14));
      CHECK(exit_probability_theory(k, l, std::nextafter(0.5, 0.0)) ==
            doctest::Approx(expected).epsilon(1e-12));
      CHECK(exit_probability_theory(k, l, std::nextafter(0.5, 1.0)) ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  CHECK_THROWS_AS(exit_probability_theory(3, 2, 0.3), Error);

  CHECK(survival_theory(1, 3, 0.3, 0.5) == doctest::Approx(0.12675));
  CHECK(survival_theory(2, 2, 0.4, 0.7) == doctest::Approx(0.4));
  for (double a : {0.05, 0.2, 0.3, 0.45, 0.5})
    for (long d = 0; d <= 8; ++d)
      CHECK(survival_theory(1, 1 + d, a, 0.0) ==
            doctest::Approx(exit_probability_theory(1, 1 + d, a)).epsilon(1e-14));
  CHECK_THROWS_AS(survival_theory(1, 2, 0.6, 0.5), Error);
  CHECK_THROWS_AS(survival_theory(1, 2, 0.3, 1.0), Error);
}

TEST_CASE("boundary reservoir density") {
  for (double a : {0.1, 0.3, 0.5, 0.9}) CHECK(halfline_reservoir_density(a, 0.0) == doctest::Approx(a));
  for (double q : {0.1, 0.5, 0.9}) CHECK(halfline_reservoir_density(0.5, q) == doctest::Approx(0.5));
  CHECK(halfline_reservoir_density(0.3, 0.5) == doctest::Approx(0.4));
  // a Bernoulli(rho) product balances the boundary current against the bulk
  for (double a : {0.2, 0.3, 0.4})
    for (double q : {0.2, 0.5, 0.8}) {
      const double rho = halfline_reservoir_density(a, q);
      CHECK(a * (1 - rho) - a * q * rho == doctest::Approx((1 - q) * rho * (1 - rho)));
    }
}

TEST_CASE("kappa and its inverse") {
  for (double q : {0.0, 0.25, 0.5, 0.9}) CHECK(kappa(0.0, q) == doctest::Approx(1 / (1 - q)));
  CHECK(kappa(0.5, 0.5) == doctest::Approx(kappa_direct(0.5, 0.5)).epsilon(1e-14));
  CHECK(kappa(0.999, 0.5) > 1e3);
  for (double q : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double a : {0.01, 0.2, 0.5, 0.8, 0.95}) {
      CHECK(kappa(a, q) == doctest::Approx(kappa_direct(a, q)).epsilon(1e-12));
      CHECK(std::abs(alpha_of_kappa(kappa(a, q), q) - a) < 1e-10);
    }
  for (double a = 0.0; a < 0.95; a += 0.05) CHECK(kappa(a + 0.05, 0.5) > kappa(a, 0.5));
  CHECK(alpha_of_kappa(2.0, 0.5) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS_AS(alpha_of_kappa(1.5, 0.5), Error);
  CHECK_THROWS_AS(kappa(1.0, 0.5), Error);
}

TEST_CASE("qTAZRP limits") {
  CHECK(qtazrp_marginal_theory(0, 0.5, 0.5) == doctest::Approx(q_pochhammer(0.5, 0.5)));
  CHECK(qtazrp_marginal_theory(0, 0.0, 0.5) == 1.0);
  CHECK(qtazrp_marginal_theory(3, 0.0, 0.5) == 0.0);
  // truncation at l = 200 leaves a tail of order alpha^200
  for (double q : {0.0, 0.2, 0.5, 0.8})
    for (double a : {0.1, 0.5, 0.8}) {
      double sum = 0.0;
      for (long l = 0; l <= 200; ++l) sum += qtazrp_marginal_theory(l, a, q);
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  double sum60 = 0.0;
  for (long l = 0; l <= 60; ++l) sum60 += qtazrp_marginal_theory(l, 0.5, 0.5);
  CHECK(std::abs(sum60 - 1.0) < 1e-12);

  CHECK(second_class_speed_cdf_theory(0, 0.3) == 0.3);
  CHECK(second_class_speed_cdf_theory(0, 0.0) == 0.0);
  CHECK(second_class_speed_cdf_theory(1, 0.3) == doctest::Approx(1 - 0.09));
  CHECK(second_class_speed_cdf_theory(2, 0.5) == doctest::Approx(0.875));
  CHECK_THROWS_AS(second_class_speed_cdf_theory(-1, 0.5), Error);
}

TEST_CASE("report serialization") {
  EstimateReport a = bernoulli_report("survival", 30, 100);
  CHECK(a.estimate == doctest::Approx(0.3));
  CHECK(a.stderr_ == doctest::Approx(std::sqrt(0.3 * 0.7 / 99)));
  a.set_theory(0.25);
  CHECK(a.zscore == doctest::Approx((a.estimate - 0.25) / a.stderr_));
  a.seed = 987654321012345ULL;
  a.discards = 2;
  a.params = {{"alpha", 0.3}, {"k", 1}};

  EstimateReport b = bernoulli_report("exit", 0, 50);
  b.set_theory(0.0);
  CHECK(b.zscore == 0.0);
  EstimateReport c = bernoulli_report("exit", 0, 50);
  c.set_theory(std::numeric_limits<double>::quiet_NaN());
  CHECK(std::isnan(c.zscore));
  EstimateReport d = bernoulli_report("exit", 5, 5);
  d.set_theory(0.5);
  CHECK(std::isinf(d.zscore));

  const std::vector<EstimateReport> reports{a, b, c};
  const std::string csv = reports_to_csv(reports);
  CHECK(csv.substr(0, csv.find('\n')) == "estimate,stderr,trials,discards,theory,zscore,seed");
  const auto parsed = reports_from_csv(csv);
  REQUIRE(parsed.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(parsed[i].estimate == round12(reports[i].estimate));
    CHECK(parsed[i].stderr_ == round12(reports[i].stderr_));
    CHECK(parsed[i].trials == reports[i].trials);
    CHECK(parsed[i].discards == reports[i].discards);
    CHECK(parsed[i].seed == reports[i].seed);
  }
  CHECK(std::isnan(parsed[2].theory));
  CHECK(reports_to_csv(parsed) == csv);

  const std::string js = reports_to_json(reports);
  const auto back = reports_from_json(js);
  REQUIRE(back.size() == 3);
  CHECK(back[0].name == "survival");
  CHECK(back[0].params.at("alpha") == 0.3);
  CHECK(back[0].zscore == round12(a.zscore));
  CHECK(std::isnan(back[2].zscore));
  CHECK(reports_to_json(back) == js);
  CHECK(reports_to_csv(back) == csv);

  CHECK(round12(1.0 / 3) == 0.333333333333);
  CHECK_THROWS_AS(reports_from_csv("a,b\n"), Error);
  CHECK_THROWS_AS(reports_from_csv(std::string(kReportCsvHeader) + "\n1,2,3\n"), Error);
  CHECK_THROWS_AS(reports_from_json("{"), Error);
}

TEST_CASE("trial runner is independent of the worker count") {
  auto f = [](Rng& rng, long i) { return rng.uniform() + static_cast<double>(i); };
  const auto one = run_trials<double>(500, 42, 1, f);
  const auto four = run_trials<double>(500, 42, 4, f);
  CHECK(one == four);
  CHECK(run_trials<double>(500, 43, 1, f) != one);
  auto boom = [](Rng&, long i) -> int {
    if (i == 77) fail(ErrorCode::kInternal, "boom");
    return 0;
  };
  CHECK_THROWS_AS(run_trials<int>(200, 1, 3, boom), Error);
}

TEST_CASE("half-line estimators") {
  HalflineConfig c;
  c.k = 1;
  c.l = 1;
  c.alpha = 0.3;
  c.q = 0.0;
  c.t = 60;
  c.trials = 4000;
  c.seed = 11;
  c.workers = 2;
  const EstimateReport s = estimate_survival(c);
  CHECK(s.theory == doctest::Approx(0.3));
  CHECK(std::abs(s.zscore) <= 4);
  CHECK(s.discards == 0);
  CHECK(s.params.at("window") == 242);

  const ExitEstimate e = estimate_exit(c);
  CHECK(std::abs(e.at_t.zscore) <= 4);
  CHECK(e.at_2t.estimate >= e.at_t.estimate);
  CHECK(e.plateau);

  // reruns are byte-identical, also across worker counts
  HalflineConfig c2 = c;
  c2.workers = 1;
  CHECK(reports_to_csv({estimate_survival(c2)}) == reports_to_csv({s}));
  CHECK(reports_to_json({estimate_exit(c2).at_t}) == reports_to_json({e.at_t}));

  // the tracked type starts positive
  HalflineConfig zero = c;
  zero.t = 0.0;
  zero.trials = 100;
  CHECK(estimate_survival(zero).estimate == 0.0);

  HalflineConfig tiny = c;
  tiny.window = 6;
  CHECK_THROWS_AS(estimate_survival(tiny), Error);
  try {
    estimate_survival(tiny);
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::kExcessiveDiscards);
  }

  HalflineConfig qpos = c;
  qpos.q = 0.5;
  CHECK_THROWS_AS(estimate_exit(qpos), Error);

  // a horizon far too short to plateau
  HalflineConfig early = c;
  early.t = 0.5;
  early.l = 2;
  early.trials = 20000;
  early.window = 40;
  CHECK_THROWS_AS(estimate_exit(early), Error);
  early.require_plateau = false;
  CHECK_FALSE(estimate_exit(early).plateau);

  HalflineConfig bad = c;
  bad.k = 3;
  bad.l = 2;
  CHECK_THROWS_AS(estimate_survival(bad), Error);
}

TEST_CASE("qTAZRP estimators") {
  QtazrpMarginalConfig m;
  m.n = 12;
  m.trials = 3000;
  m.seed = 3;
  m.workers = 2;
  m.max_l = 10;
  const auto est = estimate_qtazrp_marginal(m);
  CHECK(est.time == doctest::Approx(kappa(0.5, 0.5) * 12));
  REQUIRE(est.per_l.size() >= 11);
  double total = 0.0;
  for (const auto& r : est.per_l) total += r.estimate;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(est.per_l[0].theory == doctest::Approx(q_pochhammer(0.5, 0.5)));
  CHECK(est.total_variation >= 0.0);
  CHECK(est.total_variation < 0.1);
  CHECK(std::abs(est.neighbour_correlation) < 0.2);
  m.workers = 1;
  CHECK(reports_to_csv(estimate_qtazrp_marginal(m).per_l) == reports_to_csv(est.per_l));

  SecondClassSpeedConfig s;
  s.n = 20;
  s.trials = 1000;
  s.alphas = {0.3, 0.5};
  s.seed = 8;
  const auto sp = estimate_second_class_speed(s);
  REQUIRE(sp.per_alpha.size() == 2);
  CHECK(sp.times[1] == doctest::Approx(kappa(0.5, 0.5) * 20));
  CHECK(sp.per_alpha[0].theory == 0.3);
  CHECK(sp.max_speed <= 0.5 + 5 / std::sqrt(sp.times[0]));
  CHECK(std::abs(sp.per_alpha[1].estimate - 0.5) < 0.1);
  CHECK(reports_to_csv(estimate_second_class_speed(s).per_alpha) == reports_to_csv(sp.per_alpha));

  QtazrpMarginalConfig bad = m;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(estimate_qtazrp_marginal(bad), Error);
}

TEST_CASE("JSON configs") {
  const HalflineConfig c =
      halfline_config_from_json(R"({"k":2,"l":3,"alpha":1.0,"t":50,"trials":10,"seed":9})");
  CHECK(c.k == 2);
  CHECK(c.l == 3);
  CHECK(c.alpha == 1.0);
  CHECK(c.q == 0.0);
  CHECK(c.seed == 9);
  CHECK(c.window == 0);
  CHECK_THROWS_AS(halfline_config_from_json(R"({"kk":2})"), Error);
  CHECK_THROWS_AS(halfline_config_from_json(R"({"k":"two"})"), Error);
  CHECK_THROWS_AS(halfline_config_from_json("[1]"), Error);
  const auto m = qtazrp_marginal_config_from_json(R"({"n":50,"kappa_multiplier":1.5})");
  CHECK(m.n == 50);
  CHECK(m.kappa_multiplier == 1.5);
  const auto s = second_class_speed_config_from_json(R"({"s":1,"alphas":[0.2,0.4]})");
  CHECK(s.s == 1);
  CHECK(s.alphas == std::vector<double>{0.2, 0.4});
  CHECK_THROWS_AS(second_class_speed_config_from_json(R"({"alpha":0.2})"), Error);
}

TEST_CASE("type-position symmetry on B_3") {
  for (auto [k, l] : {std::pair{1, 3}, std::pair{2, 3}, std::pair{1, 2}, std::pair{2, 2}}) {
    const SymmetryCheck sym = type_position_symmetry(3, k, l, r(1, 2), r(1, 3), 1.0);
    CHECK(sym.exact_equal);
    CHECK(sym.side_a == sym.side_b);
    CHECK(sym.probability_a == doctest::Approx(sym.probability_b).epsilon(1e-15));
    CHECK(sym.probability_a > 0.0);
    CHECK(sym.probability_a < 1.0);
  }
  // at Poisson term 0 nothing has moved: type k is positive
  const SymmetryCheck sym = type_position_symmetry(3, 1, 3, r(2, 3), r(1, 2), 1.0);
  REQUIRE(!sym.side_a.empty());
  CHECK(sym.side_a[0] == 0);
  CHECK(sym.exact_equal);
  CHECK_THROWS_AS(type_position_symmetry(3, 2, 4, r(1, 2), r(1, 2), 1.0), Error);
}
