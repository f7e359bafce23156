// End-to-end acceptance run: one PASS/FAIL line per criterion, at full
// scale. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "heckewalk/checks.hpp"
#include "heckewalk/coxeter.hpp"
#include "heckewalk/experiments.hpp"
#include "heckewalk/hecke.hpp"
#include "heckewalk/mallows.hpp"
#include "heckewalk/rational.hpp"
#include "heckewalk/stats.hpp"
#include "heckewalk/systems.hpp"
#include "heckewalk/walks.hpp"

using namespace hw;

namespace {

Rational r(long p, long q = 1) { return Rational(p, q); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string describe(const EstimateReport& rep) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "estimate %.5f +- %.5f vs %.5f (z = %+.2f, discards %ld)",
                rep.estimate, rep.stderr_, rep.theory, rep.zscore, rep.discards);
  return buf;
}

bool z_ok(const EstimateReport& rep) { return std::isfinite(rep.zscore) && std::abs(rep.zscore) <= 4.0; }

// Integer power of a rational, by repeated multiplication.
Rational power(const Rational& x, int n) {
  Rational out = 1;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

// ---- 1 ------------------------------------------------------------------------

Outcome algebra() {
  Outcome o{true, ""};
  for (const auto fam : {CoxeterFamily::type_a(4), CoxeterFamily::type_b(3)}) {
    for (const Rational& q : {r(0), r(1, 3), r(1, 2), r(1)}) {
      const AlgebraCheck c = algebra_identities(fam, q, 2024, 100, 50);
      if (!c.ok()) {
        o.pass = false;
        o.detail += "failure at q=" + rational_to_string(q) + "; ";
      }
      if (c.associativity.checked < 100 || c.anti_homomorphism.checked < 50) o.pass = false;
    }
  }
  if (o.pass) o.detail = "quadratic, braid, 100 triples, 50 stochastic pairs; S_4 and B_3; q in {0,1/3,1/2,1}";
  return o;
}

// ---- 2 ------------------------------------------------------------------------

Outcome stationarity() {
  Outcome o{true, ""};
  long kernels = 0;
  for (const Rational& q : {r(1, 3), r(1, 2)}) {
    const StationarityCheck c = mallows_stationarity(4, q, {r(0), r(1, 4), r(1, 2), r(3, 4), r(1)});
    kernels += c.kernels;
    if (!c.ok()) {
      o.pass = false;
      o.detail += "residual " + rational_to_string(c.max_residual) + " at q=" + rational_to_string(q) + "; ";
    }
  }
  if (o.pass) o.detail = std::to_string(kernels) + " kernels, every residual exactly 0";
  return o;
}

// ---- 3 ------------------------------------------------------------------------

Outcome mallows_sampler() {
  const int n = 4;
  const long samples = 100000;
  const MallowsSpec spec = MallowsSpec::with_n(n, 0.5);
  std::vector<int> labels{1, 2, 3, 4};
  Rng rng(31);
  std::map<std::vector<int>, long> counts;
  for (long i = 0; i < samples; ++i) ++counts[sample_mallows(spec, rng)];
  std::map<std::vector<int>, double> probs;
  std::vector<int> perm = labels;
  do probs[perm] = mallows_pmf(perm, labels, r(1, 2)).get_d();
  while (std::next_permutation(perm.begin(), perm.end()));
  const ChiSquareResult chi = chi_square_gof(counts, probs);

  bool exact = true;
  long compared = 0;
  const CoxeterFamily s3 = CoxeterFamily::type_a(3);
  for (const Rational& q : {r(0), r(1, 3), r(1, 2)})
    for (int a = 1; a <= 3; ++a)
      for (int b = a + 1; b <= 3; ++b) {
        const HeckeElement block = mallows_block(s3, a, b, q, true);
        for (const auto& w : enumerate_group(s3)) {
          ++compared;
          exact = exact && equilibrate_block_law(w, a, b, q) == mul(block, HeckeElement::basis(w, q));
        }
      }
  return {chi.p_value > 1e-3 && exact,
          fmt("chi-square p = %.4f", chi.p_value) + " at 1e5 samples; block law " +
              (exact ? "exactly equal" : "DIFFERS") + " on " + std::to_string(compared) + " rows"};
}

// ---- 4 ------------------------------------------------------------------------

Outcome asep_qm() {
  const Rational q = r(1, 2);
  const int m = 2;
  const SystemSpec spec = make_asep_qm(2, m, q);
  const HeckeElement k = *spec.kernels[0].exact_element(spec.family);

  double worst_p = 1.0;
  Rng rng(41);
  for (const auto& w : enumerate_group(spec.family)) {
    std::map<GroupElement, long> counts;
    for (int i = 0; i < 100000; ++i) {
      GroupElement v = w;
      spec.kernels[0].apply(v, rng);
      ++counts[v];
    }
    std::map<GroupElement, double> probs;
    const HeckeElement row = mul(k, HeckeElement::basis(w, q));
    for (const auto& [u, p] : row.terms()) probs[u] = p.get_d();
    worst_p = std::min(worst_p, chi_square_gof(counts, probs).p_value);
  }

  // enumerated lumped jumps against the closed forms, for every particle/hole cut
  const Rational d = (1 - power(q, m)) * (1 - power(q, m));
  bool exact = true;
  for (int c = 0; c <= 2 * m; ++c) {
    for (const auto& w : enumerate_group(spec.family)) {
      int n1 = 0, n2 = 0;
      for (int p = 1; p <= m; ++p) n1 += w.type_at(p) <= c;
      for (int p = m + 1; p <= 2 * m; ++p) n2 += w.type_at(p) <= c;
      Rational right = 0, left = 0;
      const HeckeElement row = mul(k, HeckeElement::basis(w, q));
      for (const auto& [u, p] : row.terms()) {
        int u1 = 0;
        for (int pos = 1; pos <= m; ++pos) u1 += u.type_at(pos) <= c;
        if (u1 == n1 - 1) right += p;
        if (u1 == n1 + 1) left += p;
      }
      const Rational right_formula = (1 - power(q, n1)) * (1 - power(q, m - n2)) / d;
      const Rational left_formula =
          power(q, m - n2 + n1 + 1) * (1 - power(q, n2)) * (1 - power(q, m - n1)) / d;
      exact = exact && right == right_formula && left == left_formula;
    }
  }
  return {worst_p > 1e-3 && exact, fmt("smallest chi-square p over 24 starts = %.4f", worst_p) +
                                       "; jump probabilities " + (exact ? "exact" : "DIFFER")};
}

// ---- 5, 6 ---------------------------------------------------------------------

Outcome exit_case(long k, long l, double alpha, double target) {
  HalflineConfig c;
  c.k = k;
  c.l = l;
  c.alpha = alpha;
  c.t = 200.0;
  c.window = 800;
  c.trials = 100000;
  c.seed = 5;
  c.require_plateau = false;
  const ExitEstimate e = estimate_exit(c);
  const bool theory_ok = std::abs(e.at_t.theory - target) < 1e-12;
  std::string d = describe(e.at_t) + fmt("; at 2t %.5f", e.at_2t.estimate) +
                  (e.plateau ? " (plateau reached)" : " (no plateau)");
  if (!theory_ok) d += fmt("; oracle %.6f differs from the stated value", e.at_t.theory);
  return {theory_ok && z_ok(e.at_t) && e.at_t.discards == 0, d};
}

Outcome exit_probability() {
  const Outcome a = exit_case(1, 3, 0.3, 0.027);
  const Outcome b = exit_case(2, 3, 1.0, 0.34375);
  // the block-occupancy value for the l - k + 1 = 2 sites starting at k = 2
  const double block = (1 + (2 * rho_alpha(2, 1.0) - 1) * 2) / 4;
  return {a.pass && b.pass, "alpha=0.3: " + a.detail + (a.pass ? "" : " [FAIL]") +
                                " | alpha=1: " + b.detail + (b.pass ? "" : " [FAIL]") +
                                fmt(" (block-occupancy value %.5f)", block)};
}

Outcome survival() {
  HalflineConfig c;
  c.k = 1;
  c.l = 3;
  c.alpha = 0.3;
  c.q = 0.5;
  c.t = 200.0;
  c.trials = 100000;
  c.seed = 6;
  const EstimateReport rep = estimate_survival(c);
  const bool theory_ok = std::abs(rep.theory - 0.12675) < 1e-12;
  const double rho = halfline_reservoir_density(0.3, 0.5);
  const double rho_value = rho * std::pow(rho + (1 - rho) * 0.5, 2);
  return {theory_ok && z_ok(rep) && rep.discards == 0,
          describe(rep) + fmt("; with the reservoir density %.4f", rho) +
              fmt(" the same induction gives %.5f", rho_value)};
}

// ---- 7 ------------------------------------------------------------------------

Outcome qtazrp_marginal() {
  QtazrpMarginalConfig c;
  c.n = 200;
  c.trials = 100000;
  c.seed = 7;
  const QtazrpMarginalEstimate e = estimate_qtazrp_marginal(c);
  const EstimateReport& p0 = e.per_l.at(0);
  const double target = q_pochhammer(0.5, 0.5, std::nullopt);
  const bool ok = std::abs(p0.estimate - target) <= 0.02 && e.total_variation < 0.03;
  return {ok, fmt("P(X_N = 0) = %.4f", p0.estimate) + fmt(" vs %.4f", target) +
                  fmt(", TV = %.4f", e.total_variation) + fmt(" at t = %.2f", e.time)};
}

// ---- 8 ------------------------------------------------------------------------

Outcome speed() {
  std::string d;
  bool ok = true;
  for (long s : {0L, 1L}) {
    SecondClassSpeedConfig c;
    c.s = s;
    c.seed = 8;
    const SecondClassSpeedEstimate e = estimate_second_class_speed(c);
    const EstimateReport& rep = e.per_alpha.at(0);
    const double target = s == 0 ? 0.5 : 0.75;
    const double bound = (1 - c.q) + 5 / std::sqrt(e.times.at(0));
    const bool pass = std::abs(rep.estimate - target) <= 0.03 && e.max_speed <= bound;
    ok = ok && pass;
    d += "s=" + std::to_string(s) + fmt(": tail %.4f", rep.estimate) + fmt(" vs %.2f", target) +
         fmt(", max speed %.3f", e.max_speed) + fmt(" <= %.3f", bound) + (pass ? "" : " [FAIL]") +
         (s == 0 ? " | " : "");
  }
  return {ok, d};
}

// ---- 9 ------------------------------------------------------------------------

Outcome symmetry() {
  bool ok = true;
  std::string d;
  for (auto [k, l] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{2, 3}}) {
    const SymmetryCheck c = type_position_symmetry(3, k, l, r(1, 2), r(1, 3), 1.0);
    ok = ok && c.exact_equal && c.side_a == c.side_b;
    d += "k=" + std::to_string(k) + ",l=" + std::to_string(l) + fmt(": %.10f", c.probability_a) +
         (c.exact_equal ? " equal; " : " DIFFER; ");
  }
  return {ok, d + "B_3, t=1, exact rationals"};
}

// ---- 10 -----------------------------------------------------------------------

Outcome determinism() {
  HalflineConfig h;
  h.k = 1;
  h.l = 3;
  h.alpha = 0.3;
  h.q = 0.5;
  h.t = 20.0;
  h.trials = 4000;
  h.seed = 10;
  QtazrpMarginalConfig m;
  m.n = 30;
  m.trials = 2000;
  m.seed = 10;
  SecondClassSpeedConfig s;
  s.n = 30;
  s.trials = 2000;
  s.seed = 10;
  auto run = [&](int workers) {
    h.workers = m.workers = s.workers = workers;
    std::vector<EstimateReport> all{estimate_survival(h)};
    for (auto& r : estimate_qtazrp_marginal(m).per_l) all.push_back(r);
    for (auto& r : estimate_second_class_speed(s).per_alpha) all.push_back(r);
    return reports_to_csv(all) + reports_to_json(all);
  };
  const std::string first = run(1);
  const std::string again = run(1);
  const std::string threaded = run(3);
  const bool same = first == again;
  return {same && first == threaded,
          std::string("rerun ") + (same ? "byte-identical" : "DIFFERS") + ", different worker count " +
              (first == threaded ? "byte-identical" : "DIFFERS") + " (" + std::to_string(first.size()) +
              " bytes)"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "algebra identities", 60, algebra},
      {2, "Mallows stationarity", 60, stationarity},
      {3, "Mallows sampler", 60, mallows_sampler},
      {4, "ASEP(q,M) kernel", 300, asep_qm},
      {5, "exit probability", 600, exit_probability},
      {6, "survival probability", 600, survival},
      {7, "qTAZRP marginal", 900, qtazrp_marginal},
      {8, "second-class speed", 900, speed},
      {9, "type-position symmetry", 120, symmetry},
      {10, "determinism", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s budget", c.budget);
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}
