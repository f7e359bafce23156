#include "heckewalk/walks.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "heckewalk/error.hpp"

namespace hw {

namespace {

void check_q(double q) {
  require(q >= 0.0 && q <= 1.0, "q must lie in [0,1]", ErrorCode::kDomain);
}

void check_exact_rank(const CoxeterFamily& fam) {
  const int limit = fam.family == Family::A ? 7 : 5;
  require(fam.rank <= limit,
          "exact distribution refused for " + fam.name() + " (too large)",
          ErrorCode::kTooLarge);
}

std::size_t pick_cumulative(const std::vector<double>& cumulative, double u) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

void record(WalkState& st, const EventLogOptions& log, double time, int kernel, bool moved) {
  if (!log.enabled) return;
  st.events.push_back({time, kernel, moved});
  if (log.capacity > 0 && st.events.size() > log.capacity) st.events.pop_front();
}

}  // namespace

bool step_basis_in_place(GroupElement& w, int s, double q, Rng& rng) {
  if (w.length_delta(s) > 0 || rng.bernoulli(q)) {
    w.apply_left_in_place(s);
    return true;
  }
  return false;
}

GroupElement step_basis(const GroupElement& w, int s, double q, Rng& rng) {
  check_q(q);
  GroupElement out = w;
  step_basis_in_place(out, s, q, rng);
  return out;
}

GroupElement step_element(const GroupElement& w, const HeckeElement& h, Rng& rng) {
  GroupElement out = w;
  GeneratorKernel::element(h).apply(out, rng);
  return out;
}

GeneratorKernel GeneratorKernel::basis(int s, const Rational& q, const Rational& rate) {
  require(q >= 0 && q <= 1, "q must lie in [0,1]", ErrorCode::kDomain);
  require(rate > 0, "kernel rate must be positive");
  GeneratorKernel k;
  k.kind_ = Kind::Basis;
  k.name_ = "T_s" + std::to_string(s);
  k.generator_ = s;
  k.q_ = q;
  k.q_d_ = q.get_d();
  k.rate_ = rate;
  k.rate_d_ = rate.get_d();
  return k;
}

GeneratorKernel GeneratorKernel::element(HeckeElement h, const Rational& rate) {
  const StochasticReport rep = is_stochastic(h);
  require(rep.stochastic, "kernel element is not stochastic: " + h.to_string(),
          ErrorCode::kNotStochastic);
  require(h.q() >= 0 && h.q() <= 1, "q must lie in [0,1]", ErrorCode::kDomain);
  require(rate > 0, "kernel rate must be positive");
  GeneratorKernel k;
  k.kind_ = Kind::Element;
  k.name_ = "element";
  k.q_ = h.q();
  k.q_d_ = h.q().get_d();
  k.rate_ = rate;
  k.rate_d_ = rate.get_d();
  double acc = 0.0;
  for (const auto& [u, c] : h.terms()) {
    acc += c.get_d();
    k.cumulative_.push_back(acc);
    k.words_.push_back(u.reduced_word());
  }
  k.element_ = std::move(h);
  return k;
}

GeneratorKernel GeneratorKernel::simulated(std::string name, SampleFn fn,
                                           std::optional<HeckeElement> oracle,
                                           const Rational& rate) {
  require(static_cast<bool>(fn), "simulated kernel needs a sampling function");
  require(rate > 0, "kernel rate must be positive");
  if (oracle) {
    require(is_stochastic(*oracle).stochastic, "declared oracle is not stochastic",
            ErrorCode::kNotStochastic);
  }
  GeneratorKernel k;
  k.kind_ = Kind::Simulated;
  k.name_ = std::move(name);
  k.fn_ = std::move(fn);
  k.element_ = std::move(oracle);
  k.rate_ = rate;
  k.rate_d_ = rate.get_d();
  return k;
}

bool GeneratorKernel::apply(GroupElement& w, Rng& rng) const {
  switch (kind_) {
    case Kind::Basis:
      return step_basis_in_place(w, generator_, q_d_, rng);
    case Kind::Element: {
      require(w.family() == element_->family(), "kernel applied to a foreign element");
      const auto& word = words_[pick_cumulative(cumulative_, rng.uniform())];
      if (word.empty()) return false;
      const GroupElement before = w;
      for (auto it = word.rbegin(); it != word.rend(); ++it)
        step_basis_in_place(w, *it, q_d_, rng);
      return !(w == before);
    }
    case Kind::Simulated: {
      const GroupElement before = w;
      fn_(w, rng);
      return !(w == before);
    }
  }
  return false;
}

std::optional<HeckeElement> GeneratorKernel::exact_element(CoxeterFamily fam) const {
  if (kind_ == Kind::Basis) return HeckeElement::generator(fam, generator_, q_);
  return element_;
}

WalkState run_discrete(const GroupElement& initial,
                       std::span<const GeneratorKernel> kernels,
                       const Schedule& schedule, long steps, Rng& rng,
                       const EventLogOptions& log) {
  require(steps >= 0, "steps must be nonnegative");
  WalkState st{initial, 0.0, 0, {}};
  if (steps == 0) return st;
  require(!kernels.empty(), "run_discrete: no kernels");
  if (schedule.kind == Schedule::Kind::Fixed)
    require(!schedule.order.empty(), "run_discrete: empty fixed schedule");
  for (long i = 0; i < steps; ++i) {
    int k = 0;
    switch (schedule.kind) {
      case Schedule::Kind::Uniform:
        k = static_cast<int>(rng.below(kernels.size()));
        break;
      case Schedule::Kind::Fixed:
        k = schedule.order[static_cast<std::size_t>(i) % schedule.order.size()];
        break;
      case Schedule::Kind::Callback:
        k = schedule.chooser(i, st.current, rng);
        break;
    }
    require(k >= 0 && static_cast<std::size_t>(k) < kernels.size(),
            "schedule selected an unknown kernel");
    const bool moved = kernels[k].apply(st.current, rng);
    ++st.steps;
    st.time = static_cast<double>(st.steps);
    record(st, log, st.time, k, moved);
  }
  return st;
}

WalkState run_continuous(const GroupElement& initial,
                         std::span<const GeneratorKernel> kernels, double t_max,
                         Rng& rng, const EventLogOptions& log) {
  require(t_max >= 0.0, "t_max must be nonnegative");
  WalkState st{initial, 0.0, 0, {}};
  if (kernels.empty() || t_max == 0.0) {
    st.time = t_max;
    return st;
  }
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& k : kernels) {
    total += k.rate_value();
    cumulative.push_back(total);
  }
  double t = 0.0;
  for (;;) {
    t += rng.exponential(total);
    if (t > t_max) break;
    const auto k = pick_cumulative(cumulative, rng.uniform());
    const bool moved = kernels[k].apply(st.current, rng);
    ++st.steps;
    record(st, log, t, static_cast<int>(k), moved);
  }
  st.time = t_max;
  return st;
}

HeckeElement exact_discrete(const HeckeElement& initial,
                            std::span<const GeneratorKernel> kernels,
                            std::span<const int> sequence) {
  check_exact_rank(initial.family());
  HeckeElement dist = initial;
  for (int k : sequence) {
    require(k >= 0 && static_cast<std::size_t>(k) < kernels.size(), "unknown kernel index");
    auto h = kernels[k].exact_element(initial.family());
    require(h.has_value(), "kernel '" + kernels[k].name() + "' has no exact element");
    dist = mul(*h, dist);
  }
  return dist;
}

namespace {

HeckeElement averaged_kernel(CoxeterFamily fam, const Rational& q,
                             std::span<const GeneratorKernel> kernels, bool by_rate,
                             Rational* total_out) {
  require(!kernels.empty(), "no kernels");
  Rational total = 0;
  for (const auto& k : kernels) total += by_rate ? k.rate() : Rational(1);
  HeckeElement avg(fam, q);
  for (const auto& k : kernels) {
    auto h = k.exact_element(fam);
    require(h.has_value(), "kernel '" + k.name() + "' has no exact element");
    avg += h->scaled((by_rate ? k.rate() : Rational(1)) / total);
  }
  if (total_out) *total_out = total;
  return avg;
}

}  // namespace

HeckeElement exact_uniform_steps(const HeckeElement& initial,
                                 std::span<const GeneratorKernel> kernels, long steps) {
  check_exact_rank(initial.family());
  require(steps >= 0, "steps must be nonnegative");
  if (steps == 0) return initial;
  const HeckeElement k = averaged_kernel(initial.family(), initial.q(), kernels, false, nullptr);
  HeckeElement dist = initial;
  for (long i = 0; i < steps; ++i) dist = mul(k, dist);
  return dist;
}

FloatDistribution UniformizedLaw::combine() const {
  FloatDistribution out;
  for (std::size_t n = 0; n < terms.size(); ++n)
    for (const auto& [w, c] : terms[n].terms()) out[w] += weights[n] * c.get_d();
  return out;
}

UniformizedLaw UniformizedLaw::transformed(
    const std::function<HeckeElement(const HeckeElement&)>& f) const {
  UniformizedLaw out = *this;
  for (auto& t : out.terms) t = f(t);
  return out;
}

UniformizedLaw exact_continuous(const HeckeElement& initial,
                                std::span<const GeneratorKernel> kernels, double t,
                                double tail_tol) {
  check_exact_rank(initial.family());
  require(t >= 0.0, "time must be nonnegative");
  UniformizedLaw law;
  law.time = t;
  const HeckeElement k =
      averaged_kernel(initial.family(), initial.q(), kernels, true, &law.total_rate);
  const double lambda = law.total_rate.get_d() * t;
  HeckeElement term = initial;
  for (long n = 0;; ++n) {
    const double weight =
        lambda == 0.0 ? (n == 0 ? 1.0 : 0.0)
                      : std::exp(n * std::log(lambda) - lambda - std::lgamma(n + 1.0));
    law.terms.push_back(term);
    law.weights.push_back(weight);
    // P(N > n)
    const double tail = lambda == 0.0 ? 0.0 : boost::math::gamma_p(n + 1.0, lambda);
    if (tail < tail_tol) {
      law.tail_mass = tail;
      break;
    }
    term = mul(k, term);
  }
  return law;
}

FloatDistribution to_float(const HeckeElement& law) {
  FloatDistribution out;
  for (const auto& [w, c] : law.terms()) out[w] = c.get_d();
  return out;
}

std::map<GroupElement, HeckeElement> kernel_rows(const HeckeElement& h) {
  check_exact_rank(h.family());
  std::map<GroupElement, HeckeElement> rows;
  for (const auto& w : enumerate_group(h.family()))
    rows.emplace(w, mul(h, HeckeElement::basis(w, h.q())));
  return rows;
}

Rational detailed_balance_residual(std::span<const HeckeElement> kernels,
                                   const Rational& q) {
  Rational worst = 0;
  for (const auto& h : kernels) {
    require(h.q() == q, "kernel uses a different q");
    const long top = h.family().longest_length();
    const auto rows = kernel_rows(h);
    auto weight = [&](const GroupElement& w) { return rational_pow(q, top - w.length()); };
    for (const auto& [w, row] : rows) {
      const Rational pw = weight(w);
      for (const auto& [v, kwv] : row.terms()) {
        const Rational kvw = rows.at(v).coeff(w);
        Rational r = pw * kwv - weight(v) * kvw;
        if (r < 0) r = -r;
        if (r > worst) worst = r;
      }
    }
  }
  return worst;
}

}  // namespace hw
