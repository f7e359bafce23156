#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heckewalk/coxeter.hpp"
#include "heckewalk/hecke.hpp"
#include "heckewalk/random.hpp"
#include "heckewalk/rational.hpp"

namespace hw {

/// From w: s*w at an ascent; at a descent s*w with probability q, else w.
GroupElement step_basis(const GroupElement& w, int s, double q, Rng& rng);
/// Returns true if the state changed.
bool step_basis_in_place(GroupElement& w, int s, double q, Rng& rng);

/// Samples u from the coefficients of a stochastic h, then folds step_basis
/// along a reduced word of u. Throws kNotStochastic.
GroupElement step_element(const GroupElement& w, const HeckeElement& h, Rng& rng);

/// Markov kernel on W induced by left multiplication by a stochastic Hecke
/// element, tagged with a clock rate for continuous time. Three flavours:
/// a single T_s, a general stochastic element (exact), or a sampling
/// procedure that may declare the exact element it realizes.
class GeneratorKernel {
 public:
  using SampleFn = std::function<void(GroupElement&, Rng&)>;

  static GeneratorKernel basis(int s, const Rational& q, const Rational& rate = 1);
  static GeneratorKernel element(HeckeElement h, const Rational& rate = 1);
  static GeneratorKernel simulated(std::string name, SampleFn fn,
                                   std::optional<HeckeElement> oracle,
                                   const Rational& rate = 1);

  /// Applies one draw of the kernel; returns true if the state changed.
  bool apply(GroupElement& w, Rng& rng) const;

  const std::string& name() const { return name_; }
  const Rational& rate() const { return rate_; }
  double rate_value() const { return rate_d_; }
  /// Generator index for basis kernels, -1 otherwise.
  int generator() const { return generator_; }

  /// The Hecke element this kernel multiplies by, when known. Basis kernels
  /// build T_s for the requested family.
  std::optional<HeckeElement> exact_element(CoxeterFamily fam) const;

 private:
  enum class Kind { Basis, Element, Simulated };

  Kind kind_ = Kind::Basis;
  std::string name_;
  Rational rate_ = 1;
  double rate_d_ = 1.0;
  int generator_ = -1;
  Rational q_ = 0;
  double q_d_ = 0.0;
  std::optional<HeckeElement> element_;
  std::vector<double> cumulative_;
  std::vector<std::vector<int>> words_;
  SampleFn fn_;
};

struct WalkEvent {
  double time = 0.0;  // step count in discrete mode
  int kernel = -1;
  bool moved = false;
};

struct EventLogOptions {
  bool enabled = false;
  std::size_t capacity = 0;  // 0 keeps the full log, otherwise the last K
};

struct WalkState {
  GroupElement current;
  double time = 0.0;
  long steps = 0;
  std::deque<WalkEvent> events;
};

struct Schedule {
  enum class Kind { Uniform, Fixed, Callback };
  Kind kind = Kind::Uniform;
  std::vector<int> order;  // Fixed: kernel indices, repeated cyclically
  std::function<int(long step, const GroupElement&, Rng&)> chooser;

  static Schedule uniform() { return {}; }
  static Schedule fixed(std::vector<int> order) {
    Schedule s;
    s.kind = Kind::Fixed;
    s.order = std::move(order);
    return s;
  }
};

WalkState run_discrete(const GroupElement& initial,
                       std::span<const GeneratorKernel> kernels,
                       const Schedule& schedule, long steps, Rng& rng,
                       const EventLogOptions& log = {});

/// Superposed Poisson clocks, simulated as exponential holding times with
/// total rate sum(rates) and a rate-proportional choice of kernel.
WalkState run_continuous(const GroupElement& initial,
                         std::span<const GeneratorKernel> kernels, double t_max,
                         Rng& rng, const EventLogOptions& log = {});

using FloatDistribution = std::map<GroupElement, double>;

/// Exact law after applying kernels[sequence[0]], then kernels[sequence[1]],
/// ...; the distribution is carried as the walk element itself.
HeckeElement exact_discrete(const HeckeElement& initial,
                            std::span<const GeneratorKernel> kernels,
                            std::span<const int> sequence);
/// Exact law after `steps` i.i.d. uniform kernel choices.
HeckeElement exact_uniform_steps(const HeckeElement& initial,
                                 std::span<const GeneratorKernel> kernels, long steps);

/// Continuous-time law by uniformization: with Lambda = sum of rates and
/// K = sum_i (rate_i / Lambda) h_i, P_t = sum_n Pois(n; Lambda t) K^n P_0.
/// The exact rational terms K^n P_0 are kept; the series is cut once the
/// remaining Poisson mass drops below tail_tol.
struct UniformizedLaw {
  Rational total_rate;
  double time = 0.0;
  std::vector<HeckeElement> terms;
  std::vector<double> weights;
  double tail_mass = 0.0;

  FloatDistribution combine() const;
  /// Applies a post-processing map to each exact term (e.g. fixed discrete
  /// updates after the continuous phase).
  UniformizedLaw transformed(const std::function<HeckeElement(const HeckeElement&)>& f) const;
};

UniformizedLaw exact_continuous(const HeckeElement& initial,
                                std::span<const GeneratorKernel> kernels, double t,
                                double tail_tol = 1e-14);

FloatDistribution to_float(const HeckeElement& law);

/// Row w of the kernel of left multiplication by h: h * T_w.
std::map<GroupElement, HeckeElement> kernel_rows(const HeckeElement& h);

/// max over (w, w') of |pi(w) K(w,w') - pi(w') K(w',w)| with
/// pi(w) = q^{l(w0) - l(w)} (unnormalized Mallows weight).
Rational detailed_balance_residual(std::span<const HeckeElement> kernels,
                                   const Rational& q);

}  // namespace hw
