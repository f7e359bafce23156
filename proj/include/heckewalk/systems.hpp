#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heckewalk/coxeter.hpp"
#include "heckewalk/hecke.hpp"
#include "heckewalk/random.hpp"
#include "heckewalk/rational.hpp"
#include "heckewalk/walks.hpp"

namespace hw {

enum class TimeMode { Continuous, Discrete };

/// Identification of particle types into labels (cosets of a parabolic
/// subgroup). Labels are small integers; label_of is indexed by the signed
/// type in increasing order (-N..-1, 1..N in type B, 1..n in type A).
class TypeProjection {
 public:
  TypeProjection() = default;

  /// Every type is its own label.
  static TypeProjection identity(CoxeterFamily fam);
  /// Label i collects the types t with cuts[i-1] < t <= cuts[i]; the last
  /// label takes everything above the last cut. Cuts must increase.
  static TypeProjection thresholds(CoxeterFamily fam, std::vector<int> cuts,
                                   std::vector<std::string> names = {});
  /// Arbitrary map; every type of the family must be present.
  static TypeProjection from_map(CoxeterFamily fam, const std::map<int, int>& map,
                                 std::vector<std::string> names = {});
  /// Type B: negative types -> label 0, positive types -> label 1.
  static TypeProjection sign(CoxeterFamily fam, std::string negative = "particle",
                             std::string positive = "hole");

  int label(int type) const;
  const std::vector<std::string>& names() const { return names_; }
  int label_count() const { return label_count_; }
  const CoxeterFamily& family() const { return fam_; }
  /// Labels are nondecreasing along the type order (class semantics:
  /// smaller type = higher priority).
  bool monotone() const;

 private:
  int index_of(int type) const;

  CoxeterFamily fam_;
  std::vector<int> label_of_;
  std::vector<std::string> names_;
  int label_count_ = 0;
};

/// Label found at each position 1..rank. Throws if require_monotone is set
/// and the projection is not monotone.
std::vector<int> project_types(const GroupElement& state, const TypeProjection& proj,
                               bool require_monotone = false);

/// Finite-window truncation guard: an event that changes the state at the
/// outermost bond means the window was too small for the horizon.
struct WindowGuard {
  int outer_generator = -1;  // -1 disables the guard
  bool enabled() const { return outer_generator >= 0; }
};

/// Throws kBoundaryContact if any logged event moved the state at the
/// guarded bond.
void window_guard(const WalkState& trajectory, std::span<const GeneratorKernel> kernels,
                  const WindowGuard& guard);
bool touches_window_edge(const WalkState& trajectory,
                         std::span<const GeneratorKernel> kernels, const WindowGuard& guard);
/// Projection-aware variant: replays the fully logged basis-kernel events
/// from `initial` and reports contact only when a move at the guarded bond
/// changes the projected labels there (two holes trading places is
/// invisible to the particle system).
bool touches_window_edge(const GroupElement& initial, const WalkState& trajectory,
                         std::span<const GeneratorKernel> kernels, const WindowGuard& guard,
                         const TypeProjection& projection);

/// A particle system realized as a walk on W: generator kernels with rates,
/// an initial element, a schedule, and a type projection.
struct SystemSpec {
  std::string model;
  CoxeterFamily family;
  std::vector<GeneratorKernel> kernels;
  GroupElement initial;
  TimeMode mode = TimeMode::Continuous;
  Schedule schedule;
  long steps = 0;  // discrete mode with a fixed schedule: one full sweep
  TypeProjection projection;
  WindowGuard guard;
  Rational q;
};

/// Multi-species ASEP on n positions: bond kernels s_1..s_{n-1}, rate 1.
SystemSpec make_masep(int n, const Rational& q, TimeMode mode = TimeMode::Continuous);

/// Half-line ASEP on B_N: bulk s_1..s_{N-1} at rate 1, boundary s_0 at rate
/// alpha (injection at rate alpha, removal at rate alpha*q). Negative types
/// are particles.
SystemSpec make_halfline(int n, const Rational& alpha, const Rational& q);

/// Labels of the second-class half-line system, in type order.
enum HalflineLabel : std::uint8_t {
  kInjected = 0,  // types <= -k-1
  kExited = 1,    // type -k
  kFirst = 2,     // types -k+1..k-1
  kSecond = 3,    // type k
  kHole = 4,      // types >= k+1
};

/// Half-line ASEP with the second-class particle of type k started at
/// position l: initial element s_{l-1} ... s_{k+1} s_k (s_k acting first),
/// so that w(k) = l. Projection uses the five labels above.
SystemSpec make_second_class_halfline(int n, const Rational& alpha, const Rational& q,
                                      int k, int l);

/// One vertex of the colored stochastic six-vertex model: the bond
/// (col, col+1) in the given row with colors before and after the update.
struct Vertex {
  int row = 0;
  int bond = 0;      // left position of the bond
  int in_left = 0;
  int in_right = 0;
  int out_left = 0;
  int out_right = 0;
};

struct VertexLattice {
  int rows = 0;
  std::vector<Vertex> vertices;  // row-major, left to right within a row
  GroupElement final_state;

  /// Colors are conserved at every vertex and consecutive vertices of a row
  /// share the connecting line color.
  bool consistent() const;
  std::string to_csv() const;
};

/// Rows W_{a,b}, W_{a-1,b-1}, ..., W_{a-k,b-k} (applied in this order) with
/// W_{a,b} = Y_{(b-1,b),x} ... Y_{(a,a+1),x}; discrete fixed schedule on S_b.
SystemSpec make_six_vertex(int a, int b, int rows_k, const Rational& x, const Rational& q);
VertexLattice sample_six_vertex(const SystemSpec& spec, Rng& rng);

/// ASEP(q,M): N blocks of M positions; kernel x equilibrates blocks x and
/// x+1, applies the bond (xM, xM+1), and equilibrates again. For N*M <= 6
/// each kernel carries the exact normalized sandwich element as oracle.
SystemSpec make_asep_qm(int blocks, int m, const Rational& q);

/// Same sandwich with an arbitrary stochastic Y in H(S_{2M}) shifted onto
/// each pair of neighboring blocks.
SystemSpec make_general_m_exclusion(int blocks, int m, const Rational& q,
                                    const HeckeElement& y);

/// The exact normalized sandwich M_x M_{x+1} Y M_x M_{x+1} on S_{NM}.
HeckeElement sandwich_element(int blocks, int m, int x, const Rational& q,
                              const HeckeElement& y_shifted);

/// Single-species ASEP(q,M) jump probabilities for neighboring blocks with
/// n1 and n2 particles.
Rational asep_qm_right_jump(int n1, int n2, int m, const Rational& q);
Rational asep_qm_left_jump(int n1, int n2, int m, const Rational& q);

// ---------------------------------------------------------------------------
// qTAZRP

/// Sites 0..sites-1 with first-class counts and at most one second-class
/// particle; site -1 is an infinite reservoir.
struct OccupancyConfig {
  std::vector<int> counts;
  int second_class = -1;  // site of the second-class particle, -1 if none
};

double qtazrp_first_class_rate(int l, double q);   // 1 - q^l
double qtazrp_second_class_rate(int l, double q);  // q^l (1 - q)

struct QtazrpSpec {
  int sites = 0;
  double q = 0.0;
  OccupancyConfig initial;
};

/// Empty sites, optionally one second-class particle at site s.
QtazrpSpec make_qtazrp(int sites, double q, std::optional<int> second_class_site = {});

struct QtazrpState {
  OccupancyConfig config;
  double time = 0.0;
  long jumps = 0;
  long exits = 0;           // first-class particles leaving the last site
  bool window_contact = false;  // the second-class particle tried to leave
};

/// Runs the CTMC to t_max. Particles leaving the last site are dropped
/// (total asymmetry: nothing beyond can influence the window). If the
/// second-class particle would leave, window_contact is set and it stays.
QtazrpState run_qtazrp(const QtazrpSpec& spec, double t_max, Rng& rng);

/// Runs to the increasing checkpoint times and calls observe(i, state) at
/// each of them.
void run_qtazrp_checkpoints(const QtazrpSpec& spec, std::span<const double> times, Rng& rng,
                            const std::function<void(std::size_t, const QtazrpState&)>& observe);

/// Site-by-site sampler for the qTAZRP started empty. First-class jumps out
/// of a site depend only on that site's count, so each site is a queue fed
/// by the departures of its left neighbor; same law as run_qtazrp without
/// a window. Returns the first-class counts at time t on sites 0..sites-1.
std::vector<int> sample_qtazrp_counts(int sites, double q, double t, Rng& rng);

/// Position at each checkpoint time of a lone second-class particle started
/// at site s in an otherwise empty qTAZRP (same tandem construction; the
/// second-class particle does not influence first-class particles).
std::vector<int> sample_qtazrp_second_class(int s, double q, std::span<const double> times,
                                            Rng& rng);

// ---------------------------------------------------------------------------
// Lumped half-line label chains

/// Exact lumping of a half-line walk onto signed-type labels. The bulk bond
/// (i,i+1) swaps the labels at rate 1 if label(i) < label(i+1), at rate q if
/// label(i) > label(i+1); equal labels are inert. At position 1 a label
/// turns into boundary_target at rate alpha * boundary_factor.
struct LabelChainRules {
  double alpha = 0.0;
  double q = 0.0;
  std::vector<std::uint8_t> boundary_target;  // per label
  std::vector<double> boundary_factor;        // 1 (positive), q (negative), 0 (inert)
  std::uint8_t background = 0;                // label filling the far right

  static LabelChainRules single_species(double alpha, double q);  // 0 particle, 1 hole
  static LabelChainRules second_class(double alpha, double q);    // HalflineLabel
};

struct LabelChainState {
  std::vector<std::uint8_t> labels;  // positions 1..window
  int active = 0;                    // positions beyond `active` are background
  double time = 0.0;
  bool window_contact = false;
};

LabelChainState make_label_state(std::vector<std::uint8_t> initial, int window,
                                 std::uint8_t background);
/// Advances to t_max; stops early with window_contact set if a non-background
/// label reaches the last position. The optional callback sees each
/// boundary change (time, old label, new label) and may return true to stop.
void run_label_chain(LabelChainState& st, const LabelChainRules& rules, double t_max, Rng& rng,
                     const std::function<bool(double, std::uint8_t, std::uint8_t)>& on_boundary = {});

/// Exact one-kernel transition of the label chain for generator s
/// (0 = boundary flip, i >= 1 = bond (i,i+1)) as probabilities.
std::map<std::vector<int>, Rational> label_kernel(const std::vector<int>& labels, int s,
                                                  const Rational& q,
                                                  const std::vector<int>& boundary_target,
                                                  const std::vector<int>& boundary_kind);

}  // namespace hw
