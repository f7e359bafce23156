#include "heckewalk/systems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "heckewalk/error.hpp"
#include "heckewalk/mallows.hpp"

namespace hw {

// ---------------------------------------------------------------------------
// Type projections

int TypeProjection::index_of(int type) const {
  if (fam_.family == Family::A) {
    require(type >= 1 && type <= fam_.rank, "type out of range: " + std::to_string(type));
    return type - 1;
  }
  require(type != 0 && type >= -fam_.rank && type <= fam_.rank,
          "type out of range: " + std::to_string(type));
  return type < 0 ? type + fam_.rank : type + fam_.rank - 1;
}

namespace {

std::vector<int> ordered_types(CoxeterFamily fam) {
  std::vector<int> types;
  if (fam.family == Family::B)
    for (int t = -fam.rank; t <= -1; ++t) types.push_back(t);
  for (int t = 1; t <= fam.rank; ++t) types.push_back(t);
  return types;
}

std::vector<std::string> default_names(int count) {
  std::vector<std::string> names;
  for (int i = 0; i < count; ++i) names.push_back(std::to_string(i));
  return names;
}

}  // namespace

TypeProjection TypeProjection::identity(CoxeterFamily fam) {
  std::map<int, int> map;
  int label = 0;
  std::vector<std::string> names;
  for (int t : ordered_types(fam)) {
    map[t] = label++;
    names.push_back(std::to_string(t));
  }
  return from_map(fam, map, std::move(names));
}

TypeProjection TypeProjection::thresholds(CoxeterFamily fam, std::vector<int> cuts,
                                          std::vector<std::string> names) {
  for (std::size_t i = 1; i < cuts.size(); ++i)
    require(cuts[i - 1] < cuts[i], "projection cuts must increase");
  std::map<int, int> map;
  for (int t : ordered_types(fam)) {
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), t);
    map[t] = static_cast<int>(it - cuts.begin());
  }
  return from_map(fam, map, std::move(names));
}

TypeProjection TypeProjection::from_map(CoxeterFamily fam, const std::map<int, int>& map,
                                        std::vector<std::string> names) {
  TypeProjection p;
  p.fam_ = fam;
  const auto types = ordered_types(fam);
  p.label_of_.assign(types.size(), 0);
  int max_label = -1;
  for (int t : types) {
    auto it = map.find(t);
    require(it != map.end(), "projection does not cover type " + std::to_string(t));
    require(it->second >= 0, "projection labels must be nonnegative");
    p.label_of_[p.index_of(t)] = it->second;
    max_label = std::max(max_label, it->second);
  }
  require(map.size() == types.size(), "projection maps a type outside the family");
  // Named labels may stay unused (e.g. no hole types left in a full window).
  if (names.empty()) names = default_names(max_label + 1);
  require(static_cast<int>(names.size()) > max_label, "projection needs one name per label");
  p.label_count_ = static_cast<int>(names.size());
  p.names_ = std::move(names);
  return p;
}

TypeProjection TypeProjection::sign(CoxeterFamily fam, std::string negative,
                                    std::string positive) {
  require(fam.family == Family::B, "sign projection needs type B");
  return thresholds(fam, {-1}, {std::move(negative), std::move(positive)});
}

int TypeProjection::label(int type) const { return label_of_[index_of(type)]; }

bool TypeProjection::monotone() const {
  return std::is_sorted(label_of_.begin(), label_of_.end());
}

std::vector<int> project_types(const GroupElement& state, const TypeProjection& proj,
                               bool require_monotone) {
  require(state.family() == proj.family(), "projection built for a different family");
  if (require_monotone)
    require(proj.monotone(), "type projection is not monotone in the type order");
  std::vector<int> out;
  out.reserve(state.rank());
  for (int t : state.types_by_position()) out.push_back(proj.label(t));
  return out;
}

// ---------------------------------------------------------------------------
// Window guard

bool touches_window_edge(const WalkState& trajectory,
                         std::span<const GeneratorKernel> kernels, const WindowGuard& guard) {
  if (!guard.enabled()) return false;
  for (const auto& ev : trajectory.events) {
    require(ev.kernel >= 0 && static_cast<std::size_t>(ev.kernel) < kernels.size(),
            "event refers to an unknown kernel");
    if (ev.moved && kernels[ev.kernel].generator() == guard.outer_generator) return true;
  }
  return false;
}

bool touches_window_edge(const GroupElement& initial, const WalkState& trajectory,
                         std::span<const GeneratorKernel> kernels, const WindowGuard& guard,
                         const TypeProjection& projection) {
  if (!guard.enabled()) return false;
  GroupElement w = initial;
  const int g = guard.outer_generator;
  for (const auto& ev : trajectory.events) {
    require(ev.kernel >= 0 && static_cast<std::size_t>(ev.kernel) < kernels.size(),
            "event refers to an unknown kernel");
    if (!ev.moved) continue;
    const int s = kernels[ev.kernel].generator();
    require(s >= 0, "projected window guard needs basis kernels");
    if (s == g) {
      const int before = projection.label(w.type_at(g == 0 ? 1 : g));
      const int after = g == 0 ? projection.label(-w.type_at(1)) : projection.label(w.type_at(g + 1));
      if (before != after) return true;
    }
    w.apply_left_in_place(s);
  }
  require(w == trajectory.current, "event log is incomplete; log every event to replay it");
  return false;
}

void window_guard(const WalkState& trajectory, std::span<const GeneratorKernel> kernels,
                  const WindowGuard& guard) {
  if (touches_window_edge(trajectory, kernels, guard))
    fail(ErrorCode::kBoundaryContact,
         "trajectory reached the window edge (bond " + std::to_string(guard.outer_generator) +
             "); enlarge the window");
}

// ---------------------------------------------------------------------------
// Multi-species and half-line ASEP

SystemSpec make_masep(int n, const Rational& q, TimeMode mode) {
  require(n >= 2, "make_masep: need n >= 2");
  require(q >= 0 && q <= 1, "q must lie in [0,1]", ErrorCode::kDomain);
  SystemSpec spec;
  spec.model = "masep";
  spec.family = CoxeterFamily::type_a(n);
  for (int s = 1; s < n; ++s) spec.kernels.push_back(GeneratorKernel::basis(s, q));
  spec.initial = GroupElement::identity(spec.family);
  spec.mode = mode;
  spec.schedule = Schedule::uniform();
  spec.projection = TypeProjection::identity(spec.family);
  spec.q = q;
  return spec;
}

SystemSpec make_halfline(int n, const Rational& alpha, const Rational& q) {
  require(n >= 1, "make_halfline: need N >= 1");
  require(alpha > 0, "make_halfline: alpha must be positive", ErrorCode::kDomain);
  require(q >= 0 && q <= 1, "q must lie in [0,1]", ErrorCode::kDomain);
  SystemSpec spec;
  spec.model = "halfline";
  spec.family = CoxeterFamily::type_b(n);
  spec.kernels.push_back(GeneratorKernel::basis(0, q, alpha));
  for (int s = 1; s < n; ++s) spec.kernels.push_back(GeneratorKernel::basis(s, q));
  spec.initial = GroupElement::identity(spec.family);
  spec.projection = TypeProjection::sign(spec.family);
  if (n >= 2) spec.guard.outer_generator = n - 1;
  spec.q = q;
  return spec;
}

SystemSpec make_second_class_halfline(int n, const Rational& alpha, const Rational& q, int k,
                                      int l) {
  require(1 <= k && k <= l && l <= n, "make_second_class_halfline: need 1 <= k <= l <= N");
  SystemSpec spec = make_halfline(n, alpha, q);
  spec.model = "second-class";
  std::vector<int> word;
  for (int s = l - 1; s >= k; --s) word.push_back(s);
  spec.initial = GroupElement::from_word(spec.family, word);
  std::map<int, int> map;
  for (int t : ordered_types(spec.family)) {
    int label = kHole;
    if (t <= -k - 1) label = kInjected;
    else if (t == -k) label = kExited;
    else if (t < k) label = kFirst;
    else if (t == k) label = kSecond;
    map[t] = label;
  }
  spec.projection = TypeProjection::from_map(spec.family, map,
                                             {"injected", "exited", "first", "second", "hole"});
  return spec;
}

// ---------------------------------------------------------------------------
// Stochastic six-vertex model

bool VertexLattice::consistent() const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vertex& v = vertices[i];
    std::array<int, 2> in{v.in_left, v.in_right}, out{v.out_left, v.out_right};
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    if (in != out) return false;
    if (i + 1 < vertices.size()) {
      const Vertex& next = vertices[i + 1];
      if (next.row == v.row && next.bond == v.bond + 1 && next.in_left != v.out_right)
        return false;
    }
  }
  return true;
}

std::string VertexLattice::to_csv() const {
  std::ostringstream os;
  os << "row,col,in_left,in_right,out_left,out_right\n";
  for (const auto& v : vertices)
    os << v.row << ',' << v.bond << ',' << v.in_left << ',' << v.in_right << ','
       << v.out_left << ',' << v.out_right << '\n';
  return os.str();
}

SystemSpec make_six_vertex(int a, int b, int rows_k, const Rational& x, const Rational& q) {
  require(a < b, "make_six_vertex: need a < b");
  require(rows_k >= 0 && a - rows_k >= 1, "make_six_vertex: rows must satisfy a - k >= 1");
  require(x >= 0 && x <= 1, "make_six_vertex: x must lie in [0,1]", ErrorCode::kDomain);
  require(q >= 0 && q <= 1, "q must lie in [0,1]", ErrorCode::kDomain);
  SystemSpec spec;
  spec.model = "six-vertex";
  spec.family = CoxeterFamily::type_a(b);
  for (int s = 1; s < b; ++s)
    spec.kernels.push_back(GeneratorKernel::element(six_vertex_element(spec.family, s, x, q)));
  std::vector<int> order;
  for (int r = 0; r <= rows_k; ++r)
    for (int s = a - r; s <= b - r - 1; ++s) order.push_back(s - 1);
  spec.steps = static_cast<long>(order.size());
  spec.schedule = Schedule::fixed(std::move(order));
  spec.mode = TimeMode::Discrete;
  spec.initial = GroupElement::identity(spec.family);
  spec.projection = TypeProjection::identity(spec.family);
  spec.q = q;
  return spec;
}

VertexLattice sample_six_vertex(const SystemSpec& spec, Rng& rng) {
  require(spec.schedule.kind == Schedule::Kind::Fixed, "six-vertex sampling needs a fixed schedule");
  VertexLattice lattice;
  GroupElement state = spec.initial;
  int row = 0;
  int previous_bond = -1;
  for (int k : spec.schedule.order) {
    const int bond = k + 1;
    if (previous_bond >= 0 && bond <= previous_bond) ++row;
    previous_bond = bond;
    Vertex v;
    v.row = row;
    v.bond = bond;
    v.in_left = state.type_at(bond);
    v.in_right = state.type_at(bond + 1);
    spec.kernels[k].apply(state, rng);
    v.out_left = state.type_at(bond);
    v.out_right = state.type_at(bond + 1);
    lattice.vertices.push_back(v);
  }
  lattice.rows = spec.schedule.order.empty() ? 0 : row + 1;
  lattice.final_state = state;
  return lattice;
}

// ---------------------------------------------------------------------------
// ASEP(q,M) and general M-exclusion

HeckeElement sandwich_element(int blocks, int m, int x, const Rational& q,
                              const HeckeElement& y_shifted) {
  const CoxeterFamily fam = CoxeterFamily::type_a(blocks * m);
  require(1 <= x && x < blocks, "sandwich_element: block index out of range");
  const HeckeElement left = mallows_block(fam, (x - 1) * m + 1, x * m, q, true);
  const HeckeElement right = mallows_block(fam, x * m + 1, (x + 1) * m, q, true);
  const HeckeElement eq = mul(left, right);
  return mul(eq, mul(y_shifted, eq));
}

namespace {

void check_block_args(int blocks, int m, const Rational& q) {
  require(blocks >= 2, "need at least two blocks");
  require(m >= 1, "block size M must be positive");
  require(q >= 0 && q < 1, "ASEP(q,M) needs 0 <= q < 1", ErrorCode::kDomain);
}

void equilibrate_pair(GroupElement& w, int x, int m, double q, Rng& rng) {
  if (m < 2) return;
  equilibrate_block_in_place(w, (x - 1) * m + 1, x * m, q, rng);
  equilibrate_block_in_place(w, x * m + 1, (x + 1) * m, q, rng);
}

}  // namespace

SystemSpec make_asep_qm(int blocks, int m, const Rational& q) {
  check_block_args(blocks, m, q);
  SystemSpec spec;
  spec.model = "asep-qm";
  spec.family = CoxeterFamily::type_a(blocks * m);
  const double qd = q.get_d();
  const bool exact = blocks * m <= 6;
  for (int x = 1; x < blocks; ++x) {
    const int bond = x * m;
    auto fn = [x, m, qd, bond](GroupElement& w, Rng& rng) {
      equilibrate_pair(w, x, m, qd, rng);
      step_basis_in_place(w, bond, qd, rng);
      equilibrate_pair(w, x, m, qd, rng);
    };
    std::optional<HeckeElement> oracle;
    if (exact)
      oracle = sandwich_element(blocks, m, x, q, HeckeElement::generator(spec.family, bond, q));
    spec.kernels.push_back(GeneratorKernel::simulated("asep-qm bond " + std::to_string(bond),
                                                      fn, std::move(oracle)));
  }
  spec.initial = GroupElement::identity(spec.family);
  spec.projection = TypeProjection::identity(spec.family);
  spec.guard.outer_generator = -1;
  spec.q = q;
  return spec;
}

SystemSpec make_general_m_exclusion(int blocks, int m, const Rational& q,
                                    const HeckeElement& y) {
  check_block_args(blocks, m, q);
  require(y.family() == CoxeterFamily::type_a(2 * m), "Y must live in H(S_{2M})");
  require(y.q() == q, "Y uses a different q");
  require(is_stochastic(y).stochastic, "Y is not stochastic", ErrorCode::kNotStochastic);
  SystemSpec spec;
  spec.model = "general-m-exclusion";
  spec.family = CoxeterFamily::type_a(blocks * m);
  const double qd = q.get_d();
  const bool exact = blocks * m <= 6;
  for (int x = 1; x < blocks; ++x) {
    const HeckeElement shifted = shift_embed(y, spec.family, (x - 1) * m);
    const GeneratorKernel inner = GeneratorKernel::element(shifted);
    auto fn = [x, m, qd, inner](GroupElement& w, Rng& rng) {
      equilibrate_pair(w, x, m, qd, rng);
      inner.apply(w, rng);
      equilibrate_pair(w, x, m, qd, rng);
    };
    std::optional<HeckeElement> oracle;
    if (exact) oracle = sandwich_element(blocks, m, x, q, shifted);
    spec.kernels.push_back(GeneratorKernel::simulated("m-exclusion pair " + std::to_string(x),
                                                      fn, std::move(oracle)));
  }
  spec.initial = GroupElement::identity(spec.family);
  spec.projection = TypeProjection::identity(spec.family);
  spec.q = q;
  return spec;
}

Rational asep_qm_right_jump(int n1, int n2, int m, const Rational& q) {
  require(0 <= n1 && n1 <= m && 0 <= n2 && n2 <= m, "block counts out of range");
  const Rational denom = 1 - rational_pow(q, m);
  return (1 - rational_pow(q, n1)) * (1 - rational_pow(q, m - n2)) / (denom * denom);
}

Rational asep_qm_left_jump(int n1, int n2, int m, const Rational& q) {
  require(0 <= n1 && n1 <= m && 0 <= n2 && n2 <= m, "block counts out of range");
  const Rational denom = 1 - rational_pow(q, m);
  return rational_pow(q, m - n2 + n1 + 1) * (1 - rational_pow(q, n2)) *
         (1 - rational_pow(q, m - n1)) / (denom * denom);
}

// ---------------------------------------------------------------------------
// qTAZRP

double qtazrp_first_class_rate(int l, double q) {
  require(l >= 0, "particle count must be nonnegative");
  return l == 0 ? 0.0 : -std::expm1(l * std::log(q));
}

double qtazrp_second_class_rate(int l, double q) {
  require(l >= 0, "particle count must be nonnegative");
  return std::pow(q, l) * (1.0 - q);
}

QtazrpSpec make_qtazrp(int sites, double q, std::optional<int> second_class_site) {
  require(sites >= 1, "qTAZRP needs at least one site");
  require(q >= 0.0 && q < 1.0, "qTAZRP needs 0 <= q < 1", ErrorCode::kDomain);
  QtazrpSpec spec;
  spec.sites = sites;
  spec.q = q;
  spec.initial.counts.assign(sites, 0);
  if (second_class_site) {
    require(*second_class_site >= 0 && *second_class_site < sites,
            "second-class site outside the window");
    spec.initial.second_class = *second_class_site;
  }
  return spec;
}

namespace {

// Thinning sampler: one slot for the reservoir, one per occupied site and
// one for the second-class particle, each with rate bound 1.
class QtazrpEngine {
 public:
  QtazrpEngine(const QtazrpSpec& spec, QtazrpState& st) : spec_(spec), st_(st) {
    require(static_cast<int>(st.config.counts.size()) == spec.sites,
            "qTAZRP configuration has the wrong number of sites");
    slot_of_.assign(spec.sites, -1);
    for (int i = 0; i < spec.sites; ++i) {
      require(st.config.counts[i] >= 0, "negative particle count");
      if (st.config.counts[i] > 0) add_site(i);
    }
    for (int l = 0; l < 128; ++l) {
      qpow_.push_back(std::pow(spec.q, l));
    }
  }

  void run_until(double t_max, Rng& rng) {
    const double q = spec_.q;
    auto qpow = [&](int l) { return l < 128 ? qpow_[l] : std::pow(q, l); };
    for (;;) {
      const int sc = st_.config.second_class;
      const double slots = 1.0 + occupied_.size() + (sc >= 0 ? 1.0 : 0.0);
      const double dt = rng.exponential(slots);
      if (st_.time + dt > t_max) {
        st_.time = t_max;
        return;
      }
      st_.time += dt;
      const double u = rng.uniform() * slots;
      const auto slot = static_cast<std::size_t>(u);
      const double v = u - static_cast<double>(slot);
      if (slot == 0) {
        add_particle(0);
        ++st_.jumps;
      } else if (slot <= occupied_.size()) {
        const int site = occupied_[slot - 1];
        const int l = st_.config.counts[site];
        if (v < 1.0 - qpow(l)) {
          remove_particle(site);
          if (site + 1 < spec_.sites) add_particle(site + 1);
          else ++st_.exits;
          ++st_.jumps;
        }
      } else if (sc >= 0) {
        const int l = st_.config.counts[sc];
        if (v < qpow(l) * (1.0 - q)) {
          if (sc + 1 < spec_.sites) {
            st_.config.second_class = sc + 1;
            ++st_.jumps;
          } else {
            st_.window_contact = true;
          }
        }
      }
    }
  }

 private:
  void add_site(int i) {
    slot_of_[i] = static_cast<int>(occupied_.size());
    occupied_.push_back(i);
  }
  void add_particle(int i) {
    if (st_.config.counts[i]++ == 0) add_site(i);
  }
  void remove_particle(int i) {
    if (--st_.config.counts[i] == 0) {
      const int idx = slot_of_[i];
      const int last = occupied_.back();
      occupied_[idx] = last;
      slot_of_[last] = idx;
      occupied_.pop_back();
      slot_of_[i] = -1;
    }
  }

  const QtazrpSpec& spec_;
  QtazrpState& st_;
  std::vector<int> occupied_;
  std::vector<int> slot_of_;
  std::vector<double> qpow_;
};

}  // namespace

void run_qtazrp_checkpoints(const QtazrpSpec& spec, std::span<const double> times, Rng& rng,
                            const std::function<void(std::size_t, const QtazrpState&)>& observe) {
  require(std::is_sorted(times.begin(), times.end()), "checkpoint times must increase");
  QtazrpState st;
  st.config = spec.initial;
  QtazrpEngine engine(spec, st);
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= 0.0, "checkpoint times must be nonnegative");
    engine.run_until(times[i], rng);
    if (observe) observe(i, st);
  }
}

QtazrpState run_qtazrp(const QtazrpSpec& spec, double t_max, Rng& rng) {
  QtazrpState out;
  const double times[] = {t_max};
  run_qtazrp_checkpoints(spec, times, rng,
                         [&](std::size_t, const QtazrpState& st) { out = st; });
  return out;
}

namespace {

/// One site of the tandem representation: given the sorted arrival times of
/// first-class particles, produces the departure times up to t and the
/// piecewise-constant occupation (segment start times and counts).
struct SiteRun {
  std::vector<double> departures;
  std::vector<double> seg_start;
  std::vector<int> seg_count;
  int final_count = 0;
};

class TandemSampler {
 public:
  TandemSampler(double q, double t) : q_(q), t_(t) {
    require(q >= 0.0 && q < 1.0, "qTAZRP needs 0 <= q < 1", ErrorCode::kDomain);
    require(t >= 0.0, "time must be nonnegative");
  }

  /// Poisson(1) injections from the reservoir into site 0.
  void reservoir(Rng& rng, std::vector<double>& out) const {
    out.clear();
    for (double time = rng.exponential(1.0); time <= t_; time += rng.exponential(1.0))
      out.push_back(time);
  }

  void site(const std::vector<double>& arrivals, Rng& rng, SiteRun& run, bool segments) {
    run.departures.clear();
    run.seg_start.clear();
    run.seg_count.clear();
    int l = 0;
    double now = 0.0;
    std::size_t next = 0;
    if (segments) {
      run.seg_start.push_back(0.0);
      run.seg_count.push_back(0);
    }
    // Residual exponential clock of the next departure; on an arrival the
    // residual is rescaled to the new rate (memorylessness).
    double departure = kInf;
    for (;;) {
      const double arrival = next < arrivals.size() ? arrivals[next] : kInf;
      if (std::min(arrival, departure) > t_) break;
      if (arrival <= departure) {
        if (l > 0) departure = arrival + (departure - arrival) * rate(l) / rate(l + 1);
        else departure = arrival + rng.exponential(rate(1));
        now = arrival;
        ++next;
        ++l;
      } else {
        now = departure;
        --l;
        run.departures.push_back(now);
        departure = l > 0 ? now + rng.exponential(rate(l)) : kInf;
      }
      if (segments) {
        run.seg_start.push_back(now);
        run.seg_count.push_back(l);
      }
    }
    run.final_count = l;
  }

  double qpow(int l) {
    while (static_cast<int>(qpow_.size()) <= l)
      qpow_.push_back(qpow_.empty() ? 1.0 : qpow_.back() * q_);
    return qpow_[l];
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  double rate(int l) {
    while (static_cast<int>(rate_.size()) <= l)
      rate_.push_back(qtazrp_first_class_rate(static_cast<int>(rate_.size()), q_));
    return rate_[l];
  }

  double q_, t_;
  std::vector<double> rate_;
  std::vector<double> qpow_;
};

}  // namespace

std::vector<int> sample_qtazrp_counts(int sites, double q, double t, Rng& rng) {
  require(sites >= 1, "qTAZRP needs at least one site");
  TandemSampler sampler(q, t);
  std::vector<int> counts(static_cast<std::size_t>(sites), 0);
  std::vector<double> arrivals;
  sampler.reservoir(rng, arrivals);
  SiteRun run;
  for (int j = 0; j < sites; ++j) {
    sampler.site(arrivals, rng, run, false);
    counts[j] = run.final_count;
    std::swap(arrivals, run.departures);
  }
  return counts;
}

std::vector<int> sample_qtazrp_second_class(int s, double q, std::span<const double> times,
                                            Rng& rng) {
  require(s >= 0, "second-class site must be nonnegative");
  require(!times.empty() && std::is_sorted(times.begin(), times.end()) && times.front() >= 0.0,
          "checkpoint times must be nonnegative and increasing");
  const double t = times.back();
  TandemSampler sampler(q, t);
  std::vector<double> arrivals;
  sampler.reservoir(rng, arrivals);
  SiteRun run;
  // entered[j - s] = time the second-class particle reached site j
  std::vector<double> entered{0.0};
  for (int j = 0;; ++j) {
    sampler.site(arrivals, rng, run, j >= s);
    if (j >= s) {
      // integrate the hazard q^l (1 - q) over the occupation segments
      double need = rng.exponential(1.0);
      const double start = entered.back();
      double leave = -1.0;
      for (std::size_t g = 0; g < run.seg_start.size(); ++g) {
        const double a = std::max(run.seg_start[g], start);
        const double b = g + 1 < run.seg_start.size() ? run.seg_start[g + 1] : t;
        if (b <= a) continue;
        const double r = sampler.qpow(run.seg_count[g]) * (1.0 - q);
        if (r * (b - a) >= need) {
          leave = a + need / r;
          break;
        }
        need -= r * (b - a);
      }
      if (leave < 0.0 || leave > t) break;
      entered.push_back(leave);
    }
    std::swap(arrivals, run.departures);
  }
  std::vector<int> out;
  out.reserve(times.size());
  for (double c : times) {
    const auto hops = std::upper_bound(entered.begin(), entered.end(), c) - entered.begin() - 1;
    out.push_back(s + static_cast<int>(hops));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lumped half-line label chains

LabelChainRules LabelChainRules::single_species(double alpha, double q) {
  LabelChainRules r;
  r.alpha = alpha;
  r.q = q;
  r.boundary_target = {1, 0};
  r.boundary_factor = {q, 1.0};
  r.background = 1;
  return r;
}

LabelChainRules LabelChainRules::second_class(double alpha, double q) {
  LabelChainRules r;
  r.alpha = alpha;
  r.q = q;
  r.boundary_target = {kHole, kSecond, kFirst, kExited, kInjected};
  r.boundary_factor = {q, q, 0.0, 1.0, 1.0};
  r.background = kHole;
  return r;
}

LabelChainState make_label_state(std::vector<std::uint8_t> initial, int window,
                                 std::uint8_t background) {
  require(window >= 2, "label chain window must be at least 2");
  require(static_cast<int>(initial.size()) <= window, "initial configuration exceeds the window");
  LabelChainState st;
  st.labels = std::move(initial);
  st.labels.resize(window, background);
  for (int i = window; i >= 1; --i) {
    if (st.labels[i - 1] != background) {
      st.active = i;
      break;
    }
  }
  require(st.active < window, "initial configuration touches the window edge");
  return st;
}

namespace {

/// Set of bond indices with O(1) insert, erase and uniform pick.
class BondSet {
 public:
  explicit BondSet(int capacity) : where_(static_cast<std::size_t>(capacity), -1) {}
  int size() const { return static_cast<int>(items_.size()); }
  int at(int i) const { return items_[static_cast<std::size_t>(i)]; }
  void insert(int b) {
    if (where_[b] >= 0) return;
    where_[b] = size();
    items_.push_back(b);
  }
  void erase(int b) {
    const int i = where_[b];
    if (i < 0) return;
    const int last = items_.back();
    items_[static_cast<std::size_t>(i)] = last;
    where_[last] = i;
    items_.pop_back();
    where_[b] = -1;
  }

 private:
  std::vector<int> items_;
  std::vector<int> where_;
};

}  // namespace

void run_label_chain(LabelChainState& st, const LabelChainRules& rules, double t_max, Rng& rng,
                     const std::function<bool(double, std::uint8_t, std::uint8_t)>& on_boundary) {
  require(rules.alpha > 0.0, "boundary rate must be positive");
  require(rules.q >= 0.0 && rules.q <= 1.0, "q must lie in [0,1]", ErrorCode::kDomain);
  const int window = static_cast<int>(st.labels.size());
  std::uint8_t* lab = st.labels.data();
  const double alpha = rules.alpha;
  const double q = rules.q;
  // bond b joins positions b+1 and b+2 (1-based); forward bonds swap at
  // rate 1, backward bonds at rate q
  BondSet forward(window - 1), backward(window - 1);
  auto classify = [&](int b) {
    if (b < 0 || b >= window - 1) return;
    forward.erase(b);
    backward.erase(b);
    if (lab[b] < lab[b + 1]) {
      forward.insert(b);
    } else if (lab[b] > lab[b + 1]) {
      backward.insert(b);
    }
  };
  for (int b = 0; b < std::min(st.active, window - 1); ++b) classify(b);
  while (!st.window_contact) {
    const double boundary_rate = alpha * rules.boundary_factor[lab[0]];
    const double fwd = forward.size();
    const double bwd = q * backward.size();
    const double total = boundary_rate + fwd + bwd;
    if (total <= 0.0) {
      st.time = t_max;
      return;
    }
    const double dt = rng.exponential(total);
    if (st.time + dt > t_max) {
      st.time = t_max;
      return;
    }
    st.time += dt;
    const double u = rng.uniform() * total;
    if (u < boundary_rate) {
      const std::uint8_t old = lab[0];
      const std::uint8_t next = rules.boundary_target[old];
      lab[0] = next;
      if (st.active < 1) st.active = 1;
      classify(0);
      if (on_boundary && on_boundary(st.time, old, next)) return;
      continue;
    }
    int bond;
    if (u - boundary_rate < fwd) {
      bond = forward.at(std::min(static_cast<int>(u - boundary_rate), forward.size() - 1));
    } else {
      const int i = static_cast<int>((u - boundary_rate - fwd) / q);
      bond = backward.at(std::min(i, backward.size() - 1));
    }
    std::swap(lab[bond], lab[bond + 1]);
    classify(bond - 1);
    classify(bond);
    classify(bond + 1);
    if (bond + 2 > st.active) st.active = bond + 2;
    if (st.active >= window) st.window_contact = true;
  }
}

std::map<std::vector<int>, Rational> label_kernel(const std::vector<int>& labels, int s,
                                                  const Rational& q,
                                                  const std::vector<int>& boundary_target,
                                                  const std::vector<int>& boundary_kind) {
  std::map<std::vector<int>, Rational> out;
  auto add = [&](std::vector<int> v, const Rational& p) {
    if (p != 0) out[std::move(v)] += p;
  };
  if (s == 0) {
    const int l = labels.at(0);
    std::vector<int> flipped = labels;
    flipped[0] = boundary_target.at(l);
    switch (boundary_kind.at(l)) {
      case 0:
        add(labels, 1);
        break;
      case 1:
        add(flipped, 1);
        break;
      default:
        add(flipped, q);
        add(labels, 1 - q);
        break;
    }
    return out;
  }
  require(s >= 1 && s < static_cast<int>(labels.size()), "bond out of range");
  std::vector<int> swapped = labels;
  std::swap(swapped[s - 1], swapped[s]);
  if (labels[s - 1] < labels[s]) {
    add(swapped, 1);
  } else if (labels[s - 1] > labels[s]) {
    add(swapped, q);
    add(labels, 1 - q);
  } else {
    add(labels, 1);
  }
  return out;
}

}  // namespace hw
