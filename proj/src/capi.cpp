#include "heckewalk/heckewalk.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <map>
#include <new>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "heckewalk/checks.hpp"
#include "heckewalk/error.hpp"
#include "heckewalk/experiments.hpp"
#include "heckewalk/hecke.hpp"
#include "heckewalk/mallows.hpp"
#include "heckewalk/systems.hpp"
#include "heckewalk/walks.hpp"

struct hw_element {
  hw::HeckeElement value;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

hw_status set_error(hw_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class Fn>
hw_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return HW_OK;
  } catch (const hw::Error& e) {
    return set_error(static_cast<hw_status>(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(HW_INVALID_ARGUMENT, std::string("JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HW_TOO_LARGE, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HW_INTERNAL, e.what());
  } catch (...) {
    return set_error(HW_INTERNAL, "unknown failure");
  }
}

void require_ptr(const void* p, const char* what) {
  hw::require(p != nullptr, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hw::CoxeterFamily family_of(char family, int rank) {
  hw::require(family == 'A' || family == 'B', "family must be 'A' or 'B'");
  hw::require(rank >= 1, "rank must be positive");
  return {family == 'A' ? hw::Family::A : hw::Family::B, rank};
}

// ---- config helpers ------------------------------------------------------

json parse_config(const char* text, const std::set<std::string>& allowed) {
  json j = (text == nullptr || *text == '\0') ? json::object() : json::parse(text);
  hw::require(j.is_object(), "config must be a JSON object");
  for (const auto& [k, v] : j.items())
    hw::require(allowed.count(k) > 0, "unknown config key '" + k + "'");
  return j;
}

hw::Rational rational_field(const json& j, const char* key, const char* fallback) {
  if (!j.contains(key)) return hw::parse_rational(fallback);
  const json& v = j.at(key);
  if (v.is_string()) return hw::parse_rational(v.get<std::string>());
  hw::require(v.is_number(), std::string("config key '") + key + "' must be a number or string");
  return hw::parse_rational(v.dump());
}

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    hw::fail(hw::ErrorCode::kInvalidArgument,
             std::string("config key '") + key + "' has the wrong type");
  }
}

double number_param(const json& j, const char* key) {
  hw::require(j.contains(key), std::string("missing parameter '") + key + "'");
  hw::require(j.at(key).is_number(), std::string("parameter '") + key + "' must be a number");
  return j.at(key).get<double>();
}

long integer_param(const json& j, const char* key) {
  const double v = number_param(j, key);
  hw::require(v == std::floor(v), std::string("parameter '") + key + "' must be an integer");
  return static_cast<long>(v);
}

// ---- simulation ----------------------------------------------------------

std::vector<int> positions_of(const hw::GroupElement& w) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(w.rank()));
  for (int p = 1; p <= w.rank(); ++p) out.push_back(w.type_at(p));
  return out;
}

struct WalkModel {
  hw::SystemSpec spec;
  bool lattice = false;
};

WalkModel walk_model(const std::string& model, const json& cfg) {
  WalkModel m;
  if (model == "masep") {
    const int n = field<int>(cfg, "n", 4);
    const std::string mode = field<std::string>(cfg, "mode", "continuous");
    hw::require(mode == "continuous" || mode == "discrete", "mode must be continuous or discrete");
    m.spec = hw::make_masep(n, rational_field(cfg, "q", "1/2"),
                            mode == "discrete" ? hw::TimeMode::Discrete : hw::TimeMode::Continuous);
  } else if (model == "halfline") {
    m.spec = hw::make_halfline(field<int>(cfg, "n", 8), rational_field(cfg, "alpha", "1/2"),
                               rational_field(cfg, "q", "0"));
  } else if (model == "second-class") {
    m.spec = hw::make_second_class_halfline(
        field<int>(cfg, "n", 8), rational_field(cfg, "alpha", "1/2"), rational_field(cfg, "q", "0"),
        field<int>(cfg, "k", 1), field<int>(cfg, "l", 2));
  } else if (model == "six-vertex") {
    m.spec = hw::make_six_vertex(field<int>(cfg, "a", 1), field<int>(cfg, "b", 4),
                                 field<int>(cfg, "rows", 0), rational_field(cfg, "x", "1/2"),
                                 rational_field(cfg, "q", "1/2"));
    m.lattice = field<bool>(cfg, "lattice", false);
  } else if (model == "asep-qm") {
    m.spec = hw::make_asep_qm(field<int>(cfg, "blocks", 2), field<int>(cfg, "m", 2),
                              rational_field(cfg, "q", "1/2"));
  } else {
    hw::fail(hw::ErrorCode::kInvalidArgument, "unknown model '" + model + "'");
  }
  return m;
}

const std::set<std::string>& model_keys(const std::string& model) {
  static const std::map<std::string, std::set<std::string>> keys{
      {"masep", {"n", "q", "mode"}},
      {"halfline", {"n", "alpha", "q"}},
      {"second-class", {"n", "alpha", "q", "k", "l"}},
      {"six-vertex", {"a", "b", "rows", "x", "q", "lattice"}},
      {"asep-qm", {"blocks", "m", "q"}},
      {"qtazrp", {"sites", "q", "second_class"}},
  };
  const auto it = keys.find(model);
  hw::require(it != keys.end(), "unknown model '" + model + "'");
  return it->second;
}

void simulate(const std::string& model, const char* config, double t_max, long trials,
              std::uint64_t seed, hw_line_callback callback, void* user) {
  hw::require(trials >= 1, "need at least one trial");
  hw::require(t_max >= 0.0 && std::isfinite(t_max), "t_max must be finite and nonnegative");
  const json cfg = parse_config(config, model_keys(model));

  if (model == "qtazrp") {
    const int sites = field<int>(cfg, "sites", 50);
    std::optional<int> sc;
    if (cfg.contains("second_class")) sc = field<int>(cfg, "second_class", 0);
    const hw::QtazrpSpec spec = hw::make_qtazrp(sites, field<double>(cfg, "q", 0.5), sc);
    for (long i = 0; i < trials; ++i) {
      hw::Rng rng = hw::Rng::stream(seed, static_cast<std::uint64_t>(i));
      const hw::QtazrpState st = hw::run_qtazrp(spec, t_max, rng);
      json line{{"trial", i},           {"time", st.time},   {"counts", st.config.counts},
                {"jumps", st.jumps},    {"exits", st.exits}, {"window_contact", st.window_contact}};
      if (st.config.second_class >= 0) line["second_class"] = st.config.second_class;
      if (callback(line.dump().c_str(), user) != 0) return;
    }
    return;
  }

  const WalkModel m = walk_model(model, cfg);
  const hw::SystemSpec& spec = m.spec;
  for (long i = 0; i < trials; ++i) {
    hw::Rng rng = hw::Rng::stream(seed, static_cast<std::uint64_t>(i));
    json line{{"trial", i}};
    if (model == "six-vertex") {
      const hw::VertexLattice lattice = hw::sample_six_vertex(spec, rng);
      line["rows"] = lattice.rows;
      line["positions"] = positions_of(lattice.final_state);
      if (m.lattice) line["lattice_csv"] = lattice.to_csv();
    } else {
      hw::WalkState st;
      const bool log_edge = spec.guard.enabled();
      hw::EventLogOptions log{log_edge, 0};
      if (spec.mode == hw::TimeMode::Discrete) {
        const long steps = static_cast<long>(std::llround(t_max));
        st = hw::run_discrete(spec.initial, spec.kernels, spec.schedule, steps, rng, log);
      } else {
        st = hw::run_continuous(spec.initial, spec.kernels, t_max, rng, log);
      }
      line["time"] = st.time;
      line["steps"] = st.steps;
      line["positions"] = positions_of(st.current);
      line["labels"] = hw::project_types(st.current, spec.projection);
      if (log_edge)
        line["window_contact"] =
            hw::touches_window_edge(spec.initial, st, spec.kernels, spec.guard, spec.projection);
    }
    if (callback(line.dump().c_str(), user) != 0) return;
  }
}

// ---- theory --------------------------------------------------------------

double theory(const std::string& name, const char* params) {
  static const std::map<std::string, std::set<std::string>> keys{
      {"q-pochhammer", {"a", "q", "n"}},
      {"rho", {"z", "alpha"}},
      {"block-occupancy", {"z", "m", "alpha"}},
      {"exit", {"k", "l", "alpha"}},
      {"survival", {"k", "l", "alpha", "q"}},
      {"kappa", {"alpha", "q"}},
      {"alpha-of-kappa", {"kappa", "q"}},
      {"qtazrp-marginal", {"l", "alpha", "q"}},
      {"speed-cdf", {"s", "alpha"}},
      {"reservoir-density", {"alpha", "q"}},
  };
  const auto it = keys.find(name);
  hw::require(it != keys.end(), "unknown theory '" + name + "'");
  const json p = parse_config(params, it->second);
  if (name == "q-pochhammer") {
    std::optional<long> n;
    if (p.contains("n")) n = integer_param(p, "n");
    return hw::q_pochhammer(number_param(p, "a"), number_param(p, "q"), n);
  }
  if (name == "rho") return hw::rho_alpha(integer_param(p, "z"), number_param(p, "alpha"));
  if (name == "block-occupancy")
    return hw::block_occupancy_theory(integer_param(p, "z"), integer_param(p, "m"),
                                      number_param(p, "alpha"));
  if (name == "exit")
    return hw::exit_probability_theory(integer_param(p, "k"), integer_param(p, "l"),
                                       number_param(p, "alpha"));
  if (name == "survival")
    return hw::survival_theory(integer_param(p, "k"), integer_param(p, "l"),
                               number_param(p, "alpha"), number_param(p, "q"));
  if (name == "kappa") return hw::kappa(number_param(p, "alpha"), number_param(p, "q"));
  if (name == "alpha-of-kappa")
    return hw::alpha_of_kappa(number_param(p, "kappa"), number_param(p, "q"));
  if (name == "qtazrp-marginal")
    return hw::qtazrp_marginal_theory(integer_param(p, "l"), number_param(p, "alpha"),
                                      number_param(p, "q"));
  if (name == "speed-cdf")
    return hw::second_class_speed_cdf_theory(integer_param(p, "s"), number_param(p, "alpha"));
  return hw::halfline_reservoir_density(number_param(p, "alpha"), number_param(p, "q"));
}

// ---- experiments ---------------------------------------------------------

std::vector<hw::EstimateReport> experiment(const std::string& name, const char* config) {
  const std::string text = config == nullptr ? "{}" : config;
  if (name == "exit") {
    const hw::ExitEstimate e = hw::estimate_exit(hw::halfline_config_from_json(text));
    return {e.at_t, e.at_2t};
  }
  if (name == "survival") return {hw::estimate_survival(hw::halfline_config_from_json(text))};
  if (name == "qtazrp-marginal")
    return hw::estimate_qtazrp_marginal(hw::qtazrp_marginal_config_from_json(text)).per_l;
  if (name == "second-class-speed")
    return hw::estimate_second_class_speed(hw::second_class_speed_config_from_json(text))
        .per_alpha;
  hw::fail(hw::ErrorCode::kInvalidArgument, "unknown experiment '" + name + "'");
}

}  // namespace

extern "C" {

const char* hw_last_error(void) { return g_last_error.c_str(); }

const char* hw_status_name(hw_status status) {
  switch (status) {
    case HW_OK: return "ok";
    case HW_INVALID_ARGUMENT: return "invalid argument";
    case HW_DOMAIN: return "domain error";
    case HW_TOO_LARGE: return "too large";
    case HW_NOT_STOCHASTIC: return "not stochastic";
    case HW_BOUNDARY_CONTACT: return "boundary contact";
    case HW_PLATEAU_NOT_REACHED: return "plateau not reached";
    case HW_EXCESSIVE_DISCARDS: return "excessive discards";
    case HW_IO: return "I/O error";
    case HW_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* hw_version(void) { return "1.0.0"; }

void hw_string_free(char* s) { std::free(s); }

hw_status hw_element_from_json(const char* text, hw_element** out) {
  return guarded([&] {
    require_ptr(text, "json");
    require_ptr(out, "out");
    *out = new hw_element{hw::hecke_from_json(text)};
  });
}

hw_status hw_element_to_json(const hw_element* h, char** out) {
  return guarded([&] {
    require_ptr(h, "element");
    require_ptr(out, "out");
    *out = dup_string(hw::hecke_to_json(h->value));
  });
}

hw_status hw_element_basis(char family, int rank, const char* q, const int* word,
                           size_t word_len, hw_element** out) {
  return guarded([&] {
    require_ptr(q, "q");
    require_ptr(out, "out");
    hw::require(word != nullptr || word_len == 0, "word must not be null");
    const hw::CoxeterFamily fam = family_of(family, rank);
    const hw::GroupElement w =
        hw::GroupElement::from_word(fam, std::span<const int>(word, word_len));
    *out = new hw_element{hw::HeckeElement::basis(w, hw::parse_rational(q))};
  });
}

hw_status hw_element_mul(const hw_element* a, const hw_element* b, hw_element** out) {
  return guarded([&] {
    require_ptr(a, "a");
    require_ptr(b, "b");
    require_ptr(out, "out");
    *out = new hw_element{hw::mul(a->value, b->value)};
  });
}

hw_status hw_element_involution(const hw_element* h, hw_element** out) {
  return guarded([&] {
    require_ptr(h, "element");
    require_ptr(out, "out");
    *out = new hw_element{hw::involution(h->value)};
  });
}

hw_status hw_element_is_stochastic(const hw_element* h, int* out) {
  return guarded([&] {
    require_ptr(h, "element");
    require_ptr(out, "out");
    *out = hw::is_stochastic(h->value).stochastic ? 1 : 0;
  });
}

hw_status hw_element_equal(const hw_element* a, const hw_element* b, int* out) {
  return guarded([&] {
    require_ptr(a, "a");
    require_ptr(b, "b");
    require_ptr(out, "out");
    *out = a->value == b->value ? 1 : 0;
  });
}

void hw_element_free(hw_element* h) { delete h; }

hw_status hw_algebra_check(char family, int rank, const char* q, uint64_t seed, int triples,
                           int pairs, char** report_json, int* all_ok) {
  return guarded([&] {
    require_ptr(q, "q");
    require_ptr(report_json, "report_json");
    require_ptr(all_ok, "all_ok");
    const hw::AlgebraCheck c =
        hw::algebra_identities(family_of(family, rank), hw::parse_rational(q), seed, triples, pairs);
    *report_json = dup_string(hw::algebra_check_to_json({c}));
    *all_ok = c.ok() ? 1 : 0;
  });
}

hw_status hw_mallows_sample(int n, const char* q, uint64_t seed, size_t count, int* out) {
  return guarded([&] {
    require_ptr(q, "q");
    require_ptr(out, "out");
    const hw::MallowsSpec spec = hw::MallowsSpec::with_n(n, hw::parse_rational(q).get_d());
    for (size_t i = 0; i < count; ++i) {
      hw::Rng rng = hw::Rng::stream(seed, i);
      const auto a = hw::sample_mallows(spec, rng);
      std::copy(a.begin(), a.end(), out + i * static_cast<size_t>(n));
    }
  });
}

hw_status hw_mallows_pmf(const int* arrangement, int n, const char* q, char** out) {
  return guarded([&] {
    require_ptr(arrangement, "arrangement");
    require_ptr(q, "q");
    require_ptr(out, "out");
    hw::require(n >= 1, "n must be positive");
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels[i] = i + 1;
    const hw::Rational p = hw::mallows_pmf(std::span<const int>(arrangement, n), labels,
                                           hw::parse_rational(q));
    *out = dup_string(hw::rational_to_string(p));
  });
}

hw_status hw_simulate(const char* model, const char* config_json, double t_max, long trials,
                      uint64_t seed, hw_line_callback callback, void* user) {
  return guarded([&] {
    require_ptr(model, "model");
    hw::require(callback != nullptr, "callback must not be null");
    simulate(model, config_json, t_max, trials, seed, callback, user);
  });
}

hw_status hw_theory(const char* name, const char* params_json, double* out) {
  return guarded([&] {
    require_ptr(name, "name");
    require_ptr(out, "out");
    *out = theory(name, params_json);
  });
}

hw_status hw_experiment(const char* name, const char* config_json, const char* format,
                        char** report, double* max_abs_z) {
  return guarded([&] {
    require_ptr(name, "name");
    require_ptr(format, "format");
    require_ptr(report, "report");
    const std::string fmt = format;
    hw::require(fmt == "csv" || fmt == "json", "format must be csv or json");
    const auto reports = experiment(name, config_json);
    double worst = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : reports) {
      if (std::isnan(r.theory)) continue;
      double z = std::abs(r.zscore);
      if (std::isnan(z)) z = std::numeric_limits<double>::infinity();
      worst = std::isnan(worst) ? z : std::max(worst, z);
    }
    if (max_abs_z != nullptr) *max_abs_z = worst;
    *report = dup_string(fmt == "csv" ? hw::reports_to_csv(reports) : hw::reports_to_json(reports));
  });
}

}  // extern "C"
