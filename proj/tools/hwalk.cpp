#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heckewalk/heckewalk.h"

namespace {

using nlohmann::json;

constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

struct Failure {
  std::string message;
};

void check(hw_status status, const std::string& context) {
  if (status != HW_OK)
    throw Failure{context + ": " + hw_status_name(status) + ": " + hw_last_error()};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Owns a C string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { hw_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Failure{"cannot write " + path};
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  std::string config;
  double t_max = 10.0;
  long trials = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string lattice_csv;
};

struct SimulateSink {
  std::ostream* lines = nullptr;
  std::ostream* lattice = nullptr;
  bool lattice_header = false;
};

int on_line(const char* line, void* user) {
  auto* sink = static_cast<SimulateSink*>(user);
  json j = json::parse(line);
  if (j.contains("lattice_csv")) {
    if (sink->lattice != nullptr) {
      std::istringstream csv(j["lattice_csv"].get<std::string>());
      std::string row;
      std::getline(csv, row);  // header
      if (!sink->lattice_header) {
        *sink->lattice << "trial," << row << '\n';
        sink->lattice_header = true;
      }
      while (std::getline(csv, row))
        if (!row.empty()) *sink->lattice << j["trial"].get<long>() << ',' << row << '\n';
    }
    j.erase("lattice_csv");
  }
  *sink->lines << j.dump() << '\n';
  return 0;
}

int run_simulate(const SimulateArgs& a) {
  json cfg = a.config.empty() ? json::object() : json::parse(read_file(a.config));
  if (!a.lattice_csv.empty()) {
    if (a.model != "six-vertex") throw Failure{"--lattice-csv applies to the six-vertex model"};
    cfg["lattice"] = true;
  }
  Output out(a.out);
  std::ofstream lattice;
  SimulateSink sink{&out.stream(), nullptr, false};
  if (!a.lattice_csv.empty()) {
    lattice.open(a.lattice_csv);
    if (!lattice) throw Failure{"cannot write " + a.lattice_csv};
    sink.lattice = &lattice;
  }
  check(hw_simulate(a.model.c_str(), cfg.dump().c_str(), a.t_max, a.trials, a.seed, on_line,
                    &sink),
        "simulate");
  return 0;
}

// ---- sample-mallows ----------------------------------------------------------

struct MallowsArgs {
  int n = 4;
  std::string q = "1/2";
  long count = 10;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<int> pmf;
};

int run_mallows(const MallowsArgs& a) {
  if (!a.pmf.empty()) {
    CString p;
    check(hw_mallows_pmf(a.pmf.data(), static_cast<int>(a.pmf.size()), a.q.c_str(), &p.p), "pmf");
    std::cout << p.str() << '\n';
    return 0;
  }
  if (a.n < 1 || a.count < 0) throw Failure{"need n >= 1 and count >= 0"};
  std::vector<int> buf(static_cast<std::size_t>(a.n) * static_cast<std::size_t>(a.count));
  check(hw_mallows_sample(a.n, a.q.c_str(), a.seed, static_cast<size_t>(a.count), buf.data()), "sample");
  Output out(a.out);
  for (long i = 0; i < a.count; ++i) {
    const auto first = buf.begin() + i * a.n;
    out.stream() << json(std::vector<int>(first, first + a.n)).dump() << '\n';
  }
  return 0;
}

// ---- algebra-check ---------------------------------------------------------

struct AlgebraArgs {
  std::vector<std::string> groups{"A4", "B3"};
  std::vector<std::string> qs{"0", "1/3", "1/2", "1"};
  std::uint64_t seed = 1;
  int triples = 100;
  int pairs = 50;
};

int run_algebra(const AlgebraArgs& a) {
  json all = json::array();
  bool ok = true;
  for (const auto& g : a.groups) {
    if (g.size() < 2 || (g[0] != 'A' && g[0] != 'B')) throw Failure{"group must look like A4 or B3"};
    const int rank = std::stoi(g.substr(1));
    for (const auto& q : a.qs) {
      CString report;
      int all_ok = 0;
      check(hw_algebra_check(g[0], rank, q.c_str(), a.seed, a.triples, a.pairs, &report.p, &all_ok),
            "algebra-check");
      for (auto& entry : json::parse(report.str())) all.push_back(entry);
      ok = ok && all_ok == 1;
    }
  }
  std::cout << all.dump(2) << '\n';
  return ok ? 0 : kExitCheckFailed;
}

// ---- experiment ------------------------------------------------------------

struct ExperimentArgs {
  std::string name;
  std::string config;
  std::string out;
  std::string format;
  double z_bound = 4.0;
};

int run_experiment(const ExperimentArgs& a) {
  const std::string config = a.config.empty() ? "{}" : read_file(a.config);
  std::string format = a.format;
  if (format.empty())
    format = a.out.size() >= 5 && a.out.substr(a.out.size() - 5) == ".json" ? "json" : "csv";
  CString report;
  double max_z = 0.0;
  check(hw_experiment(a.name.c_str(), config.c_str(), format.c_str(), &report.p, &max_z),
        "experiment");
  Output out(a.out);
  out.stream() << report.str();
  std::cerr << "max |z| = " << max_z << " (bound " << a.z_bound << ")\n";
  return std::isnan(max_z) || max_z <= a.z_bound ? 0 : kExitCheckFailed;
}

// ---- theory ----------------------------------------------------------------

int run_theory(const std::string& name, const std::string& params) {
  double value = 0.0;
  check(hw_theory(name.c_str(), params.c_str(), &value), "theory");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  std::cout << buf << '\n';
  return 0;
}

// ---- multiply ----------------------------------------------------------------

int run_multiply(const std::string& a_path, const std::string& b_path) {
  hw_element* a = nullptr;
  hw_element* b = nullptr;
  hw_element* c = nullptr;
  struct Guard {
    hw_element** p[3];
    ~Guard() {
      for (auto* e : p) hw_element_free(*e);
    }
  } guard{{&a, &b, &c}};
  check(hw_element_from_json(read_file(a_path).c_str(), &a), a_path);
  check(hw_element_from_json(read_file(b_path).c_str(), &b), b_path);
  check(hw_element_mul(a, b, &c), "multiply");
  CString out;
  check(hw_element_to_json(c, &out.p), "multiply");
  std::cout << out.str() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random walks on Hecke algebras and the particle systems they encode"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hw_version());

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a particle system; one JSON line per trial");
  simulate->add_option("--model", sim.model, "masep|halfline|second-class|six-vertex|asep-qm|qtazrp")
      ->required()
      ->check(CLI::IsMember({"masep", "halfline", "second-class", "six-vertex", "asep-qm", "qtazrp"}));
  simulate->add_option("--config", sim.config, "JSON file with model parameters")->check(CLI::ExistingFile);
  simulate->add_option("--t-max", sim.t_max, "time horizon (steps in discrete mode)");
  simulate->add_option("--trials", sim.trials, "number of independent trials");
  simulate->add_option("--seed", sim.seed, "root seed");
  simulate->add_option("--out", sim.out, "output .jsonl file (default stdout)");
  simulate->add_option("--lattice-csv", sim.lattice_csv, "six-vertex: write the vertex lattice as CSV");

  MallowsArgs mal;
  auto* mallows = app.add_subcommand("sample-mallows", "Sample Mallows permutations or evaluate the pmf");
  mallows->add_option("--n", mal.n, "number of letters");
  mallows->add_option("--q", mal.q, "q as p/r or decimal");
  mallows->add_option("--count", mal.count, "number of samples");
  mallows->add_option("--seed", mal.seed, "root seed");
  mallows->add_option("--out", mal.out, "output .jsonl file (default stdout)");
  mallows->add_option("--pmf", mal.pmf, "print the exact probability of this arrangement instead");

  AlgebraArgs alg;
  auto* algebra = app.add_subcommand("algebra-check", "Exact Hecke algebra identity checks");
  algebra->add_option("--group", alg.groups, "groups such as A4 B3 (A_n means S_n)");
  algebra->add_option("--q", alg.qs, "values of q");
  algebra->add_option("--seed", alg.seed, "seed for random elements");
  algebra->add_option("--triples", alg.triples, "random triples for associativity");
  algebra->add_option("--pairs", alg.pairs, "random stochastic pairs for the involution");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a Monte Carlo estimator against its limit");
  experiment->add_option("--name", exp.name, "exit|survival|qtazrp-marginal|second-class-speed")
      ->required()
      ->check(CLI::IsMember({"exit", "survival", "qtazrp-marginal", "second-class-speed"}));
  experiment->add_option("--config", exp.config, "JSON config file")->check(CLI::ExistingFile);
  experiment->add_option("--out", exp.out, "report file (default stdout)");
  experiment->add_option("--format", exp.format, "csv|json (default from --out extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  experiment->add_option("--z-bound", exp.z_bound, "exit code 0 iff every |z| is within this bound");

  std::string theory_name, theory_params = "{}";
  auto* theory = app.add_subcommand("theory", "Evaluate a closed-form limit");
  theory->add_option("--name", theory_name,
                     "q-pochhammer|rho|block-occupancy|exit|survival|kappa|alpha-of-kappa|"
                     "qtazrp-marginal|speed-cdf|reservoir-density")
      ->required();
  theory->add_option("--params", theory_params, "JSON object of parameters");

  std::string mul_a, mul_b;
  auto* multiply = app.add_subcommand("multiply", "Multiply two Hecke elements given as JSON files");
  multiply->add_option("a", mul_a)->required()->check(CLI::ExistingFile);
  multiply->add_option("b", mul_b)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim);
    if (*mallows) return run_mallows(mal);
    if (*algebra) return run_algebra(alg);
    if (*experiment) return run_experiment(exp);
    if (*theory) return run_theory(theory_name, theory_params);
    if (*multiply) return run_multiply(mul_a, mul_b);
  } catch (const Failure& f) {
    std::cerr << "hwalk: " << f.message << '\n';
    return kExitError;
  } catch (const json::exception& e) {
    std::cerr << "hwalk: bad JSON: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "hwalk: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
