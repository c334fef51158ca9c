// Command-line frontend: epsilon sweeps, order tables, Bloch-region scans and
// a self-verification suite, all emitted as flat CSV files.

#include <clocale>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tdnoise/bloch.hpp"
#include "tdnoise/channels.hpp"
#include "tdnoise/designs.hpp"
#include "tdnoise/quality.hpp"

namespace {

using namespace tdnoise;

constexpr int kExitFailure = 1;
constexpr int kExitBadArgs = 2;
constexpr int kExitInfeasible = 3;

std::string fmt12(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.12g", v);
  return buf;
}

struct GridOptions {
  double rt = 1.0;
  double thetat = std::numbers::pi;
  double phit = 2.0 * std::numbers::pi;
  int n = 11;

  BlochGridSpec spec() const { return {rt, thetat, phit, n, n, n}; }
};

struct SweepOptions {
  std::string channel;
  std::string model = "before";
  int t = 2;
  double param_start = 0.0;
  double param_stop = 1.0;
  int param_steps = 11;
  GridOptions grid;
  std::string mode = "projected";
  std::string out;
};

struct RegionOptions {
  std::string channel;
  std::string model = "before";
  int t = 2;
  double param = 0.5;
  int grid_n = 20;
  double threshold = 0.5;
  std::string mode = "projected";
  std::string out = "region.csv";
};

struct VerifyOptions {
  std::string ensemble_file;
  bool no_oracle = false;
};

ChannelKind parse_channel(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("--channel is required");
  const auto kind = channel_kind_from_string(name);
  if (!kind) throw std::invalid_argument("unknown channel: " + name);
  return *kind;
}

// Key-value configuration files share the flag names; values given on the
// command line take precedence over the file.
class ConfigMerger {
 public:
  explicit ConfigMerger(CLI::App* sub) : sub_(sub) {
    sub_->add_option("--config", path_, "key=value file with the same keys as the flags");
  }

  void bind(const std::string& key, std::string* target) {
    setters_[key] = [target](const std::string& v) { *target = v; };
  }
  void bind(const std::string& key, double* target) {
    setters_[key] = [key, target](const std::string& v) { *target = parse_number(key, v); };
  }
  void bind(const std::string& key, int* target) {
    setters_[key] = [key, target](const std::string& v) {
      const double number = parse_number(key, v);
      *target = static_cast<int>(number);
      if (*target != number) throw std::invalid_argument("config key " + key + ": not an integer");
    };
  }

  // Applies the file, if one was named, after command-line parsing.
  void apply() const {
    if (path_.empty()) return;
    std::ifstream in(path_);
    if (!in) throw std::invalid_argument("cannot open config file: " + path_);
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
      const std::string trimmed = trim(line);
      if (trimmed.empty() || trimmed[0] == '#') continue;
      const std::size_t eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(number) + ": expected key=value");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      const auto setter = setters_.find(key);
      if (setter == setters_.end())
        throw std::invalid_argument("config line " + std::to_string(number) + ": unknown key " + key);
      if (sub_->count("--" + key) > 0) continue;  // explicit flag wins
      setter->second(value);
    }
  }

 private:
  static std::string trim(const std::string& s) {
    const std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
  }

  static double parse_number(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double number = 0.0;
    try {
      number = std::stod(value, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("config key " + key + ": bad number " + value);
    }
    if (used != value.size())
      throw std::invalid_argument("config key " + key + ": bad number " + value);
    return number;
  }

  CLI::App* sub_;
  std::string path_;
  std::map<std::string, std::function<void(const std::string&)>> setters_;
};

NoiseModel parse_model(const std::string& name) {
  if (name == "before") return NoiseModel::Before;
  if (name == "after") return NoiseModel::After;
  throw std::invalid_argument("unknown model: " + name);
}

EpsilonMode parse_mode(const std::string& name) {
  if (name == "strict") return EpsilonMode::strict();
  if (name == "projected") return EpsilonMode::support_projected();
  throw std::invalid_argument("unknown mode: " + name);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

void write_common_header(std::ofstream& out, const SweepOptions& o) {
  out << "# channel: " << o.channel << '\n'
      << "# model: " << o.model << '\n'
      << "# t: " << o.t << '\n'
      << "# rt: " << fmt12(o.grid.rt) << '\n'
      << "# thetat: " << fmt12(o.grid.thetat) << '\n'
      << "# phit: " << fmt12(o.grid.phit) << '\n'
      << "# grid-n: " << o.grid.n << '\n'
      << "# mode: " << o.mode << '\n';
}

void require_param_range(double start, double stop, int steps) {
  if (start < 0.0 || start > 1.0 || stop < 0.0 || stop > 1.0)
    throw std::invalid_argument("parameter range must stay within [0, 1]");
  if (steps < 2) throw std::invalid_argument("--param-steps must be at least 2");
}

int run_sweep(const SweepOptions& o) {
  const ChannelKind kind = parse_channel(o.channel);
  const NoiseModel model = parse_model(o.model);
  const EpsilonMode mode = parse_mode(o.mode);
  require_param_range(o.param_start, o.param_stop, o.param_steps);
  const SampleEvaluator evaluator(spherical_grid(o.grid.spec()), o.t, icosahedral_design(), mode);

  std::ofstream out = open_output(o.out);
  write_common_header(out, o);
  out << "# param-start: " << fmt12(o.param_start) << '\n'
      << "# param-stop: " << fmt12(o.param_stop) << '\n'
      << "# param-steps: " << o.param_steps << '\n'
      << "param,epsilon\n";

  bool infeasible = false;
  for (int k = 0; k < o.param_steps; ++k) {
    const double p =
        o.param_start + (o.param_stop - o.param_start) * k / (o.param_steps - 1);
    const EpsilonResult r = evaluator.evaluate(make_channel(kind, p), model);
    infeasible |= !r.feasible;
    out << fmt12(p) << ',' << fmt12(r.epsilon) << '\n';
  }
  out.close();
  return infeasible ? kExitInfeasible : 0;
}

int run_ttable(const SweepOptions& o, double param) {
  const ChannelKind kind = parse_channel(o.channel);
  const NoiseModel model = parse_model(o.model);
  const EpsilonMode mode = parse_mode(o.mode);
  const KrausChannel channel = make_channel(kind, param);
  const std::vector<BlochPoint> grid = spherical_grid(o.grid.spec());

  std::ofstream out = open_output(o.out);
  write_common_header(out, o);
  out << "# param: " << fmt12(param) << '\n' << "t,epsilon\n";

  bool infeasible = false;
  for (int t = 1; t <= 5; ++t) {
    const EpsilonResult r = SampleEvaluator(grid, t, icosahedral_design(), mode)
                                .evaluate(channel, model);
    infeasible |= !r.feasible;
    out << t << ',' << fmt12(r.epsilon) << '\n';
  }
  out.close();
  return infeasible ? kExitInfeasible : 0;
}

int run_region(const RegionOptions& o) {
  const ChannelKind kind = parse_channel(o.channel);
  const NoiseModel model = parse_model(o.model);
  const EpsilonMode mode = parse_mode(o.mode);
  const std::vector<BlochPoint> points = cube_grid(o.grid_n);
  const SampleEvaluator evaluator(points, o.t, icosahedral_design(), mode);
  const std::vector<EpsilonResult> results =
      evaluator.evaluate_per_state(make_channel(kind, o.param), model);

  std::ofstream out = open_output(o.out);
  out << "# channel: " << o.channel << '\n'
      << "# model: " << o.model << '\n'
      << "# t: " << o.t << '\n'
      << "# param: " << fmt12(o.param) << '\n'
      << "# grid-n: " << o.grid_n << '\n'
      << "# threshold: " << fmt12(o.threshold) << '\n'
      << "# mode: " << o.mode << '\n'
      << "x,y,z,epsilon,accept\n";

  bool infeasible = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EpsilonResult& r = results[i];
    infeasible |= !r.feasible;
    const bool accept = r.feasible && r.epsilon <= o.threshold;
    out << fmt12(points[i].x) << ',' << fmt12(points[i].y) << ',' << fmt12(points[i].z) << ','
        << fmt12(r.epsilon) << ',' << (accept ? 1 : 0) << '\n';
  }
  out.close();
  return infeasible ? kExitInfeasible : 0;
}

// ---- verify --------------------------------------------------------------

struct CheckReporter {
  bool all_pass = true;

  void report(const std::string& name, bool pass, const std::string& detail = "") {
    std::string line = name + ' ';
    while (line.size() < 44) line += '.';
    line += pass ? " pass" : " FAIL";
    if (!detail.empty()) line += "  (" + detail + ")";
    std::cout << line << '\n';
    all_pass &= pass;
  }
};

std::string scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::vector<BlochPoint> fixed_random_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<BlochPoint> points;
  while (static_cast<int>(points.size()) < count) {
    const BlochPoint p{2 * unit() - 1, 2 * unit() - 1, 2 * unit() - 1};
    if (p.x * p.x + p.y * p.y + p.z * p.z <= 1.0) points.push_back(p);
  }
  return points;
}

int run_verify(const VerifyOptions& o) {
  if (o.no_oracle) {
    std::cout << "certification cannot run: the quadrature oracle is disabled\n";
    return kExitFailure;
  }
  CheckReporter reporter;

  const UnitaryEnsemble pauli = pauli_design();
  const UnitaryEnsemble clifford = clifford_design();
  const UnitaryEnsemble ico = icosahedral_design();
  {
    const int order = verify_design_order(pauli, 2);
    reporter.report("design order pauli", order == 1, "order " + std::to_string(order));
  }
  {
    const int order = verify_design_order(clifford, 4);
    reporter.report("design order clifford", order == 3, "order " + std::to_string(order));
  }
  {
    const int order = verify_design_order(ico, 6);
    reporter.report("design order icosahedral", order == 5, "order " + std::to_string(order));
  }

  const std::vector<ChannelKind> kinds = {
      ChannelKind::BitFlip,      ChannelKind::PhaseFlip,        ChannelKind::BitPhaseFlip,
      ChannelKind::PhaseDamping, ChannelKind::AmplitudeDamping, ChannelKind::Depolarising};
  {
    double worst = 0.0;
    for (ChannelKind kind : kinds)
      for (int k = 0; k <= 10; ++k) {
        const KrausChannel ch = make_channel(kind, k / 10.0);
        Matrix2 sum = Matrix2::Zero();
        for (const Matrix2& e : ch.kraus) sum += e.adjoint() * e;
        worst = std::max(worst, (sum - Matrix2::Identity()).norm());
      }
    reporter.report("channel completeness", worst <= 1e-12, "max defect " + scientific(worst));
  }
  {
    const std::vector<BlochPoint> states = fixed_random_points(20, 0xC0FFEE);
    double worst_trace = 0.0, worst_negativity = 0.0;
    for (ChannelKind kind : kinds)
      for (int k = 0; k <= 10; ++k)
        for (const BlochPoint& p : states) {
          const ComplexMatrix sigma =
              apply_channel(make_channel(kind, k / 10.0), density_from_point(p));
          worst_trace = std::max(worst_trace, std::abs(sigma.trace() - Complex(1.0)));
          const Spectrum spec = hermitian_eig(sigma);
          worst_negativity = std::max(worst_negativity, -spec.eigenvalues(0));
        }
    reporter.report("channel output validity", worst_trace <= 1e-12 && worst_negativity <= 1e-10,
                    "max trace defect " + scientific(worst_trace));
  }

  // Order-1 invariance. Conjugating the channel output cannot move the
  // one-design average, and neither can a unital channel applied to it.
  // Amplitude damping after the unitaries shifts the average by exactly
  // lambda, which is checked in closed form.
  const BlochGridSpec small_grid{1.0, std::numbers::pi, 2.0 * std::numbers::pi, 5, 5, 5};
  const std::vector<BlochPoint> sample = spherical_grid(small_grid);
  const EpsilonMode projected = EpsilonMode::support_projected();
  {
    double worst = 0.0;
    const SampleEvaluator evaluator(sample, 1, pauli, projected);
    for (ChannelKind kind : kinds)
      for (int k = 0; k <= 10; ++k)
        worst = std::max(
            worst, evaluator.evaluate(make_channel(kind, k / 10.0), NoiseModel::Before).epsilon);
    reporter.report("order-1 invariance, before model", worst <= 1e-10,
                    "max epsilon " + scientific(worst));
  }
  {
    double worst = 0.0;
    const SampleEvaluator evaluator(sample, 1, pauli, projected);
    for (ChannelKind kind : kinds) {
      if (kind == ChannelKind::AmplitudeDamping) continue;
      for (int k = 0; k <= 10; ++k)
        worst = std::max(
            worst, evaluator.evaluate(make_channel(kind, k / 10.0), NoiseModel::After).epsilon);
    }
    reporter.report("order-1 invariance, after model (unital)", worst <= 1e-10,
                    "max epsilon " + scientific(worst));
  }
  {
    double worst = 0.0;
    const SampleEvaluator evaluator(sample, 1, pauli, projected);
    for (int k = 0; k <= 10; ++k) {
      const double lambda = k / 10.0;
      const double eps =
          evaluator.evaluate(make_channel(ChannelKind::AmplitudeDamping, lambda), NoiseModel::After)
              .epsilon;
      worst = std::max(worst, std::abs(eps - lambda));
    }
    reporter.report("order-1 ampdamp after-model offset", worst <= 1e-10,
                    "max |epsilon - lambda| " + scientific(worst));
  }

  {
    // Pure states make the exact moment singular; strict mode must refuse
    // while the projected mode still returns a finite answer.
    const ComplexMatrix pure = density_from_point({0.0, 0.0, 1.0});
    const KrausChannel ch = make_channel(ChannelKind::BitFlip, 0.3);
    const EpsilonResult strict =
        epsilon_for_state(pure, 2, ico, ch, NoiseModel::Before, EpsilonMode::strict());
    const EpsilonResult proj =
        epsilon_for_state(pure, 2, ico, ch, NoiseModel::Before, projected);
    const bool pass = !strict.feasible && strict.kernel_residual > 1e-3 && proj.feasible &&
                      std::isfinite(proj.epsilon);
    reporter.report("strict mode at pure states", pass,
                    "kernel residual " + scientific(strict.kernel_residual) +
                        ", projected epsilon " + scientific(proj.epsilon));
  }

  {
    double worst = 0.0;
    const std::vector<BlochPoint> states = fixed_random_points(10, 0xDEADBEA7);
    for (int t = 1; t <= 5; ++t)
      for (double p : {0.1, 0.5, 0.9})
        for (const BlochPoint& point : states) {
          const ComplexMatrix rho = density_from_point(point);
          const KrausChannel ch = make_channel(ChannelKind::Depolarising, p);
          const double gap = (noisy_moment(rho, t, ico, ch, NoiseModel::Before) -
                              noisy_moment(rho, t, ico, ch, NoiseModel::After))
                                 .norm();
          worst = std::max(worst, gap);
        }
    reporter.report("depolarising model equivalence", worst <= 1e-12,
                    "max moment gap " + scientific(worst));
  }

  if (!o.ensemble_file.empty()) {
    const std::string name = "ensemble file " + o.ensemble_file;
    try {
      const UnitaryEnsemble ens = load_ensemble(o.ensemble_file);
      validate_ensemble(ens);
      const int order = verify_design_order(ens, 5);
      reporter.report(name, order >= 1, "certified order " + std::to_string(order));
    } catch (const std::exception& e) {
      reporter.report(name, false, e.what());
    }
  }

  return reporter.all_pass ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");
  CLI::App app{"noisy t-design quality explorer"};
  app.require_subcommand(1);

  const std::vector<std::string> channel_names = {"bitflip",   "phaseflip", "bitphaseflip",
                                                  "phasedamp", "ampdamp",   "depolarising"};

  SweepOptions sweep_opts;
  sweep_opts.out = "sweep.csv";
  CLI::App* sweep = app.add_subcommand("sweep", "epsilon versus channel parameter");
  sweep->add_option("--channel", sweep_opts.channel, "noise channel")
      ->check(CLI::IsMember(channel_names));
  sweep->add_option("--model", sweep_opts.model)->check(CLI::IsMember({"before", "after"}));
  sweep->add_option("--t", sweep_opts.t, "design order")->check(CLI::Range(1, 5));
  sweep->add_option("--param-start", sweep_opts.param_start)->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--param-stop", sweep_opts.param_stop)->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--param-steps", sweep_opts.param_steps)->check(CLI::Range(2, 1000000));
  sweep->add_option("--rt", sweep_opts.grid.rt)->check(CLI::Range(0.0, 1.0));
  sweep->add_option("--thetat", sweep_opts.grid.thetat)
      ->check(CLI::Range(0.0, std::numbers::pi));
  sweep->add_option("--phit", sweep_opts.grid.phit)
      ->check(CLI::Range(0.0, 2.0 * std::numbers::pi));
  sweep->add_option("--grid-n", sweep_opts.grid.n)->check(CLI::Range(2, 1000));
  sweep->add_option("--mode", sweep_opts.mode)->check(CLI::IsMember({"strict", "projected"}));
  sweep->add_option("--out", sweep_opts.out, "output CSV path");
  ConfigMerger sweep_config(sweep);
  sweep_config.bind("channel", &sweep_opts.channel);
  sweep_config.bind("model", &sweep_opts.model);
  sweep_config.bind("t", &sweep_opts.t);
  sweep_config.bind("param-start", &sweep_opts.param_start);
  sweep_config.bind("param-stop", &sweep_opts.param_stop);
  sweep_config.bind("param-steps", &sweep_opts.param_steps);
  sweep_config.bind("rt", &sweep_opts.grid.rt);
  sweep_config.bind("thetat", &sweep_opts.grid.thetat);
  sweep_config.bind("phit", &sweep_opts.grid.phit);
  sweep_config.bind("grid-n", &sweep_opts.grid.n);
  sweep_config.bind("mode", &sweep_opts.mode);
  sweep_config.bind("out", &sweep_opts.out);

  SweepOptions ttable_opts;
  ttable_opts.out = "ttable.csv";
  double ttable_param = 0.5;
  CLI::App* ttable = app.add_subcommand("ttable", "epsilon versus design order");
  ttable->add_option("--channel", ttable_opts.channel, "noise channel")
      ->check(CLI::IsMember(channel_names));
  ttable->add_option("--model", ttable_opts.model)->check(CLI::IsMember({"before", "after"}));
  ttable->add_option("--param", ttable_param, "fixed channel parameter")
      ->check(CLI::Range(0.0, 1.0));
  ttable->add_option("--rt", ttable_opts.grid.rt)->check(CLI::Range(0.0, 1.0));
  ttable->add_option("--thetat", ttable_opts.grid.thetat)
      ->check(CLI::Range(0.0, std::numbers::pi));
  ttable->add_option("--phit", ttable_opts.grid.phit)
      ->check(CLI::Range(0.0, 2.0 * std::numbers::pi));
  ttable->add_option("--grid-n", ttable_opts.grid.n)->check(CLI::Range(2, 1000));
  ttable->add_option("--mode", ttable_opts.mode)->check(CLI::IsMember({"strict", "projected"}));
  ttable->add_option("--out", ttable_opts.out, "output CSV path");
  ConfigMerger ttable_config(ttable);
  ttable_config.bind("channel", &ttable_opts.channel);
  ttable_config.bind("model", &ttable_opts.model);
  ttable_config.bind("param", &ttable_param);
  ttable_config.bind("rt", &ttable_opts.grid.rt);
  ttable_config.bind("thetat", &ttable_opts.grid.thetat);
  ttable_config.bind("phit", &ttable_opts.grid.phit);
  ttable_config.bind("grid-n", &ttable_opts.grid.n);
  ttable_config.bind("mode", &ttable_opts.mode);
  ttable_config.bind("out", &ttable_opts.out);

  RegionOptions region_opts;
  CLI::App* region = app.add_subcommand("region", "acceptable-quality region scan");
  region->add_option("--channel", region_opts.channel, "noise channel")
      ->check(CLI::IsMember(channel_names));
  region->add_option("--model", region_opts.model)->check(CLI::IsMember({"before", "after"}));
  region->add_option("--t", region_opts.t, "design order")->check(CLI::Range(1, 5));
  region->add_option("--param", region_opts.param, "fixed channel parameter")
      ->check(CLI::Range(0.0, 1.0));
  region->add_option("--grid-n", region_opts.grid_n)->check(CLI::Range(2, 1000));
  region->add_option("--threshold", region_opts.threshold, "acceptance threshold");
  region->add_option("--mode", region_opts.mode)->check(CLI::IsMember({"strict", "projected"}));
  region->add_option("--out", region_opts.out, "output CSV path");
  ConfigMerger region_config(region);
  region_config.bind("channel", &region_opts.channel);
  region_config.bind("model", &region_opts.model);
  region_config.bind("t", &region_opts.t);
  region_config.bind("param", &region_opts.param);
  region_config.bind("grid-n", &region_opts.grid_n);
  region_config.bind("threshold", &region_opts.threshold);
  region_config.bind("mode", &region_opts.mode);
  region_config.bind("out", &region_opts.out);

  VerifyOptions verify_opts;
  CLI::App* verify = app.add_subcommand("verify", "self-verification suite");
  verify->add_option("--ensemble", verify_opts.ensemble_file,
                     "also certify an ensemble from a text file");
  verify->add_flag("--no-oracle", verify_opts.no_oracle,
                   "disable the quadrature oracle (certification will refuse to run)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadArgs;
  }

  try {
    if (*sweep) {
      sweep_config.apply();
      return run_sweep(sweep_opts);
    }
    if (*ttable) {
      ttable_config.apply();
      return run_ttable(ttable_opts, ttable_param);
    }
    if (*region) {
      region_config.apply();
      return run_region(region_opts);
    }
    return run_verify(verify_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
