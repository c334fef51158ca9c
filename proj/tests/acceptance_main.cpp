// Acceptance gate: ten numbered end-to-end checks, one pass/fail line each.
// Run with no arguments for the full gate or with criterion numbers to run a
// subset. Exits nonzero if any executed check fails.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tdnoise/quality.hpp"

using namespace tdnoise;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

const std::vector<ChannelKind> kAllKinds = {
    ChannelKind::BitFlip,      ChannelKind::PhaseFlip,        ChannelKind::BitPhaseFlip,
    ChannelKind::PhaseDamping, ChannelKind::AmplitudeDamping, ChannelKind::Depolarising};

const std::vector<ChannelKind> kFlips = {ChannelKind::BitFlip, ChannelKind::PhaseFlip,
                                         ChannelKind::BitPhaseFlip};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<BlochPoint> random_ball_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<BlochPoint> points;
  while (static_cast<int>(points.size()) < count) {
    const BlochPoint p{2 * unit() - 1, 2 * unit() - 1, 2 * unit() - 1};
    if (p.x * p.x + p.y * p.y + p.z * p.z <= 1.0) points.push_back(p);
  }
  return points;
}

// 1. A 1-design is demanded to shrug off every channel under both models.
// The claim is false for non-unital noise applied after the unitaries
// (amplitude damping shifts the design average by exactly lambda), so this
// check fails honestly on those cells; see the verification suite for the
// closed-form statement of the offset.
Outcome criterion_1() {
  const SampleEvaluator evaluator(spherical_grid(BlochGridSpec{}), 1, icosahedral_design(),
                                  EpsilonMode::support_projected());
  double worst = -1.0;
  std::string worst_at;
  for (ChannelKind kind : kAllKinds)
    for (NoiseModel model : {NoiseModel::Before, NoiseModel::After})
      for (int k = 0; k <= 10; ++k) {
        const double eps = evaluator.evaluate(make_channel(kind, k / 10.0), model).epsilon;
        if (eps > worst) {
          worst = eps;
          worst_at = to_string(kind) + (model == NoiseModel::Before ? "/before" : "/after") +
                     " param " + fmt(k / 10.0);
        }
      }
  return {worst <= 1e-10,
          "1331 states x 6 channels x 2 models x 11 params, max epsilon " + fmt(worst) + " at " +
              worst_at};
}

// 2. Depolarising noise commutes with the design average, so the two noise
// models produce the same moment operator.
Outcome criterion_2() {
  const UnitaryEnsemble ico = icosahedral_design();
  const std::vector<BlochPoint> states = random_ball_points(100, 0x5EEDBA11);
  double worst = 0.0;
  for (int t = 1; t <= 5; ++t)
    for (double p : {0.1, 0.5, 0.9}) {
      const KrausChannel ch = make_channel(ChannelKind::Depolarising, p);
      for (const BlochPoint& point : states) {
        const Matrix2 rho = density_from_point(point);
        const double gap = (noisy_moment(rho, t, ico, ch, NoiseModel::Before) -
                            noisy_moment(rho, t, ico, ch, NoiseModel::After))
                               .norm();
        worst = std::max(worst, gap);
      }
    }
  return {worst <= 1e-12, "100 states, t = 1..5, 3 params, max moment gap " + fmt(worst)};
}

// 3. Any ensemble of sufficient order yields the same noisy moments.
Outcome criterion_3() {
  const UnitaryEnsemble clifford = clifford_design();
  const UnitaryEnsemble ico = icosahedral_design();
  const std::vector<BlochPoint> states = random_ball_points(20, 0xE25E4B1E);
  double worst = 0.0;
  for (int t = 1; t <= 3; ++t)
    for (ChannelKind kind : kAllKinds) {
      const KrausChannel ch = make_channel(kind, 0.3);
      for (NoiseModel model : {NoiseModel::Before, NoiseModel::After})
        for (const BlochPoint& point : states) {
          const Matrix2 rho = density_from_point(point);
          const double gap = (noisy_moment(rho, t, clifford, ch, model) -
                              noisy_moment(rho, t, ico, ch, model))
                                 .norm();
          worst = std::max(worst, gap);
        }
    }
  return {worst <= 1e-12,
          "clifford vs icosahedral, t <= 3, both models, max gap " + fmt(worst)};
}

// 4. The built-in ensembles certify at their documented orders and visibly
// break one order beyond.
Outcome criterion_4() {
  const int pauli_order = verify_design_order(pauli_design(), 2);
  const int clifford_order = verify_design_order(clifford_design(), 4);
  const int ico_order = verify_design_order(icosahedral_design(), 6);
  const double pauli_beyond = design_order_deviation(pauli_design(), 2);
  const double clifford_beyond = design_order_deviation(clifford_design(), 4);
  const double ico_beyond = design_order_deviation(icosahedral_design(), 6);
  const bool pass = pauli_order == 1 && clifford_order == 3 && ico_order == 5 &&
                    pauli_beyond > 1e-3 && clifford_beyond > 1e-3 && ico_beyond > 1e-3;
  return {pass, "orders " + std::to_string(pauli_order) + "/" + std::to_string(clifford_order) +
                    "/" + std::to_string(ico_order) + ", beyond-order deviations " +
                    fmt(pauli_beyond) + "/" + fmt(clifford_beyond) + "/" + fmt(ico_beyond)};
}

// 5. Amplitude damping near full strength drives epsilon to the quoted
// plateau values on the full sphere.
Outcome criterion_5() {
  const std::vector<BlochPoint> grid = spherical_grid(BlochGridSpec{});
  const UnitaryEnsemble ico = icosahedral_design();
  const EpsilonMode mode = EpsilonMode::support_projected();

  const double eps2 = SampleEvaluator(grid, 2, ico, mode)
                          .evaluate(make_channel(ChannelKind::AmplitudeDamping, 1.0),
                                    NoiseModel::Before)
                          .epsilon;
  const double eps4 = SampleEvaluator(grid, 4, ico, mode)
                          .evaluate(make_channel(ChannelKind::AmplitudeDamping, 1.0 - 1e-6),
                                    NoiseModel::Before)
                          .epsilon;
  const double eps5 = SampleEvaluator(grid, 5, ico, mode)
                          .evaluate(make_channel(ChannelKind::AmplitudeDamping, 1.0 - 1e-6),
                                    NoiseModel::Before)
                          .epsilon;
  const bool pass = std::abs(eps2 - 1.0) <= 1e-6 && std::abs(eps4 - 2.20) <= 0.01 &&
                    std::abs(eps5 - 4.33) <= 0.01;
  return {pass, "epsilon " + fmt(eps2) + " (t=2), " + fmt(eps4) + " (t=4), " + fmt(eps5) +
                    " (t=5) vs 1 / 2.20 / 4.33"};
}

// 6. The three flip channels produce one and the same curve, symmetric about
// p = 0.5 where it peaks.
Outcome criterion_6() {
  const std::vector<BlochPoint> grid =
      spherical_grid({0.95, std::numbers::pi, 2 * std::numbers::pi, 11, 11, 11});
  const UnitaryEnsemble ico = icosahedral_design();
  double worst_sym = 0.0, worst_cross = 0.0;
  bool peak_at_half = true;
  for (int t : {2, 4}) {
    const SampleEvaluator evaluator(grid, t, ico, EpsilonMode::support_projected());
    std::array<std::array<double, 11>, 3> curves{};
    for (std::size_t c = 0; c < kFlips.size(); ++c)
      for (int k = 0; k <= 10; ++k)
        curves[c][k] =
            evaluator.evaluate(make_channel(kFlips[c], k / 10.0), NoiseModel::Before).epsilon;
    for (std::size_t c = 0; c < kFlips.size(); ++c) {
      for (int k = 0; k <= 10; ++k) {
        worst_sym = std::max(worst_sym, std::abs(curves[c][k] - curves[c][10 - k]));
        if (curves[c][k] > curves[c][5]) peak_at_half = false;
        worst_cross = std::max(worst_cross, std::abs(curves[c][k] - curves[0][k]));
      }
    }
  }
  const bool pass = worst_sym <= 1e-8 && worst_cross <= 1e-8 && peak_at_half;
  return {pass, "t in {2,4}: p vs 1-p gap " + fmt(worst_sym) + ", cross-channel gap " +
                    fmt(worst_cross) + (peak_at_half ? ", peak at p = 0.5" : ", peak off 0.5")};
}

// 7. Epsilon versus order moves in steps: flat from 2 to 3 and from 4 to 5,
// with a pronounced jump in between.
Outcome criterion_7() {
  const std::vector<BlochPoint> grid =
      spherical_grid({0.95, std::numbers::pi, 2 * std::numbers::pi, 11, 11, 11});
  const UnitaryEnsemble ico = icosahedral_design();
  const std::vector<KrausChannel> channels = {make_channel(ChannelKind::BitFlip, 0.5),
                                              make_channel(ChannelKind::PhaseDamping, 0.5),
                                              make_channel(ChannelKind::Depolarising, 0.5)};
  std::array<std::array<double, 4>, 3> eps{};  // [channel][t - 2]
  for (int t = 2; t <= 5; ++t) {
    const SampleEvaluator evaluator(grid, t, ico, EpsilonMode::support_projected());
    for (std::size_t c = 0; c < channels.size(); ++c)
      eps[c][t - 2] = evaluator.evaluate(channels[c], NoiseModel::Before).epsilon;
  }
  bool pass = true;
  double worst_flat = 0.0, min_jump = 1e300;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const double flat23 = std::abs(eps[c][1] - eps[c][0]) / eps[c][0];
    const double flat45 = std::abs(eps[c][3] - eps[c][2]) / eps[c][2];
    const double jump = eps[c][2] / eps[c][1];
    worst_flat = std::max({worst_flat, flat23, flat45});
    min_jump = std::min(min_jump, jump);
    pass &= flat23 <= 1e-6 && flat45 <= 1e-6 && jump >= 1.5;
  }
  return {pass, "max relative step within the plateaus " + fmt(worst_flat) +
                    ", smallest jump ratio eps(4)/eps(3) " + fmt(min_jump)};
}

// 8. Truncating the angular coordinates leaves the curves unchanged; the
// polar cut theta_t = pi/2 already sees the full bit/phase structure while
// pi/6 does not.
Outcome criterion_8() {
  const UnitaryEnsemble ico = icosahedral_design();
  const EpsilonMode mode = EpsilonMode::support_projected();
  const double pi = std::numbers::pi;

  const auto curve = [&](const SampleEvaluator& evaluator, ChannelKind kind) {
    std::array<double, 11> c{};
    for (int k = 0; k <= 10; ++k)
      c[k] = evaluator.evaluate(make_channel(kind, k / 10.0), NoiseModel::Before).epsilon;
    return c;
  };
  const auto gap = [](const std::array<double, 11>& a, const std::array<double, 11>& b) {
    double g = 0.0;
    for (int k = 0; k <= 10; ++k) g = std::max(g, std::abs(a[k] - b[k]));
    return g;
  };

  const SampleEvaluator full_grid(spherical_grid({0.95, pi, 2 * pi, 11, 11, 11}), 2, ico, mode);
  const std::array<double, 11> bitflip_reference = curve(full_grid, ChannelKind::BitFlip);

  double worst_theta = 0.0;
  double phaseflip_half_pi = 0.0, phaseflip_pi = 0.0, phaseflip_sixth_pi = 0.0;
  for (int sixths = 1; sixths <= 6; ++sixths) {
    const double theta_t = sixths * pi / 6.0;
    const SampleEvaluator evaluator(spherical_grid({0.95, theta_t, 2 * pi, 11, 11, 11}), 2, ico,
                                    mode);
    worst_theta =
        std::max(worst_theta, gap(curve(evaluator, ChannelKind::BitFlip), bitflip_reference));
    const double phaseflip_mid =
        evaluator.evaluate(make_channel(ChannelKind::PhaseFlip, 0.5), NoiseModel::Before).epsilon;
    if (sixths == 1) phaseflip_sixth_pi = phaseflip_mid;
    if (sixths == 3) phaseflip_half_pi = phaseflip_mid;
    if (sixths == 6) phaseflip_pi = phaseflip_mid;
  }

  double worst_phi = 0.0;
  for (int sixths = 1; sixths <= 12; ++sixths) {
    const SampleEvaluator evaluator(
        spherical_grid({0.95, pi, sixths * pi / 6.0, 11, 11, 11}), 2, ico, mode);
    for (ChannelKind kind : kAllKinds)
      worst_phi = std::max(worst_phi, gap(curve(evaluator, kind), curve(full_grid, kind)));
  }

  const bool phase_ok = std::abs(phaseflip_half_pi - phaseflip_pi) <= 1e-8 &&
                        phaseflip_half_pi > phaseflip_sixth_pi;
  const bool pass = worst_theta <= 1e-8 && worst_phi <= 1e-8 && phase_ok;
  return {pass, "theta gap " + fmt(worst_theta) + ", phi gap " + fmt(worst_phi) +
                    ", phase flip " + fmt(phaseflip_half_pi) + " (pi/2) vs " + fmt(phaseflip_pi) +
                    " (pi) vs " + fmt(phaseflip_sixth_pi) + " (pi/6)"};
}

// 9. After the unitaries every flip channel depolarises: the accept regions
// of the three flips coincide and inherit full octahedral symmetry.
Outcome criterion_9() {
  const int n = 20;
  const std::vector<BlochPoint> points = cube_grid(n);
  const UnitaryEnsemble ico = icosahedral_design();
  const SampleEvaluator evaluator(points, 2, ico, EpsilonMode::support_projected());

  // Index triples in cube_grid generation order (x, then y, then z).
  std::vector<std::array<int, 3>> index_of;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = -1.0 + 2.0 * i / (n - 1), y = -1.0 + 2.0 * j / (n - 1),
                     z = -1.0 + 2.0 * k / (n - 1);
        if (std::sqrt(x * x + y * y + z * z) <= 1.0) index_of.push_back({i, j, k});
      }
  if (index_of.size() != points.size()) return {false, "index reconstruction out of step"};

  std::vector<std::set<std::array<int, 3>>> accepted(kFlips.size());
  for (std::size_t c = 0; c < kFlips.size(); ++c) {
    const std::vector<EpsilonResult> results =
        evaluator.evaluate_per_state(make_channel(kFlips[c], 0.3), NoiseModel::After);
    for (std::size_t s = 0; s < results.size(); ++s)
      if (results[s].feasible && results[s].epsilon <= 0.5) accepted[c].insert(index_of[s]);
  }

  const bool sets_equal = accepted[0] == accepted[1] && accepted[0] == accepted[2];

  // Closure under the 48 signed axis permutations.
  const std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  bool symmetric = true;
  for (const std::array<int, 3>& triple : accepted[0])
    for (const std::array<int, 3>& perm : perms)
      for (int signs = 0; signs < 8; ++signs) {
        std::array<int, 3> image{};
        for (int axis = 0; axis < 3; ++axis) {
          const int v = triple[perm[axis]];
          image[axis] = (signs >> axis & 1) ? n - 1 - v : v;
        }
        symmetric &= accepted[0].count(image) > 0;
      }

  const bool pass = sets_equal && symmetric && !accepted[0].empty();
  return {pass, std::to_string(accepted[0].size()) + " of " + std::to_string(points.size()) +
                    " points accepted; sets " + (sets_equal ? "equal" : "differ") +
                    ", octahedral symmetry " + (symmetric ? "holds" : "broken")};
}

// 10. A pure state makes the exact moment singular: strict comparison must
// refuse while the projected comparison stays finite, and the verification
// command documents the obstruction.
Outcome criterion_10() {
  const UnitaryEnsemble ico = icosahedral_design();
  const ComplexMatrix pure = density_from_point({0, 0, 1});
  const KrausChannel ch = make_channel(ChannelKind::BitFlip, 0.3);

  const EpsilonResult strict =
      epsilon_for_state(pure, 2, ico, ch, NoiseModel::Before, EpsilonMode::strict());
  const EpsilonResult projected =
      epsilon_for_state(pure, 2, ico, ch, NoiseModel::Before, EpsilonMode::support_projected());

  const std::filesystem::path log =
      std::filesystem::temp_directory_path() /
      ("tdnoise_acceptance_" + std::to_string(std::random_device{}()) + ".log");
  const std::string cmd = std::string(TDNOISE_CLI_PATH) + " verify > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  const bool verify_ok = status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  std::filesystem::remove(log);
  const bool documented = ss.str().find("strict mode at pure states") != std::string::npos;

  const bool pass = !strict.feasible && strict.kernel_residual > 1e-3 && projected.feasible &&
                    std::isfinite(projected.epsilon) && verify_ok && documented;
  return {pass, "strict infeasible with kernel residual " + fmt(strict.kernel_residual) +
                    ", projected epsilon " + fmt(projected.epsilon) +
                    (documented ? ", reported by the verify command" : ", verify line missing")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::array<std::function<Outcome()>, 10> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int number = std::atoi(argv[i]);
    if (number < 1 || number > 10) {
      std::fprintf(stderr, "usage: %s [criterion numbers 1..10]\n", argv[0]);
      return 2;
    }
    selected.push_back(number);
  }
  if (selected.empty())
    for (int i = 1; i <= 10; ++i) selected.push_back(i);

  bool all_pass = true;
  for (int number : selected) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome outcome = criteria[number - 1]();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %02d  %s  [%6.1fs]  %s\n", number, outcome.pass ? "pass" : "FAIL",
                seconds, outcome.detail.c_str());
    std::fflush(stdout);
    all_pass &= outcome.pass;
  }
  return all_pass ? 0 : 1;
}
