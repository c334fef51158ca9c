#include "tdnoise/designs.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace tdnoise {

namespace {

constexpr double kClosureTol = 1e-9;
constexpr std::uint64_t kOrderSeed = 0xD351C0DEull;

const Complex kI(0.0, 1.0);

Matrix2 pauli_x() { return (Matrix2() << 0, 1, 1, 0).finished(); }
Matrix2 pauli_y() { return (Matrix2() << 0, -kI, kI, 0).finished(); }
Matrix2 pauli_z() { return (Matrix2() << 1, 0, 0, -1).finished(); }

bool close_2x2(const Matrix2& a, const Matrix2& b) {
  return (a - b).cwiseAbs().maxCoeff() < kClosureTol;
}

// Scales so the first entry (row-major) with magnitude above tolerance is
// real positive. Collapses the global phase of projective group elements.
Matrix2 canonical_phase(const Matrix2& m) {
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Complex e = m(i, j);
      if (std::abs(e) > kClosureTol) return m * (std::conj(e) / std::abs(e));
    }
  throw std::logic_error("canonical_phase: zero matrix");
}

Matrix2 normalize_det(const Matrix2& m) {
  return m / std::sqrt(m.determinant());
}

// Multiplicative closure from generators under a canonicalization map.
// Throws if the closure does not settle at expected_order elements.
std::vector<Matrix2> close_group(const std::vector<Matrix2>& generators,
                                 Matrix2 (*canonicalize)(const Matrix2&),
                                 std::size_t expected_order) {
  std::vector<Matrix2> elements{canonicalize(Matrix2::Identity())};
  const std::size_t bound = 4 * expected_order;
  for (std::size_t next = 0; next < elements.size(); ++next) {
    if (elements.size() > bound) break;
    for (const Matrix2& g : generators) {
      const Matrix2 candidate = canonicalize(elements[next] * g);
      bool known = false;
      for (const Matrix2& e : elements)
        if (close_2x2(candidate, e)) {
          known = true;
          break;
        }
      if (!known) elements.push_back(candidate);
    }
  }
  if (elements.size() != expected_order)
    throw std::logic_error("group closure reached " + std::to_string(elements.size()) +
                           " elements, expected " + std::to_string(expected_order));
  return elements;
}

UnitaryEnsemble uniform_ensemble(std::vector<Matrix2> elements, std::string label) {
  UnitaryEnsemble ens;
  ens.label = std::move(label);
  const double w = 1.0 / static_cast<double>(elements.size());
  ens.elements.reserve(elements.size());
  for (Matrix2& u : elements) ens.elements.push_back({w, std::move(u)});
  return ens;
}

// SU(2) image of the unit quaternion w + xi + yj + zk.
Matrix2 quaternion_to_su2(double w, double x, double y, double z) {
  Matrix2 m;
  m << Complex(w, x), Complex(y, z), Complex(-y, z), Complex(w, -x);
  return m;
}

// ---- Haar quadrature ----------------------------------------------------

// Rz(angle)^(x)t conjugation applied as per-basis-state phases; basis state
// j carries the z-weight t - 2 popcount(j).
ComplexMatrix conjugated_by_rz(const ComplexMatrix& m, double angle, int t) {
  const long dim = 1L << t;
  Eigen::VectorXcd phases(dim);
  for (long j = 0; j < dim; ++j) {
    const int weight = t - 2 * std::popcount(static_cast<unsigned long>(j));
    phases(j) = std::polar(1.0, -0.5 * angle * weight);
  }
  return phases.asDiagonal() * m * phases.conjugate().asDiagonal();
}

ComplexMatrix average_over_rz(const ComplexMatrix& m, int t, int nodes) {
  ComplexMatrix acc = ComplexMatrix::Zero(m.rows(), m.cols());
  for (int k = 0; k < nodes; ++k)
    acc += conjugated_by_rz(m, 2.0 * std::numbers::pi * k / nodes, t);
  return acc / nodes;
}

struct BetaRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Midpoint nodes on [0, pi] with weights solved to match the moments of
// cos(m b) and sin(m b), m <= t, against the measure sin(b)/2 db. The
// integrand at order t only contains harmonics up to t, so the 2t+1
// moment conditions are an underdetermined system for n = 2(t+1) weights
// and the minimum-norm solution satisfies them exactly.
BetaRule beta_rule(int t) {
  const int n = 2 * (t + 1);
  BetaRule rule;
  rule.nodes.resize(n);
  for (int j = 0; j < n; ++j) rule.nodes[j] = (j + 0.5) * std::numbers::pi / n;

  Eigen::MatrixXd basis(2 * t + 1, n);
  Eigen::VectorXd moments(2 * t + 1);
  for (int m = 0; m <= t; ++m) {
    for (int j = 0; j < n; ++j) basis(m, j) = std::cos(m * rule.nodes[j]);
    moments(m) = (m % 2 == 0) ? 1.0 / (1.0 - static_cast<double>(m) * m) : 0.0;
  }
  for (int m = 1; m <= t; ++m) {
    for (int j = 0; j < n; ++j) basis(t + m, j) = std::sin(m * rule.nodes[j]);
    moments(t + m) = (m == 1) ? std::numbers::pi / 4.0 : 0.0;
  }
  Eigen::VectorXd w = basis.completeOrthogonalDecomposition().solve(moments);
  const double residual = (basis * w - moments).cwiseAbs().maxCoeff();
  if (residual > 1e-12)
    throw std::logic_error("beta_rule: moment system residual " + std::to_string(residual));
  rule.weights.assign(w.data(), w.data() + n);
  return rule;
}

Matrix2 ry(double beta) {
  const double c = std::cos(beta / 2), s = std::sin(beta / 2);
  return (Matrix2() << c, -s, s, c).finished();
}

// ---- fixed-seed test matrices -------------------------------------------

double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ComplexMatrix random_hermitian(std::mt19937_64& rng, long dim) {
  ComplexMatrix r(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j)
      r(i, j) = Complex(2.0 * unit_double(rng) - 1.0, 2.0 * unit_double(rng) - 1.0);
  return r + r.adjoint();
}

}  // namespace

void validate_ensemble(const UnitaryEnsemble& ens) {
  if (ens.elements.empty()) throw std::invalid_argument("ensemble: no elements");
  double total = 0.0;
  for (const auto& [weight, u] : ens.elements) {
    if (weight <= 0.0) throw std::invalid_argument("ensemble: weights must be strictly positive");
    total += weight;
    const double defect = (u.adjoint() * u - Matrix2::Identity()).norm();
    if (defect > 1e-12)
      throw std::invalid_argument("ensemble: element not unitary, ||U^dag U - I||_F = " +
                                  std::to_string(defect));
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("ensemble: weights sum to " + std::to_string(total));
}

UnitaryEnsemble pauli_design() {
  return uniform_ensemble({Matrix2::Identity(), pauli_x(), pauli_y(), pauli_z()}, "pauli");
}

UnitaryEnsemble clifford_design() {
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  Matrix2 hadamard;
  hadamard << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;
  Matrix2 phase;
  phase << 1, 0, 0, kI;
  return uniform_ensemble(close_group({hadamard, phase}, canonical_phase, 24), "clifford");
}

UnitaryEnsemble icosahedral_design() {
  const double phi = std::numbers::phi;
  const Matrix2 g1 = quaternion_to_su2(0.5, 0.5, 0.5, 0.5);
  const Matrix2 g2 = quaternion_to_su2(0.5 * phi, 0.5 / phi, 0.5, 0.0);
  return uniform_ensemble(close_group({g1, g2}, normalize_det, 120), "icosahedral");
}

ComplexMatrix design_moment(const UnitaryEnsemble& ens, const ComplexMatrix& m, int t) {
  const long dim = 1L << t;
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("design_moment: M must have dim 2^t");
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  for (const auto& [weight, u] : ens.elements)
    acc += weight * conjugate_tensor_power(m, u, t);
  return acc;
}

ComplexMatrix design_moment_product(const UnitaryEnsemble& ens, const Matrix2& sigma, int t) {
  if (t < 1) throw std::invalid_argument("design_moment_product: t must be >= 1");
  const long dim = 1L << t;
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix cur(dim, dim), next(dim, dim);
  for (const auto& [weight, u] : ens.elements) {
    const Matrix2 rotated = u * sigma * u.adjoint();
    cur.topLeftCorner(2, 2) = rotated;
    long cur_dim = 2;
    for (int k = 1; k < t; ++k) {
      for (long i = 0; i < cur_dim; ++i)
        for (long j = 0; j < cur_dim; ++j)
          next.block(2 * i, 2 * j, 2, 2) = cur(i, j) * rotated;
      cur_dim *= 2;
      std::swap(cur, next);
    }
    acc += weight * cur;
  }
  return acc;
}

ComplexMatrix haar_moment_oracle(const ComplexMatrix& m, int t) {
  if (t < 1 || t > 6) throw std::invalid_argument("haar_moment_oracle: t must be in 1..6");
  const long dim = 1L << t;
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("haar_moment_oracle: M must have dim 2^t");
  const int nodes = 2 * (t + 1);

  ComplexMatrix stage = average_over_rz(m, t, nodes);

  const BetaRule rule = beta_rule(t);
  ComplexMatrix mixed = ComplexMatrix::Zero(dim, dim);
  for (int j = 0; j < nodes; ++j)
    mixed += rule.weights[j] * conjugate_tensor_power(stage, ry(rule.nodes[j]), t);

  return average_over_rz(mixed, t, nodes);
}

int verify_design_order(const UnitaryEnsemble& ens, int t_max) {
  if (t_max < 1 || t_max > 6) throw std::invalid_argument("verify_design_order: t_max must be in 1..6");
  int certified = 0;
  for (int t = 1; t <= t_max; ++t) {
    std::mt19937_64 rng(kOrderSeed + static_cast<std::uint64_t>(t));
    bool all_pass = true;
    for (int trial = 0; trial < 50; ++trial) {
      const ComplexMatrix test = random_hermitian(rng, 1L << t);
      const double deviation = (design_moment(ens, test, t) - haar_moment_oracle(test, t)).norm();
      if (deviation > 1e-10 * test.norm()) {
        all_pass = false;
        break;
      }
    }
    if (!all_pass) break;
    certified = t;
  }
  return certified;
}

double design_order_deviation(const UnitaryEnsemble& ens, int t) {
  std::mt19937_64 rng(kOrderSeed + static_cast<std::uint64_t>(t));
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix test = random_hermitian(rng, 1L << t);
    const double deviation = (design_moment(ens, test, t) - haar_moment_oracle(test, t)).norm();
    worst = std::max(worst, deviation / test.norm());
  }
  return worst;
}

void save_ensemble(const UnitaryEnsemble& ens, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_ensemble: cannot open " + path.string());
  char buf[64];
  for (const auto& [weight, u] : ens.elements) {
    std::string line;
    const auto append = [&](double v, bool first) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      if (!first) line += ',';
      line += buf;
    };
    append(weight, true);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        append(u(i, j).real(), false);
        append(u(i, j).imag(), false);
      }
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("save_ensemble: write failed for " + path.string());
}

UnitaryEnsemble load_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_ensemble: cannot open " + path.string());
  UnitaryEnsemble ens;
  ens.label = path.stem().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    double values[9];
    std::string field;
    for (int k = 0; k < 9; ++k) {
      if (!std::getline(fields, field, ','))
        throw std::runtime_error("load_ensemble: line " + std::to_string(line_no) +
                                 " has fewer than 9 fields");
      std::size_t used = 0;
      values[k] = std::stod(field, &used);
    }
    if (std::getline(fields, field, ','))
      throw std::runtime_error("load_ensemble: line " + std::to_string(line_no) +
                               " has more than 9 fields");
    Matrix2 u;
    u << Complex(values[1], values[2]), Complex(values[3], values[4]),
        Complex(values[5], values[6]), Complex(values[7], values[8]);
    ens.elements.push_back({values[0], u});
  }
  if (ens.elements.empty()) throw std::runtime_error("load_ensemble: no elements in " + path.string());
  return ens;
}

}  // namespace tdnoise
