#include "scatteq/scattering.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scatteq/errors.hpp"

namespace scatteq {

TwoBodySystem TwoBodySystem::make(double mu, GridPtr grid, PotentialPtr pot) {
  if (!(mu > 0.0)) throw DomainError("reduced mass must be positive");
  if (!grid || !pot) throw DomainError("system needs a grid and a potential");
  Op v = pot->matrix(*grid);
  Op t = Op::diagonal(grid->space(), grid->nodes().square() / (2.0 * mu));
  return TwoBodySystem{mu, std::move(grid), std::move(pot), std::move(v),
                       std::move(t)};
}

namespace {

// On-shell K matrix element K(k0,k0) from the principal-value subtracted
// solve on grid nodes + the on-shell node.
cplx on_shell_k(const TwoBodySystem& sys, double k0) {
  const auto& k = sys.grid->nodes();
  const auto& w = sys.grid->weights();
  const int n = sys.grid->size();
  if (!(k0 > 0.0)) throw DomainError("on-shell momentum must be positive");
  if (k0 >= k[n - 1] * 0.999)
    throw ExtrapolationError("energy above grid coverage");
  for (int i = 0; i < n; ++i)
    if (std::abs(k0 - k[i]) < 1e-8 * (1.0 + k0))
      throw DomainError("on-shell momentum collides with a grid node");

  // Principal-value subtraction: effective weights u_j on grid nodes plus the
  // accumulated subtraction weight on the on-shell node.
  Eigen::VectorXd u(n + 1);
  double ssum = 0.0;
  for (int j = 0; j < n; ++j) {
    const double denom = k0 * k0 - k[j] * k[j];
    u[j] = 2.0 * sys.mu * w[j] * k[j] * k[j] / denom;
    ssum += w[j] / denom;
  }
  u[n] = -2.0 * sys.mu * k0 * k0 * ssum;

  Eigen::MatrixXcd v(n + 1, n + 1);
  auto node = [&](int i) { return i < n ? k[i] : k0; };
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) v(i, j) = sys.potential->eval(node(i), node(j));

  Eigen::MatrixXcd f = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) f.col(j) -= v.col(j) * u[j];
  Eigen::VectorXcd kcol = f.partialPivLu().solve(v.col(n));
  return kcol[n];
}

}  // namespace

std::vector<PhasePoint> phase_shifts(const TwoBodySystem& sys,
                                     std::vector<double> energies) {
  std::vector<int> order(energies.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return energies[a] < energies[b]; });

  std::vector<PhasePoint> out(energies.size());
  double shift = 0.0;
  double prev = 0.0;
  bool first = true;
  for (int idx : order) {
    const double e = energies[idx];
    if (!(e > 0.0)) throw DomainError("phase shifts need positive energies");
    const double k0 = std::sqrt(2.0 * sys.mu * e);
    const cplx kos = on_shell_k(sys, k0);
    const double t = -M_PI * sys.mu * k0 * std::real(kos);
    const double raw = std::atan(t);
    if (first) {
      first = false;
    } else {
      // continuity: move by multiples of pi toward the previous value
      shift += M_PI * std::round((prev - (raw + shift)) / M_PI);
    }
    const double fixed = raw + shift;
    prev = fixed;
    out[idx] = PhasePoint{e, k0, raw, fixed,
                          std::abs(std::imag(kos))};
  }
  return out;
}

std::vector<double> bound_state_energies(const TwoBodySystem& sys) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(sys.hamiltonian());
  std::vector<double> out;
  for (int i = 0; i < ev.size(); ++i)
    if (ev[i] < 0.0) out.push_back(ev[i]);
  std::sort(out.begin(), out.end());
  return out;
}

int levinson_count(const std::vector<PhasePoint>& ladder) {
  if (ladder.size() < 2) return 0;
  auto [lo, hi] = std::minmax_element(
      ladder.begin(), ladder.end(),
      [](const PhasePoint& a, const PhasePoint& b) { return a.energy < b.energy; });
  return static_cast<int>(std::lround((lo->delta - hi->delta) / M_PI));
}

std::vector<double> default_energies(const TwoBodySystem& sys, int count) {
  const double s2 = sys.grid->map_scale() * sys.grid->map_scale();
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    const double k2 = 0.01 * std::pow(10.0 / 0.01, f) * s2;
    out[i] = k2 / (2.0 * sys.mu);
  }
  return out;
}

EquivalenceReport certify_equivalence(const TwoBodySystem& before,
                                      const TwoBodySystem& after,
                                      const std::vector<double>& energies,
                                      double tol_phase, double tol_bind) {
  if (!(before.mu == after.mu))
    throw DomainError("systems must share the reduced mass");
  check_same_space(*before.grid->space(), *after.grid->space());

  EquivalenceReport rep;
  rep.energies = energies;
  rep.tol_phase = tol_phase;
  rep.tol_bind = tol_bind;

  const auto pb = phase_shifts(before, energies);
  const auto pa = phase_shifts(after, energies);
  for (std::size_t i = 0; i < pb.size(); ++i) {
    rep.delta_before.push_back(pb[i].delta);
    rep.delta_after.push_back(pa[i].delta);
    rep.max_phase_dev =
        std::max(rep.max_phase_dev, std::abs(pb[i].delta - pa[i].delta));
  }

  rep.bound_before = bound_state_energies(before);
  rep.bound_after = bound_state_energies(after);
  if (rep.bound_before.size() != rep.bound_after.size()) {
    rep.max_bind_dev = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t i = 0; i < rep.bound_before.size(); ++i) {
      const double denom = std::abs(rep.bound_before[i]);
      rep.max_bind_dev = std::max(
          rep.max_bind_dev,
          std::abs(rep.bound_after[i] - rep.bound_before[i]) / denom);
    }
  }

  rep.verdict = rep.max_phase_dev <= tol_phase && rep.max_bind_dev <= tol_bind;
  return rep;
}

}  // namespace scatteq
