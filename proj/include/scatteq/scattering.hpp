#pragma once

#include <optional>
#include <vector>

#include "scatteq/operator.hpp"
#include "scatteq/potential.hpp"

namespace scatteq {

struct TwoBodySystem {
  double mu;                 // reduced mass, hbar = 1
  GridPtr grid;
  PotentialPtr potential;    // evaluable off-grid (on-shell node)
  Op vmat;                   // cached potential matrix on the grid
  Op kinetic;                // diagonal k^2 / (2 mu)

  static TwoBodySystem make(double mu, GridPtr grid, PotentialPtr pot);
  Op hamiltonian() const { return kinetic + vmat; }
};

struct PhasePoint {
  double energy;
  double k0;         // on-shell momentum
  double delta_raw;  // principal-branch atan of the on-shell K matrix
  double delta;      // branch-fixed by continuity from the lowest energy
  double ktail;      // |Im K(k0,k0)| (should vanish for Hermitian V)
};

// Partial-wave phase shifts by the principal-value subtracted K-matrix solve
// on the grid plus one on-shell node. Energies need not be sorted; branch
// continuity is applied in ascending energy order.
std::vector<PhasePoint> phase_shifts(const TwoBodySystem& sys,
                                     std::vector<double> energies);

// Negative eigenvalues of the discretized H, ascending.
std::vector<double> bound_state_energies(const TwoBodySystem& sys);

// round((delta_first - delta_last)/pi) over an ascending-energy ladder:
// with the ladder anchored near threshold this recovers the bound-state count.
int levinson_count(const std::vector<PhasePoint>& ladder);

// 20 log-spaced energies with k0^2 spanning [0.01, 10] * map_scale^2.
std::vector<double> default_energies(const TwoBodySystem& sys, int count = 20);

struct EquivalenceReport {
  std::vector<double> energies;
  std::vector<double> delta_before, delta_after;
  std::vector<double> bound_before, bound_after;
  double max_phase_dev = 0.0;
  double max_bind_dev = 0.0;  // relative
  double tol_phase, tol_bind;
  bool verdict = false;
};

EquivalenceReport certify_equivalence(const TwoBodySystem& before,
                                      const TwoBodySystem& after,
                                      const std::vector<double>& energies,
                                      double tol_phase = 1e-6,
                                      double tol_bind = 1e-8);

}  // namespace scatteq
