#pragma once

#include <map>
#include <vector>

#include "scatteq/cluster.hpp"
#include "scatteq/operator.hpp"
#include "scatteq/partition.hpp"

namespace scatteq {

// One rank-one channel of a generator component: strength lambda (real, so
// the component is Hermitian) times |xi><xi|.
struct Channel {
  double lambda;
  Vec xi;
};

// Hermitian finite-rank generator with a cluster expansion: for each
// partition a, [Gamma]_a = sum_n lambda_{an} |xi_{an}><xi_{an}|. Channel
// vectors are orthonormalized per partition at construction (modified
// Gram-Schmidt in the measure inner product); strengths stay as given.
class GeneratorSpec {
public:
  GeneratorSpec(int n_particles, SpacePtr space,
                std::map<Partition, std::vector<Channel>> components);

  int n_particles() const { return n_; }
  SpacePtr space() const { return space_; }
  const std::map<Partition, std::vector<Channel>>& components() const {
    return comps_;
  }
  // Channels dropped as linearly dependent during orthonormalization.
  int dropped_channels() const { return dropped_; }

  Op component_op(const Partition& a) const;       // [Gamma]_a
  Op restricted(const Partition& a) const;         // Gamma_a = sum_{b refines a}
  Op complement_op(const Partition& a) const;      // Gamma^a = Gamma - Gamma_a
  Op gamma() const;                                // full Gamma
  ClusterOperator cluster_components() const;      // the [Gamma]_a family

  // Channels of Gamma_a pooled across the sub-lattice below a.
  std::vector<Channel> pooled_channels(const Partition& a) const;

  GeneratorSpec with_scaled_component(const Partition& a, double factor) const;

private:
  int n_;
  SpacePtr space_;
  std::map<Partition, std::vector<Channel>> comps_;
  int dropped_ = 0;
};

// Dense Cayley transform A = (I - i Gamma)(I + i Gamma)^{-1}.
// Gamma must pass its Hermiticity gate.
Op cayley(const Op& gamma);

// ||A^dag A - I|| in the weighted operator norm.
double unitarity_residual(const Op& a);

// Closed-form rank-one Cayley data: for Gamma = lambda |g><g|,
// A = I + f |g><g| with f = -2 i lambda / (1 + i lambda <g|g>).
struct RankOneCayley {
  cplx f;
  double gram;       // <g|g>
  bool degenerate;   // zero-norm g: A = I
};
RankOneCayley cayley_rank_one(double lambda, const Vec& g);
Op rank_one_matrix(const RankOneCayley& r, const Vec& g);

// (I + i Gamma_channels)^{-1} through the finite-rank Woodbury form
// R = I - i U S U^dag with S = Lambda (I + i G Lambda)^{-1}, G the channel
// Gram matrix. Channels need not be orthonormal.
Op finite_rank_resolvent(SpacePtr space, const std::vector<Channel>& channels);

struct ResolventDiagnostics {
  int system_dim = 0;          // projected linear system size (channel count)
  double condition = 1.0;      // condition estimate of (I - G)
  double residual = 0.0;       // ||(I + i Gamma) R - I|| weighted
  bool ill_conditioned = false;
};

struct ResolventResult {
  Op r;
  ResolventDiagnostics diag;
};

// Solve the N-body resolvent equation
//   R = sum_{a != top} C_a R_a - i sum_{a != top} C_a R_a Gamma^a R
// by grouping the finite-rank kernel by channel: R = D + sum_m |P_m> y_m with
// the rows y_m = <xi_m| R solving the projected M x M system. Never inverts a
// full-dimension system; the dense inverse stays an oracle.
ResolventResult solve_R(const GeneratorSpec& spec);

// Subsystem resolvent R_a = (I + i Gamma_a)^{-1}, finite-rank path.
Op subsystem_resolvent(const GeneratorSpec& spec, const Partition& a);

// A = (I - i Gamma) R.
Op assemble_A(const GeneratorSpec& spec, const Op& r);

// Cluster components of A: [A]_bottom = I, and for each partition a with
// generator content, [A]_a by Moebius inversion over the family of subsystem
// Cayley transforms A_a = (I - i Gamma_a) R_a.
ClusterOperator cayley_components(const GeneratorSpec& spec);

}  // namespace scatteq
