#pragma once

#include "scatteq/cayley.hpp"
#include "scatteq/operator.hpp"

namespace scatteq {

// Desk-scale three-body model space: tensor product of a pair-momentum grid
// and a spectator-momentum grid, s-waves in both slots, product measure.
// Flat index = pair_index * n_spectator + spectator_index.
class TensorSpace {
public:
  TensorSpace(GridPtr pair_grid, GridPtr spectator_grid);

  GridPtr pair_grid() const { return pair_; }
  GridPtr spectator_grid() const { return spec_; }
  SpacePtr space() const { return space_; }
  int dim() const { return space_->dim(); }
  int index(int ip, int is) const { return ip * spec_->size() + is; }

  // Two-body operator acting in the pair slot, identity on the spectator.
  Op embed_pair(const Op& pair_op) const;
  // Operator acting on the spectator slot, identity on the pair.
  Op embed_spectator(const Op& spec_op) const;
  // Product vector f(k) h(q).
  Vec product_vec(const Vec& pair_v, const Vec& spec_v) const;

  // Kinetic energy k^2/(2 mu_pair) + q^2/(2 mu_spectator).
  Op kinetic(double mu_pair, double mu_spectator) const;

  // Rank-one channels of a pair-slot generator lambda |g><g| (x) I_spectator:
  // one channel per spectator node, u_j(k,q) = g(k) delta_{q,q_j}/sqrt(mu_q_j).
  // For unit-norm g the family is orthonormal and sums to the embedded
  // projector.
  std::vector<Channel> pair_rank_one_channels(double lambda, const Vec& pair_g) const;
  // Mirror image for a spectator-slot generator.
  std::vector<Channel> spectator_rank_one_channels(double lambda, const Vec& spec_g) const;

private:
  GridPtr pair_, spec_;
  SpacePtr space_;
};

// Three equal two-cluster generator components sharing one pair-slot
// realization plus an optional connected component: the symmetric-boson
// construction. Partitions used: (12)(3), (13)(2), (1)(23) and (123).
GeneratorSpec symmetric_boson_generator(const TensorSpace& ts, double lambda_pair,
                                        const Vec& pair_g, double lambda_conn,
                                        const Vec& conn_vec);

}  // namespace scatteq
