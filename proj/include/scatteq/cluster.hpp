#pragma once

#include <map>

#include "scatteq/operator.hpp"
#include "scatteq/partition.hpp"

namespace scatteq {

// Partition-labeled family of operator components [A]_a on a shared space.
// Absent keys mean zero components; operations that genuinely require a
// complete family (Moebius inversion from restrictions) throw
// IncompleteExpansionError instead of guessing.
class ClusterOperator {
public:
  ClusterOperator(int n_particles, SpacePtr space);

  int n_particles() const { return n_; }
  SpacePtr space() const { return space_; }
  const std::map<Partition, Op>& components() const { return comps_; }

  void set(const Partition& a, Op component);
  const Op* find(const Partition& a) const;
  Op component(const Partition& a) const;  // zero when absent

  Op total() const;                         // sum of all components
  Op restriction(const Partition& a) const; // A_a = sum_{b refines a} [A]_b
  Op complement(const Partition& a) const;  // A - A_a

  // Connected part via coefficients: A - sum_{a != top} C_a A_a.
  Op connected_by_coefficients() const;
  // Connected part via Moebius inversion of restrictions: sum_b mu(top,b) A_b.
  Op connected_by_mobius() const;

  // Recover components from a complete family of restrictions
  // {a -> A_a for every partition a of n}: [A]_a = sum_{b refines a} mu(a,b) A_b.
  static ClusterOperator from_restrictions(int n_particles, SpacePtr space,
                                           const std::map<Partition, Op>& restrictions);

private:
  void check_partition(const Partition& a) const;

  int n_;
  SpacePtr space_;
  std::map<Partition, Op> comps_;
};

// Component family of the operator product: [AB]_c = sum_{join(a,b)=c} [A]_a [B]_b.
// Restrictions then factor exactly: (AB)_a = A_a B_a.
ClusterOperator product(const ClusterOperator& a, const ClusterOperator& b);

}  // namespace scatteq
