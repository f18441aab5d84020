#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace scatteq {

// Set partition of {1..n} in canonical form. Stored as a restricted growth
// string: rgs[i] is the block index of particle i+1, blocks numbered by first
// appearance, so rgs[0] == 0 and rgs[i] <= 1 + max(rgs[0..i-1]).
class Partition {
public:
  explicit Partition(std::vector<std::uint8_t> rgs);

  static Partition one_cluster(int n);  // coarsest: all particles together
  static Partition n_cluster(int n);    // finest: all singletons
  static Partition from_blocks(int n, const std::vector<std::vector<int>>& blocks);
  // Accepts "(125)(37)(46)" and the comma form "(1,2,5)(3,7)(4,6)" in any
  // block order; result is canonical.
  static Partition parse(std::string_view text);

  int n_particles() const { return static_cast<int>(rgs_.size()); }
  int n_clusters() const { return n_blocks_; }
  const std::vector<std::uint8_t>& rgs() const { return rgs_; }
  // Blocks sorted by least element, elements ascending, 1-based labels.
  std::vector<std::vector<int>> blocks() const;
  // Compact digit form for n <= 9, comma form for n >= 10.
  std::string str() const;

  bool is_top() const { return n_blocks_ == 1; }
  bool is_bottom() const { return n_blocks_ == n_particles(); }

  bool operator==(const Partition&) const = default;
  // Lexicographic on (n, rgs): within fixed n this is the enumeration order.
  std::strong_ordering operator<=>(const Partition& o) const;

private:
  std::vector<std::uint8_t> rgs_;
  int n_blocks_ = 0;
};

// a "refines" b: every block of a lies inside a block of b (a finer or equal).
bool refines(const Partition& a, const Partition& b);

// Finest common coarsening / coarsest common refinement.
Partition join(const Partition& a, const Partition& b);
Partition meet(const Partition& a, const Partition& b);

// Incidence function of the refinement order: 1 iff b refines a.
int zeta(const Partition& a, const Partition& b);

// Moebius function of the partition lattice, nonzero only when b refines a:
// (-1)^{n_a} prod_i (-1)^{n_i} (n_i - 1)! with n_i the number of blocks of b
// inside block i of a. Exact 64-bit integers (factorials up to 11!).
long long mobius(const Partition& a, const Partition& b);

// Cluster-expansion coefficient (-1)^{n_a} (n_a - 1)!.
long long cluster_coefficient(const Partition& a);

// All partitions of {1..n} in canonical order (lexicographic restricted
// growth strings): first the one-cluster partition, last the all-singleton
// partition. Capacity cap n <= 12.
std::vector<Partition> enumerate_partitions(int n);

long long bell_number(int n);

// Immutable per-n lattice: the enumeration plus a lazily filled Moebius table.
class LatticeTable {
public:
  explicit LatticeTable(int n);

  int n_particles() const { return n_; }
  const std::vector<Partition>& partitions() const { return parts_; }
  int size() const { return static_cast<int>(parts_.size()); }
  int index_of(const Partition& p) const;

  const Partition& top() const { return parts_.front(); }
  const Partition& bottom() const { return parts_.back(); }

  bool leq(int a_idx, int b_idx) const;       // partitions()[a] refines [b]
  long long mobius(int a_idx, int b_idx) const;
  long long coefficient(int a_idx) const { return coeff_[a_idx]; }

private:
  int n_;
  std::vector<Partition> parts_;
  std::vector<long long> coeff_;
  mutable std::map<std::pair<int, int>, long long> mobius_cache_;
};

}  // namespace scatteq
