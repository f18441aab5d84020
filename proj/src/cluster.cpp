#include "scatteq/cluster.hpp"

#include "scatteq/errors.hpp"

namespace scatteq {

ClusterOperator::ClusterOperator(int n_particles, SpacePtr space)
    : n_(n_particles), space_(std::move(space)) {
  if (n_ < 1) throw DomainError("particle count must be positive");
  if (!space_) throw SpaceMismatchError("cluster operator without a space");
}

void ClusterOperator::check_partition(const Partition& a) const {
  if (a.n_particles() != n_)
    throw DomainError("partition of wrong particle count");
}

void ClusterOperator::set(const Partition& a, Op component) {
  check_partition(a);
  check_same_space(*space_, *component.space());
  comps_.insert_or_assign(a, std::move(component));
}

const Op* ClusterOperator::find(const Partition& a) const {
  auto it = comps_.find(a);
  return it == comps_.end() ? nullptr : &it->second;
}

Op ClusterOperator::component(const Partition& a) const {
  check_partition(a);
  if (const Op* c = find(a)) return *c;
  return Op::zeros(space_);
}

Op ClusterOperator::total() const {
  Op acc = Op::zeros(space_);
  for (const auto& [p, c] : comps_) acc += c;
  return acc;
}

Op ClusterOperator::restriction(const Partition& a) const {
  check_partition(a);
  Op acc = Op::zeros(space_);
  for (const auto& [b, c] : comps_)
    if (refines(b, a)) acc += c;
  return acc;
}

Op ClusterOperator::complement(const Partition& a) const {
  return total() - restriction(a);
}

Op ClusterOperator::connected_by_coefficients() const {
  Op acc = total();
  for (const auto& a : enumerate_partitions(n_)) {
    if (a.is_top()) continue;
    acc -= cplx(static_cast<double>(cluster_coefficient(a)), 0.0) * restriction(a);
  }
  return acc;
}

Op ClusterOperator::connected_by_mobius() const {
  const Partition top = Partition::one_cluster(n_);
  Op acc = Op::zeros(space_);
  for (const auto& b : enumerate_partitions(n_)) {
    const long long m = mobius(top, b);
    if (m == 0) continue;
    acc += cplx(static_cast<double>(m), 0.0) * restriction(b);
  }
  return acc;
}

ClusterOperator ClusterOperator::from_restrictions(
    int n_particles, SpacePtr space, const std::map<Partition, Op>& restrictions) {
  const auto parts = enumerate_partitions(n_particles);
  for (const auto& p : parts)
    if (!restrictions.contains(p))
      throw IncompleteExpansionError("restriction family missing " + p.str());
  ClusterOperator out(n_particles, space);
  for (const auto& a : parts) {
    Op acc = Op::zeros(space);
    for (const auto& b : parts) {
      const long long m = mobius(a, b);
      if (m == 0) continue;
      acc += cplx(static_cast<double>(m), 0.0) * restrictions.at(b);
    }
    out.set(a, std::move(acc));
  }
  return out;
}

ClusterOperator product(const ClusterOperator& a, const ClusterOperator& b) {
  if (a.n_particles() != b.n_particles())
    throw DomainError("cluster operators of different particle counts");
  check_same_space(*a.space(), *b.space());
  ClusterOperator out(a.n_particles(), a.space());
  for (const auto& [pa, ca] : a.components()) {
    for (const auto& [pb, cb] : b.components()) {
      const Partition j = join(pa, pb);
      Op term = compose(ca, cb);
      if (const Op* existing = out.find(j))
        out.set(j, *existing + term);
      else
        out.set(j, std::move(term));
    }
  }
  return out;
}

}  // namespace scatteq
