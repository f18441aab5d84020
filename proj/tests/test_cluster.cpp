#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "scatteq/cluster.hpp"
#include "scatteq/errors.hpp"

using namespace scatteq;

namespace {

SpacePtr toy_space(int n) {
  Eigen::ArrayXd mu(n);
  for (int i = 0; i < n; ++i) mu[i] = 0.5 + 0.1 * i;
  return Space::make("toy", mu);
}

Op random_op(SpacePtr s, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(s->dim(), s->dim());
  for (int i = 0; i < s->dim(); ++i)
    for (int j = 0; j < s->dim(); ++j) m(i, j) = cplx(g(rng), g(rng));
  return Op(s, std::move(m));
}

ClusterOperator random_family(int n_particles, SpacePtr s, std::mt19937& rng) {
  ClusterOperator c(n_particles, s);
  for (const auto& p : enumerate_partitions(n_particles))
    c.set(p, random_op(s, rng));
  return c;
}

}  // namespace

TEST_CASE("absent components are zero") {
  auto s = toy_space(5);
  ClusterOperator c(3, s);
  CHECK(c.find(Partition::parse("(12)(3)")) == nullptr);
  CHECK(c.component(Partition::parse("(12)(3)")).max_abs() == 0.0);
  CHECK(c.total().max_abs() == 0.0);
}

TEST_CASE("restriction sums refining components") {
  std::mt19937 rng(2);
  auto s = toy_space(6);
  const ClusterOperator c = random_family(3, s, rng);
  for (const auto& a : enumerate_partitions(3)) {
    Op expect = Op::zeros(s);
    for (const auto& b : enumerate_partitions(3))
      if (refines(b, a)) expect += c.component(b);
    CHECK(distance(c.restriction(a), expect) <= 1e-13 * expect.norm());
  }
  CHECK(distance(c.restriction(Partition::one_cluster(3)), c.total()) <=
        1e-13 * c.total().norm());
}

TEST_CASE("restriction of a restriction lands on the meet") {
  std::mt19937 rng(3);
  auto s = toy_space(5);
  for (int n : {3, 4}) {
    const ClusterOperator c = random_family(n, s, rng);
    for (const auto& a : enumerate_partitions(n))
      for (const auto& b : enumerate_partitions(n)) {
        Op nested = Op::zeros(s);  // sum of components refining both a and b
        for (const auto& d : enumerate_partitions(n))
          if (refines(d, a) && refines(d, b)) nested += c.component(d);
        CHECK(distance(nested, c.restriction(meet(a, b))) <=
              1e-12 * std::max(1.0, nested.norm()));
      }
  }
}

TEST_CASE("two connected-part routes agree") {
  std::mt19937 rng(5);
  auto s = toy_space(6);
  for (int n : {3, 4}) {
    const ClusterOperator c = random_family(n, s, rng);
    const Op via_coeff = c.connected_by_coefficients();
    const Op via_mobius = c.connected_by_mobius();
    CHECK(distance(via_coeff, via_mobius) <= 1e-12 * via_coeff.norm());
    // Both recover the stored top component.
    CHECK(distance(via_coeff, c.component(Partition::one_cluster(n))) <=
          1e-12 * via_coeff.norm());
  }
}

TEST_CASE("identity family has zero connected part") {
  auto s = toy_space(4);
  ClusterOperator c(3, s);
  c.set(Partition::n_cluster(3), Op::identity(s));
  // Restrictions are all I; the cluster sum rule wipes the connected part.
  CHECK(c.connected_by_coefficients().max_abs() <= 1e-14);
}

TEST_CASE("moebius round trip through restrictions, n <= 4") {
  std::mt19937 rng(7);
  auto s = toy_space(5);
  for (int n : {2, 3, 4}) {
    const ClusterOperator c = random_family(n, s, rng);
    std::map<Partition, Op> restr;
    for (const auto& a : enumerate_partitions(n)) restr.emplace(a, c.restriction(a));
    const ClusterOperator back = ClusterOperator::from_restrictions(n, s, restr);
    for (const auto& a : enumerate_partitions(n))
      CHECK(distance(back.component(a), c.component(a)) <=
            1e-13 * std::max(1.0, c.component(a).norm()));
  }
}

TEST_CASE("recovery refuses an incomplete restriction family") {
  std::mt19937 rng(11);
  auto s = toy_space(4);
  const ClusterOperator c = random_family(3, s, rng);
  std::map<Partition, Op> restr;
  for (const auto& a : enumerate_partitions(3)) restr.emplace(a, c.restriction(a));
  restr.erase(Partition::parse("(13)(2)"));
  CHECK_THROWS_AS(ClusterOperator::from_restrictions(3, s, restr),
                  IncompleteExpansionError);
}

TEST_CASE("product components convolve over joins") {
  std::mt19937 rng(13);
  auto s = toy_space(6);
  const ClusterOperator a = random_family(3, s, rng);
  const ClusterOperator b = random_family(3, s, rng);
  const ClusterOperator ab = product(a, b);
  // Direct join-convolution oracle.
  for (const auto& c : enumerate_partitions(3)) {
    Op expect = Op::zeros(s);
    for (const auto& pa : enumerate_partitions(3))
      for (const auto& pb : enumerate_partitions(3))
        if (join(pa, pb) == c) expect += compose(a.component(pa), b.component(pb));
    CHECK(distance(ab.component(c), expect) <= 1e-12 * std::max(1.0, expect.norm()));
  }
}

TEST_CASE("product restrictions factor exactly") {
  std::mt19937 rng(17);
  auto s = toy_space(7);
  for (int n : {3, 4}) {
    const ClusterOperator a = random_family(n, s, rng);
    const ClusterOperator b = random_family(n, s, rng);
    const ClusterOperator ab = product(a, b);
    for (const auto& p : enumerate_partitions(n)) {
      const Op lhs = ab.restriction(p);
      const Op rhs = compose(a.restriction(p), b.restriction(p));
      CHECK(distance(lhs, rhs) <= 1e-11 * std::max(1.0, rhs.norm()));
    }
    CHECK(distance(ab.total(), compose(a.total(), b.total())) <=
          1e-11 * ab.total().norm());
  }
}

TEST_CASE("wrong particle count is refused") {
  auto s = toy_space(4);
  ClusterOperator c(3, s);
  CHECK_THROWS_AS(c.set(Partition::parse("(12)(34)"), Op::zeros(s)), DomainError);
  CHECK_THROWS_AS(c.restriction(Partition::parse("(1)(2)")), DomainError);
}
