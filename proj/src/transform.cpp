#include "scatteq/transform.hpp"

#include <cmath>

#include "scatteq/errors.hpp"

namespace scatteq {

namespace {
constexpr cplx kI{0.0, 1.0};
}

Op conjugate(const Op& o, const Op& a, double unitarity_tol) {
  check_same_space(*o.space(), *a.space());
  const double res = unitarity_residual(a);
  if (res > unitarity_tol)
    throw NotUnitaryError("conjugation refused: transform fails unitarity", res);
  return compose(a.adjoint(), o, a);
}

TwoBodyTransform transformed_two_body(const Op& v, const Op& t, double lambda,
                                      const Vec& g) {
  check_same_space(*v.space(), *t.space());
  check_same_space(*v.space(), *g.space());
  const RankOneCayley rc = cayley_rank_one(lambda, g);
  const Op h = v + t;
  const Vec hg = h.apply(g);
  const cplx a6 = inner(g, hg);
  Op vp = v + Op::rank_one(std::conj(rc.f), g, hg) + Op::rank_one(rc.f, hg, g) +
          Op::rank_one(std::norm(rc.f) * a6, g, g);
  return TwoBodyTransform{lambda, rc.f, g, std::move(vp)};
}

TransformedPotential::TransformedPotential(PotentialPtr base, GridPtr grid,
                                           double mu, double lambda, FormFactor gff)
    : base_(std::move(base)), grid_(std::move(grid)), mu_(mu), gff_(gff) {
  if (!base_ || !grid_) throw DomainError("transformed potential needs base and grid");
  if (!(mu_ > 0.0)) throw DomainError("reduced mass must be positive");
  const Vec g = gff_.on_grid(*grid_);
  f_ = cayley_rank_one(lambda, g).f;
  cplx acc = 0.0;
  for (int i = 0; i < grid_->size(); ++i)
    acc += grid_->space()->measure[i] * g_of(grid_->nodes()[i]) *
           h_of(grid_->nodes()[i]);
  a6_ = std::real(acc);  // <g|H|g> real for Hermitian H
}

cplx TransformedPotential::h_of(double k) const {
  cplx acc = k * k / (2.0 * mu_) * g_of(k);
  for (int j = 0; j < grid_->size(); ++j)
    acc += grid_->space()->measure[j] * base_->eval(k, grid_->nodes()[j]) *
           g_of(grid_->nodes()[j]);
  return acc;
}

cplx TransformedPotential::eval(double k, double kp) const {
  const double gk = g_of(k), gkp = g_of(kp);
  const cplx hk = h_of(k), hkp = h_of(kp);
  return base_->eval(k, kp) + std::conj(f_ * hkp) * gk + f_ * hk * gkp +
         std::norm(f_) * a6_ * gk * gkp;
}

TwoBodySystem transformed_system(const TwoBodySystem& sys, double lambda,
                                 const FormFactor& gff) {
  auto pot = std::make_shared<TransformedPotential>(sys.potential, sys.grid,
                                                    sys.mu, lambda, gff);
  return TwoBodySystem::make(sys.mu, sys.grid, std::move(pot));
}

std::map<Partition, Op> transformed_cluster_potentials(const ClusterOperator& h,
                                                       const GeneratorSpec& gen) {
  if (h.n_particles() != gen.n_particles())
    throw DomainError("Hamiltonian and generator particle counts differ");
  check_same_space(*h.space(), *gen.space());
  const Partition bottom = Partition::n_cluster(h.n_particles());
  const Op t = h.component(bottom);
  std::map<Partition, Op> out;
  for (const auto& a : enumerate_partitions(h.n_particles())) {
    if (a.is_top() || a.is_bottom()) continue;
    const Op h_a = t + h.component(a);
    const Op r_a = subsystem_resolvent(gen, a);
    const Op a_a = r_a - kI * compose(gen.restricted(a), r_a);
    out.emplace(a, compose(a_a.adjoint(), h_a, a_a) - t);
  }
  return out;
}

Op induced_connected_mobius(const ClusterOperator& h, const GeneratorSpec& gen) {
  if (h.n_particles() != gen.n_particles())
    throw DomainError("Hamiltonian and generator particle counts differ");
  check_same_space(*h.space(), *gen.space());
  const Op htot = h.total();
  const Op a_full = assemble_A(gen, solve_R(gen).r);
  Op acc = compose(a_full.adjoint(), htot, a_full);
  for (const auto& a : enumerate_partitions(h.n_particles())) {
    if (a.is_top()) continue;
    const double c = static_cast<double>(cluster_coefficient(a));
    const Op h_a = h.restriction(a);
    const Op r_a = subsystem_resolvent(gen, a);
    const Op a_a = r_a - kI * compose(gen.restricted(a), r_a);
    acc -= cplx(c, 0.0) * compose(a_a.adjoint(), h_a, a_a);
  }
  return acc;
}

Op induced_connected_assembly(const ClusterOperator& h, const GeneratorSpec& gen) {
  if (h.n_particles() != 3)
    throw DomainError("term-by-term assembly is the N=3 construction");
  check_same_space(*h.space(), *gen.space());

  const auto parts = enumerate_partitions(3);
  std::vector<Partition> twos;
  for (const auto& p : parts)
    if (!p.is_top() && !p.is_bottom()) twos.push_back(p);

  const Op t = h.component(Partition::n_cluster(3));
  const Op v123 = h.component(Partition::one_cluster(3));
  const Op htot = h.total();

  const ClusterOperator acomp = cayley_components(gen);
  const Op a_full = acomp.total();
  const Op c_conn = acomp.component(Partition::one_cluster(3));

  Op acc = compose(c_conn.adjoint(), htot, a_full);
  for (const auto& a : twos) {
    const Op& va = h.component(a);
    Op others = c_conn;
    Op wa = v123;
    for (const auto& b : twos) {
      if (b == a) continue;
      others += acomp.component(b);
      wa += h.component(b);
    }
    acc += compose(acomp.component(a).adjoint(),
                   compose(t + va, others) + compose(wa, a_full));
    acc += compose(va, others);
  }
  acc += compose(t, c_conn) + compose(v123, a_full);
  return acc;
}

IndependenceSweep two_body_independence(const ClusterOperator& h,
                                        const GeneratorSpec& gen,
                                        const Partition& connected,
                                        const std::vector<double>& factors) {
  IndependenceSweep out;
  out.factors = factors;
  std::map<Partition, Op> reference;
  double scale = 0.0;
  for (double fac : factors) {
    const GeneratorSpec swept = gen.with_scaled_component(connected, fac);
    const auto vps = transformed_cluster_potentials(h, swept);
    out.v123_norms.push_back(induced_connected_mobius(h, swept).norm());
    if (reference.empty()) {
      reference = vps;
      for (const auto& [p, v] : vps) scale = std::max(scale, v.max_abs());
    } else {
      for (const auto& [p, v] : vps)
        out.max_two_cluster_drift =
            std::max(out.max_two_cluster_drift,
                     (v - reference.at(p)).max_abs());
    }
  }
  out.two_body_independent =
      out.max_two_cluster_drift <= 1e-12 * std::max(1.0, scale);
  for (std::size_t i = 0; i < out.v123_norms.size(); ++i)
    for (std::size_t j = i + 1; j < out.v123_norms.size(); ++j)
      if (std::abs(out.v123_norms[i] - out.v123_norms[j]) > 1e-6)
        out.three_body_varies = true;
  return out;
}

}  // namespace scatteq
