#include "scatteq/cayley.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <limits>

#include "scatteq/errors.hpp"

namespace scatteq {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_hermitian(const Op& gamma) {
  const double res = gamma.hermiticity_residual();
  if (res > 1e-12 * std::max(gamma.max_abs(), 1e-300))
    throw DomainError("generator fails its Hermiticity gate");
}

// Dressed (orthonormal-basis) matrix of the finite-rank resolvent
// (I + i sum lambda_j |u_j><u_j|)^{-1} = I - i U S U^dag.
Eigen::MatrixXcd resolvent_dressed(const Space& space,
                                   const std::vector<Channel>& channels) {
  const int n = space.dim();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(n, n);
  const int m = static_cast<int>(channels.size());
  if (m == 0) return r;
  Eigen::MatrixXcd u(n, m);
  Eigen::VectorXcd lam(m);
  for (int j = 0; j < m; ++j) {
    u.col(j) =
        channels[j].xi.values().array() * space.sqrt_measure.cast<cplx>();
    lam[j] = channels[j].lambda;
  }
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  Eigen::MatrixXcd small =
      Eigen::MatrixXcd::Identity(m, m) + kI * gram * lam.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(small);
  const Eigen::MatrixXcd s = lam.asDiagonal() * lu.solve(Eigen::MatrixXcd::Identity(m, m));
  r.noalias() -= kI * u * s * u.adjoint();
  return r;
}

}  // namespace

GeneratorSpec::GeneratorSpec(int n_particles, SpacePtr space,
                             std::map<Partition, std::vector<Channel>> components)
    : n_(n_particles), space_(std::move(space)) {
  if (n_ < 1) throw DomainError("particle count must be positive");
  if (!space_) throw SpaceMismatchError("generator without a space");
  for (auto& [p, chans] : components) {
    if (p.n_particles() != n_)
      throw DomainError("generator component for partition of wrong size");
    // Modified Gram-Schmidt per component in the measure inner product.
    std::vector<Channel> kept;
    for (auto& c : chans) {
      check_same_space(*space_, *c.xi.space());
      Eigen::VectorXcd v = c.xi.values();
      const double orig = norm(Vec(space_, v));
      if (!(orig > 0.0)) {
        ++dropped_;
        continue;
      }
      for (const auto& u : kept) {
        const cplx proj = inner(u.xi, Vec(space_, v));
        v -= proj * u.xi.values();
      }
      const double rem = norm(Vec(space_, v));
      if (rem < 1e-10 * orig) {
        ++dropped_;
        continue;
      }
      kept.push_back(Channel{c.lambda, Vec(space_, v / rem)});
    }
    if (!kept.empty()) comps_.emplace(p, std::move(kept));
  }
}

Op GeneratorSpec::component_op(const Partition& a) const {
  Op acc = Op::zeros(space_);
  auto it = comps_.find(a);
  if (it == comps_.end()) return acc;
  for (const auto& c : it->second)
    acc += Op::rank_one(c.lambda, c.xi, c.xi);
  return acc;
}

Op GeneratorSpec::restricted(const Partition& a) const {
  Op acc = Op::zeros(space_);
  for (const auto& [b, chans] : comps_) {
    if (!refines(b, a)) continue;
    for (const auto& c : chans) acc += Op::rank_one(c.lambda, c.xi, c.xi);
  }
  return acc;
}

Op GeneratorSpec::complement_op(const Partition& a) const {
  return gamma() - restricted(a);
}

Op GeneratorSpec::gamma() const {
  Op acc = Op::zeros(space_);
  for (const auto& [b, chans] : comps_)
    for (const auto& c : chans) acc += Op::rank_one(c.lambda, c.xi, c.xi);
  return acc;
}

ClusterOperator GeneratorSpec::cluster_components() const {
  ClusterOperator out(n_, space_);
  for (const auto& [b, chans] : comps_) out.set(b, component_op(b));
  return out;
}

std::vector<Channel> GeneratorSpec::pooled_channels(const Partition& a) const {
  std::vector<Channel> pooled;
  for (const auto& [b, chans] : comps_) {
    if (!refines(b, a)) continue;
    pooled.insert(pooled.end(), chans.begin(), chans.end());
  }
  return pooled;
}

GeneratorSpec GeneratorSpec::with_scaled_component(const Partition& a,
                                                   double factor) const {
  std::map<Partition, std::vector<Channel>> copy = comps_;
  if (auto it = copy.find(a); it != copy.end())
    for (auto& c : it->second) c.lambda *= factor;
  return GeneratorSpec(n_, space_, std::move(copy));
}

Op cayley(const Op& gamma) {
  check_hermitian(gamma);
  const int n = gamma.dim();
  const Eigen::MatrixXcd gd = gamma.dressed();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Eigen::MatrixXcd::Identity(n, n) +
                                           kI * gd);
  const Eigen::MatrixXcd r = lu.solve(Eigen::MatrixXcd::Identity(n, n));
  Eigen::MatrixXcd ad = (Eigen::MatrixXcd::Identity(n, n) - kI * gd) * r;
  return Op::from_dressed(gamma.space(), std::move(ad));
}

double unitarity_residual(const Op& a) {
  const Eigen::MatrixXcd ad = a.dressed();
  const int n = a.dim();
  return (ad.adjoint() * ad - Eigen::MatrixXcd::Identity(n, n)).norm();
}

RankOneCayley cayley_rank_one(double lambda, const Vec& g) {
  const double s = std::real(inner(g, g));
  if (!(s > 0.0)) return RankOneCayley{cplx(0.0, 0.0), s, true};
  const cplx f = -2.0 * kI * lambda / (1.0 + kI * lambda * s);
  return RankOneCayley{f, s, false};
}

Op rank_one_matrix(const RankOneCayley& r, const Vec& g) {
  return Op::identity(g.space()) + Op::rank_one(r.f, g, g);
}

Op finite_rank_resolvent(SpacePtr space, const std::vector<Channel>& channels) {
  for (const auto& c : channels) check_same_space(*space, *c.xi.space());
  return Op::from_dressed(space, resolvent_dressed(*space, channels));
}

ResolventResult solve_R(const GeneratorSpec& spec) {
  const SpacePtr space = spec.space();
  const int dim = space->dim();
  const auto parts = enumerate_partitions(spec.n_particles());

  // Subsystem resolvents and the driving term D = sum_{a != top} C_a R_a.
  std::vector<Eigen::MatrixXcd> ra;
  std::vector<double> ca;
  std::vector<int> part_idx;
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dim, dim);
  for (int ip = 0; ip < static_cast<int>(parts.size()); ++ip) {
    if (parts[ip].is_top()) continue;
    const double c = static_cast<double>(cluster_coefficient(parts[ip]));
    ra.push_back(resolvent_dressed(*space, spec.pooled_channels(parts[ip])));
    ca.push_back(c);
    part_idx.push_back(ip);
    d.noalias() += c * ra.back();
  }
  // sum_{a != top} C_a = 1 makes D collapse to I when no generator is present.

  // Channel list across all components.
  struct Entry {
    const Partition* home;
    double lambda;
    Eigen::VectorXcd chi;  // dressed unit vector
  };
  std::vector<Entry> entries;
  for (const auto& [b, chans] : spec.components())
    for (const auto& c : chans)
      entries.push_back(Entry{
          &b, c.lambda,
          (c.xi.values().array() * space->sqrt_measure.cast<cplx>()).matrix()});
  const int m = static_cast<int>(entries.size());

  ResolventDiagnostics diag;
  diag.system_dim = m;
  Eigen::MatrixXcd r_hat;
  if (m == 0) {
    r_hat = d;  // = I
  } else {
    // P_m = -i lambda_m sum_{a: home(m) does not refine a} C_a R_a xi_m.
    Eigen::MatrixXcd p(dim, m);
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(dim);
      for (std::size_t t = 0; t < ra.size(); ++t) {
        if (refines(*entries[j].home, parts[part_idx[t]])) continue;
        acc.noalias() += ca[t] * (ra[t] * entries[j].chi);
      }
      p.col(j) = -kI * entries[j].lambda * acc;
    }
    Eigen::MatrixXcd g(m, m);
    Eigen::MatrixXcd x(m, dim);
    for (int i = 0; i < m; ++i) {
      g.row(i) = entries[i].chi.adjoint() * p;
      x.row(i) = entries[i].chi.adjoint() * d;
    }
    const Eigen::MatrixXcd sys = Eigen::MatrixXcd::Identity(m, m) - g;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sys, Eigen::ComputeThinU |
                                                    Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    diag.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
    if (!(smin > smax * 1e-14))
      throw IllConditionedError("projected resolvent system singular",
                                diag.condition);
    diag.ill_conditioned = diag.condition > 1e8;
    const Eigen::MatrixXcd y = svd.solve(x);
    r_hat = d + p * y;
  }

  // Residual of (I + i Gamma) R = I in the dressed norm.
  const Eigen::MatrixXcd gam_hat = spec.gamma().dressed();
  diag.residual =
      ((Eigen::MatrixXcd::Identity(dim, dim) + kI * gam_hat) * r_hat -
       Eigen::MatrixXcd::Identity(dim, dim))
          .norm();

  return ResolventResult{Op::from_dressed(space, std::move(r_hat)), diag};
}

Op subsystem_resolvent(const GeneratorSpec& spec, const Partition& a) {
  if (a.n_particles() != spec.n_particles())
    throw DomainError("partition of wrong particle count");
  return finite_rank_resolvent(spec.space(), spec.pooled_channels(a));
}

Op assemble_A(const GeneratorSpec& spec, const Op& r) {
  check_same_space(*spec.space(), *r.space());
  return r - kI * compose(spec.gamma(), r);
}

ClusterOperator cayley_components(const GeneratorSpec& spec) {
  const auto parts = enumerate_partitions(spec.n_particles());
  std::map<Partition, Op> restrictions;
  for (const auto& a : parts) {
    const auto chans = spec.pooled_channels(a);
    Op r_a = finite_rank_resolvent(spec.space(), chans);
    Op gamma_a = spec.restricted(a);
    restrictions.emplace(a, r_a - kI * compose(gamma_a, r_a));
  }
  return ClusterOperator::from_restrictions(spec.n_particles(), spec.space(),
                                            restrictions);
}

}  // namespace scatteq
