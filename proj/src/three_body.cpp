#include "scatteq/three_body.hpp"

#include "scatteq/errors.hpp"

namespace scatteq {

TensorSpace::TensorSpace(GridPtr pair_grid, GridPtr spectator_grid)
    : pair_(std::move(pair_grid)), spec_(std::move(spectator_grid)) {
  if (!pair_ || !spec_) throw DomainError("tensor space needs both grids");
  const int np = pair_->size(), ns = spec_->size();
  Eigen::ArrayXd mu(np * ns);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < ns; ++j)
      mu[index(i, j)] = pair_->space()->measure[i] * spec_->space()->measure[j];
  space_ = Space::make("pair x spectator", std::move(mu));
}

Op TensorSpace::embed_pair(const Op& pair_op) const {
  check_same_space(*pair_->space(), *pair_op.space());
  const int np = pair_->size(), ns = spec_->size();
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(dim(), dim());
  const auto& mus = spec_->space()->measure;
  for (int i = 0; i < np; ++i)
    for (int ip = 0; ip < np; ++ip) {
      const cplx v = pair_op.kernel()(i, ip);
      if (v == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < ns; ++j)
        k(index(i, j), index(ip, j)) = v / mus[j];
    }
  return Op(space_, std::move(k), pair_op.hermitian_flag());
}

Op TensorSpace::embed_spectator(const Op& spec_op) const {
  check_same_space(*spec_->space(), *spec_op.space());
  const int np = pair_->size(), ns = spec_->size();
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(dim(), dim());
  const auto& mup = pair_->space()->measure;
  for (int j = 0; j < ns; ++j)
    for (int jp = 0; jp < ns; ++jp) {
      const cplx v = spec_op.kernel()(j, jp);
      if (v == cplx(0.0, 0.0)) continue;
      for (int i = 0; i < np; ++i)
        k(index(i, j), index(i, jp)) = v / mup[i];
    }
  return Op(space_, std::move(k), spec_op.hermitian_flag());
}

Vec TensorSpace::product_vec(const Vec& pair_v, const Vec& spec_v) const {
  check_same_space(*pair_->space(), *pair_v.space());
  check_same_space(*spec_->space(), *spec_v.space());
  Eigen::VectorXcd v(dim());
  for (int i = 0; i < pair_->size(); ++i)
    for (int j = 0; j < spec_->size(); ++j)
      v[index(i, j)] = pair_v[i] * spec_v[j];
  return Vec(space_, std::move(v));
}

Op TensorSpace::kinetic(double mu_pair, double mu_spectator) const {
  if (!(mu_pair > 0.0) || !(mu_spectator > 0.0))
    throw DomainError("masses must be positive");
  Eigen::ArrayXd t(dim());
  for (int i = 0; i < pair_->size(); ++i)
    for (int j = 0; j < spec_->size(); ++j)
      t[index(i, j)] = pair_->nodes()[i] * pair_->nodes()[i] / (2.0 * mu_pair) +
                       spec_->nodes()[j] * spec_->nodes()[j] / (2.0 * mu_spectator);
  return Op::diagonal(space_, t);
}

std::vector<Channel> TensorSpace::pair_rank_one_channels(double lambda,
                                                         const Vec& pair_g) const {
  check_same_space(*pair_->space(), *pair_g.space());
  std::vector<Channel> out;
  out.reserve(spec_->size());
  for (int j = 0; j < spec_->size(); ++j) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
    const double isq = 1.0 / std::sqrt(spec_->space()->measure[j]);
    for (int i = 0; i < pair_->size(); ++i)
      v[index(i, j)] = pair_g[i] * isq;
    out.push_back(Channel{lambda, Vec(space_, std::move(v))});
  }
  return out;
}

std::vector<Channel> TensorSpace::spectator_rank_one_channels(
    double lambda, const Vec& spec_g) const {
  check_same_space(*spec_->space(), *spec_g.space());
  std::vector<Channel> out;
  out.reserve(pair_->size());
  for (int i = 0; i < pair_->size(); ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
    const double isq = 1.0 / std::sqrt(pair_->space()->measure[i]);
    for (int j = 0; j < spec_->size(); ++j)
      v[index(i, j)] = spec_g[j] * isq;
    out.push_back(Channel{lambda, Vec(space_, std::move(v))});
  }
  return out;
}

GeneratorSpec symmetric_boson_generator(const TensorSpace& ts, double lambda_pair,
                                        const Vec& pair_g, double lambda_conn,
                                        const Vec& conn_vec) {
  std::map<Partition, std::vector<Channel>> comps;
  const auto chans = ts.pair_rank_one_channels(lambda_pair, pair_g);
  comps.emplace(Partition::parse("(12)(3)"), chans);
  comps.emplace(Partition::parse("(13)(2)"), chans);
  comps.emplace(Partition::parse("(1)(23)"), chans);
  if (lambda_conn != 0.0)
    comps.emplace(Partition::parse("(123)"),
                  std::vector<Channel>{Channel{lambda_conn, conn_vec}});
  return GeneratorSpec(3, ts.space(), std::move(comps));
}

}  // namespace scatteq
