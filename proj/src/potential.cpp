#include "scatteq/potential.hpp"

#include <cmath>

#include "scatteq/errors.hpp"

namespace scatteq {

double FormFactor::operator()(double k) const {
  switch (kind) {
    case Kind::gaussian: {
      const double r = k / scale;
      return std::exp(-r * r);
    }
    case Kind::yamaguchi:
      return 1.0 / (k * k + scale * scale);
  }
  throw ConfigError("unknown form factor kind");
}

Vec FormFactor::on_grid(const Grid& g) const {
  Eigen::VectorXcd v(g.size());
  for (int i = 0; i < g.size(); ++i) v[i] = (*this)(g.nodes()[i]);
  return Vec(g.space(), std::move(v));
}

double legendre_q(int l, double z) {
  if (l < 0 || l > 6) throw DomainError("Legendre Q supported for 0 <= l <= 6");
  if (!(z > 1.0)) throw DomainError("Legendre Q requires z > 1");
  // Q_0(z) = 0.5 ln((z+1)/(z-1)) = 0.5 log1p(2/(z-1))
  double qm = 0.5 * std::log1p(2.0 / (z - 1.0));
  if (l == 0) return qm;
  double q = z * qm - 1.0;  // Q_1
  for (int j = 2; j <= l; ++j) {
    const double qn = ((2.0 * j - 1.0) * z * q - (j - 1.0) * qm) / j;
    qm = q;
    q = qn;
  }
  return q;
}

Op Potential::matrix(const Grid& g) const {
  const int n = g.size();
  Eigen::MatrixXcd k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      k(i, j) = eval(g.nodes()[i], g.nodes()[j]);
      if (j != i) k(j, i) = std::conj(k(i, j));
    }
  return Op(g.space(), std::move(k), true);
}

SeparablePotential::SeparablePotential(double strength, FormFactor eta)
    : v_(strength), eta_(eta) {}

cplx SeparablePotential::eval(double k, double kp) const {
  return v_ * eta_(k) * eta_(kp);
}

YukawaSumPotential::YukawaSumPotential(std::vector<Term> terms, int ell)
    : terms_(std::move(terms)), ell_(ell) {
  if (ell_ < 0 || ell_ > 6) throw ConfigError("partial wave outside 0..6");
  for (const auto& t : terms_)
    if (!(t.range > 0.0)) throw ConfigError("Yukawa range must be positive");
}

cplx YukawaSumPotential::eval(double k, double kp) const {
  double v = 0.0;
  const double kk = k * kp;
  for (const auto& t : terms_) {
    if (ell_ == 0) {
      // 1/(2kk') Q_0(z) written via log1p; exact and stable as kk' -> 0.
      const double dd = (k - kp) * (k - kp) + t.range * t.range;
      v += t.strength / (4.0 * M_PI) * 0.5 / kk * std::log1p(4.0 * kk / dd);
    } else {
      const double z = (k * k + kp * kp + t.range * t.range) / (2.0 * kk);
      v += t.strength / (4.0 * M_PI) / kk * legendre_q(ell_, z);
    }
  }
  return v;
}

GaussianWellPotential::GaussianWellPotential(double depth, double width, int ell)
    : depth_(depth), width_(width), ell_(ell) {
  if (!(width > 0.0)) throw ConfigError("well width must be positive");
  if (ell_ < 0 || ell_ > 6) throw ConfigError("partial wave outside 0..6");
  gauss_legendre(64, x_, wx_);
}

cplx GaussianWellPotential::eval(double k, double kp) const {
  const double pref = depth_ * std::pow(M_PI, 1.5) * width_ * width_ * width_;
  double acc = 0.0;
  for (int i = 0; i < x_.size(); ++i) {
    const double x = x_[i];
    // P_ell by upward recurrence.
    double p0 = 1.0, p1 = x, pl = (ell_ == 0) ? 1.0 : x;
    for (int j = 2; j <= ell_; ++j) {
      pl = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = pl;
    }
    const double q2 = k * k + kp * kp - 2.0 * k * kp * x;
    acc += wx_[i] * pl * std::exp(-0.25 * q2 * width_ * width_);
  }
  return pref * acc / (16.0 * M_PI * M_PI);
}

ScaledPotential::ScaledPotential(PotentialPtr base, double factor)
    : base_(std::move(base)), factor_(factor) {
  if (!base_) throw ConfigError("scaled potential needs a base");
}

cplx ScaledPotential::eval(double k, double kp) const {
  return factor_ * base_->eval(k, kp);
}

}  // namespace scatteq
