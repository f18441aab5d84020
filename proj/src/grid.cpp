#include "scatteq/grid.hpp"

#include <cmath>

#include "scatteq/errors.hpp"

namespace scatteq {

std::shared_ptr<const Space> Space::make(std::string label, Eigen::ArrayXd mu) {
  if (mu.size() == 0) throw DomainError("empty measure");
  if ((mu <= 0.0).any()) throw DomainError("measure must be positive");
  auto s = std::make_shared<Space>();
  s->label = std::move(label);
  s->sqrt_measure = mu.sqrt();
  s->measure = std::move(mu);
  return s;
}

bool Space::compatible(const Space& o) const {
  return dim() == o.dim() && (measure == o.measure).all();
}

void gauss_legendre(int n, Eigen::ArrayXd& x, Eigen::ArrayXd& w) {
  if (n < 1) throw DomainError("quadrature order must be positive");
  x.resize(n);
  w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_n from the Tricomi-style initial guess.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

Grid::Grid(int n_points, double map_scale, int partial_wave)
    : scale_(map_scale), ell_(partial_wave) {
  if (n_points < 4 || n_points > 4096) throw DomainError("grid size outside 4..4096");
  if (!(map_scale > 0.0)) throw DomainError("map scale must be positive");
  if (partial_wave < 0) throw DomainError("partial wave must be >= 0");
  Eigen::ArrayXd x, w;
  gauss_legendre(n_points, x, w);
  k_.resize(n_points);
  w_.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double t = 0.5 * (x[i] + 1.0);
    const double omt = 1.0 - t;
    k_[i] = scale_ * t / omt;
    w_[i] = 0.5 * w[i] * scale_ / (omt * omt);
  }
  space_ = Space::make("radial", w_ * k_.square());
}

double Grid::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += space_->measure[i] * f(k_[i]);
  return s;
}

}  // namespace scatteq
