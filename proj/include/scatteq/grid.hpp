#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>

namespace scatteq {

// A discretized measure space: the index set plus the quadrature measure
// mu_i > 0 used in every inner product, composition and norm.
struct Space {
  std::string label;
  Eigen::ArrayXd measure;
  Eigen::ArrayXd sqrt_measure;

  int dim() const { return static_cast<int>(measure.size()); }
  static std::shared_ptr<const Space> make(std::string label, Eigen::ArrayXd mu);
  // Structural compatibility: same size and identical measures.
  bool compatible(const Space& o) const;
};

using SpacePtr = std::shared_ptr<const Space>;

// Gauss-Legendre nodes/weights on [-1, 1], ascending nodes.
void gauss_legendre(int n, Eigen::ArrayXd& x, Eigen::ArrayXd& w);

// Radial momentum grid: Gauss-Legendre on t in (0,1) mapped through
// k = scale * t / (1 - t), Jacobian folded into the dk weights. The measure
// of the associated Space is w_i k_i^2.
class Grid {
public:
  Grid(int n_points, double map_scale, int partial_wave = 0);

  int size() const { return static_cast<int>(k_.size()); }
  double map_scale() const { return scale_; }
  int partial_wave() const { return ell_; }
  const Eigen::ArrayXd& nodes() const { return k_; }     // ascending, > 0
  const Eigen::ArrayXd& weights() const { return w_; }   // dk weights, > 0
  SpacePtr space() const { return space_; }

  // Sum of f(k_i) w_i k_i^2: approximates the radial integral of f k^2 dk.
  double integrate(const std::function<double(double)>& f) const;

private:
  double scale_;
  int ell_;
  Eigen::ArrayXd k_, w_;
  SpacePtr space_;
};

using GridPtr = std::shared_ptr<const Grid>;

}  // namespace scatteq
