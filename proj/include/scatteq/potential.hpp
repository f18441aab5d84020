#pragma once

#include <memory>
#include <vector>

#include "scatteq/operator.hpp"

namespace scatteq {

// Scalar momentum-space profile g(k) used for rank-one operators and
// separable potentials.
struct FormFactor {
  enum class Kind { gaussian, yamaguchi };
  Kind kind = Kind::gaussian;
  double scale = 1.0;  // gaussian: exp(-(k/scale)^2); yamaguchi: 1/(k^2+scale^2)

  double operator()(double k) const;
  Vec on_grid(const Grid& g) const;
};

// Legendre function of the second kind Q_l(z) for z > 1, l <= 6. Q_0 in the
// cancellation-free log1p form, then upward recurrence.
double legendre_q(int l, double z);

// Partial-wave potential kernel, evaluable at arbitrary momenta (needed for
// the on-shell node of the scattering solver, which is never a grid node).
class Potential {
public:
  virtual ~Potential() = default;
  virtual cplx eval(double k, double kp) const = 0;
  virtual int partial_wave() const { return 0; }

  Op matrix(const Grid& g) const;  // Hermitian-flagged kernel on the grid
};

using PotentialPtr = std::shared_ptr<const Potential>;

// v |eta><eta| with a real profile eta.
class SeparablePotential final : public Potential {
public:
  SeparablePotential(double strength, FormFactor eta);
  cplx eval(double k, double kp) const override;
  double strength() const { return v_; }
  const FormFactor& profile() const { return eta_; }

private:
  double v_;
  FormFactor eta_;
};

// Sum of Yukawa terms, partial-wave projected:
// V_l(k,k') = sum_t strength_t /(4 pi k k') Q_l(z_t),
// z_t = (k^2 + k'^2 + range_t^2)/(2 k k').
class YukawaSumPotential final : public Potential {
public:
  struct Term {
    double strength;
    double range;
  };
  YukawaSumPotential(std::vector<Term> terms, int ell);
  cplx eval(double k, double kp) const override;
  int partial_wave() const override { return ell_; }
  const std::vector<Term>& terms() const { return terms_; }

private:
  std::vector<Term> terms_;
  int ell_;
};

// Gaussian well V(r) = depth * exp(-r^2/width^2) in momentum space,
// partial-wave projected by fixed-order Legendre quadrature:
// V_l(k,k') = 1/(16 pi^2) Integral P_l(x) Vt(q) dx,
// Vt(q) = depth * pi^{3/2} width^3 exp(-q^2 width^2 / 4),
// q^2 = k^2 + k'^2 - 2 k k' x.
class GaussianWellPotential final : public Potential {
public:
  GaussianWellPotential(double depth, double width, int ell);
  cplx eval(double k, double kp) const override;
  int partial_wave() const override { return ell_; }

private:
  double depth_, width_;
  int ell_;
  Eigen::ArrayXd x_, wx_;  // projection quadrature on [-1,1]
};

// Uniform scaling wrapper (negative controls scale a potential by 1.01).
class ScaledPotential final : public Potential {
public:
  ScaledPotential(PotentialPtr base, double factor);
  cplx eval(double k, double kp) const override;
  int partial_wave() const override { return base_->partial_wave(); }

private:
  PotentialPtr base_;
  double factor_;
};

}  // namespace scatteq
