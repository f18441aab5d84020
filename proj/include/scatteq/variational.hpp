#pragma once

#include <functional>
#include <vector>

#include "scatteq/operator.hpp"
#include "scatteq/potential.hpp"

namespace scatteq {

// rho(k,k') = tanh(alpha + k^2/k0^2) tanh(alpha + k'^2/k0^2): rank-one PSD
// weight emphasizing momenta above k0.
Op tanh_density(const Grid& grid, double alpha, double k0);

// rho = |chi><chi| for a separable weight.
Op separable_density(const Vec& chi);

// Tr(rho V^dag V) with the measure-weighted trace. >= 0 for PSD rho.
double functional_direct(const Op& v, const Op& rho);

// F(lambda) = <chi|(V'^dag V' - V^dag V)|chi> evaluated without forming the
// lambda-independent (possibly divergent) V^dag V piece:
// F = <chi|(V^dag Vr + Vr^dag V + Vr^dag Vr)|chi>, Vr = V' - V.
double subtracted_functional(const Op& v, const Op& t, const Vec& g,
                             const Vec& chi, double lambda);

// Literal three-term complex sum before taking the real part; mathematically
// real, so its imaginary part measures numerical residue.
cplx subtracted_functional_terms(const Op& v, const Op& t, const Vec& g,
                                 const Vec& chi, double lambda);

// Closed rational form of the subtracted functional:
// F = c1 f + c1* f* + c2 |f|^2 + c3 f^2 f* + c3* f*^2 f + c4 |f|^4,
// f = -2 i lambda / (1 + i lambda <g|g>). Coefficients from eight scalar
// integrals, computed once.
struct RationalForm {
  cplx c1;
  double c2;
  cplx c3;
  double c4;
  double gram;  // <g|g>

  cplx f(double lambda) const;
  double eval(double lambda) const;
  // Six-term complex sum; imaginary part is pure roundoff.
  cplx eval_terms(double lambda) const;

  static RationalForm build(const Op& v, const Op& t, const Vec& g, const Vec& chi);
};

struct SearchSpec {
  double lo = -10.0;
  double hi = 10.0;
  int starts = 8;
  double xtol = 1e-11;
  int max_eval = 20000;
};

struct MinimizeResult {
  double lambda_c = 0.0;
  double f_min = 0.0;
  double grad = 0.0;        // central finite difference at lambda_c
  int evaluations = 0;
  bool flat_warning = false;  // no improvement over F(0) found
  std::vector<std::pair<double, double>> trace;  // (lambda, F) evaluations
};

// Derivative-free 1-D minimization: multi-start bracketing + golden section,
// finished with parabolic refinement steps.
MinimizeResult minimize(const std::function<double(double)>& objective,
                        const SearchSpec& spec = {});

struct MultiMinimizeResult {
  std::vector<double> params;
  double f_min = 0.0;
  int evaluations = 0;
  int rounds = 0;
};

// Coordinate descent over the 1-D machinery; stops when a full round improves
// by less than ftol relative.
MultiMinimizeResult minimize_coordinates(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> start, const SearchSpec& spec = {}, int max_rounds = 8,
    double ftol = 1e-12);

}  // namespace scatteq
