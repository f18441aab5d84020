#include "scatteq/variational.hpp"

#include <algorithm>
#include <cmath>

#include "scatteq/errors.hpp"

namespace scatteq {

namespace {
constexpr cplx kI{0.0, 1.0};
}

Op tanh_density(const Grid& grid, double alpha, double k0) {
  if (!(k0 > 0.0)) throw ConfigError("density momentum scale must be positive");
  if (alpha < 0.0) throw ConfigError("density offset must be >= 0");
  Eigen::VectorXcd d(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double k = grid.nodes()[i];
    d[i] = std::tanh(alpha + k * k / (k0 * k0));
  }
  const Vec dv(grid.space(), std::move(d));
  return Op::rank_one(1.0, dv, dv);
}

Op separable_density(const Vec& chi) { return Op::rank_one(1.0, chi, chi); }

double functional_direct(const Op& v, const Op& rho) {
  check_same_space(*v.space(), *rho.space());
  return std::real(compose(rho, v.adjoint(), v).trace());
}

namespace {

struct TransformPieces {
  cplx f;
  Vec hg;
  cplx a5;   // <g|chi>
  cplx bhg;  // <hg|chi>
  double a6;
};

TransformPieces pieces(const Op& v, const Op& t, const Vec& g, const Vec& chi,
                       double lambda) {
  const Op h = v + t;
  Vec hg = h.apply(g);
  const double s = std::real(inner(g, g));
  const cplx f = -2.0 * kI * lambda / (1.0 + kI * lambda * s);
  const double a6 = std::real(inner(g, hg));
  return TransformPieces{f, std::move(hg), inner(g, chi), cplx(0, 0), a6};
}

}  // namespace

cplx subtracted_functional_terms(const Op& v, const Op& t, const Vec& g,
                                 const Vec& chi, double lambda) {
  check_same_space(*v.space(), *t.space());
  check_same_space(*v.space(), *g.space());
  check_same_space(*v.space(), *chi.space());
  if (lambda == 0.0) return cplx(0.0, 0.0);
  auto p = pieces(v, t, g, chi, lambda);
  const cplx hg_chi = inner(p.hg, chi);
  // Vr |chi> with Vr = f* |g><hg| + f |hg><g| + |f|^2 a6 |g><g|
  Eigen::VectorXcd vr_chi = std::conj(p.f) * hg_chi * g.values() +
                            p.f * p.a5 * p.hg.values() +
                            std::norm(p.f) * p.a6 * p.a5 * g.values();
  const Vec vrchi(v.space(), std::move(vr_chi));
  const Vec vchi = v.apply(chi);
  return inner(vchi, vrchi) + inner(vrchi, vchi) + inner(vrchi, vrchi);
}

double subtracted_functional(const Op& v, const Op& t, const Vec& g,
                             const Vec& chi, double lambda) {
  return std::real(subtracted_functional_terms(v, t, g, chi, lambda));
}

cplx RationalForm::f(double lambda) const {
  return -2.0 * kI * lambda / (1.0 + kI * lambda * gram);
}

cplx RationalForm::eval_terms(double lambda) const {
  const cplx fv = f(lambda);
  const cplx fc = std::conj(fv);
  return c1 * fv + std::conj(c1) * fc + c2 * fv * fc + c3 * fv * fv * fc +
         std::conj(c3) * fc * fc * fv + c4 * fv * fv * fc * fc;
}

double RationalForm::eval(double lambda) const {
  if (lambda == 0.0) return 0.0;
  return std::real(eval_terms(lambda));
}

RationalForm RationalForm::build(const Op& v, const Op& t, const Vec& g,
                                 const Vec& chi) {
  check_same_space(*v.space(), *t.space());
  check_same_space(*v.space(), *g.space());
  check_same_space(*v.space(), *chi.space());
  const Op h = v + t;
  const Vec hg = h.apply(g);
  const Op vdag = v.adjoint();
  const cplx a1 = inner(chi, vdag.apply(g));
  const cplx a2 = inner(g, h.apply(chi));
  const cplx a3 = inner(chi, vdag.apply(hg));
  const cplx a5 = inner(g, chi);
  const double a6 = std::real(inner(g, hg));
  const double a7 = std::real(inner(g, g));
  const double a8 = std::real(inner(hg, hg));  // <g|H^2|g>

  RationalForm r;
  r.gram = a7;
  r.c1 = a3 * a5 + std::conj(a1 * a2);
  r.c2 = 2.0 * a6 * std::real(a1 * a5) + std::norm(a2) * a7 +
         std::norm(a5) * a8 - 2.0 * a6 * std::real(std::conj(a2) * a5);
  r.c3 = std::norm(a5) * a6 * a6;
  r.c4 = a6 * a6 * std::norm(a5) * a7;
  return r;
}

namespace {

struct Tracker {
  const std::function<double(double)>& obj;
  MinimizeResult& res;
  const SearchSpec& spec;
  double operator()(double x) {
    if (res.evaluations >= spec.max_eval)
      throw Error("minimizer evaluation budget exhausted");
    ++res.evaluations;
    const double f = obj(x);
    res.trace.emplace_back(x, f);
    return f;
  }
};

// Golden-section on [a, b] assuming a minimum inside; returns (x, f).
std::pair<double, double> golden(Tracker& ev, double a, double b, double xtol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = ev(c), fd = ev(d);
  while (b - a > xtol * std::max(1.0, std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = ev(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = ev(d);
    }
  }
  return fc < fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

}  // namespace

MinimizeResult minimize(const std::function<double(double)>& objective,
                        const SearchSpec& spec) {
  if (!(spec.hi > spec.lo)) throw ConfigError("empty search bracket");
  MinimizeResult res;
  Tracker ev{objective, res, spec};

  const double f_zero =
      (spec.lo <= 0.0 && 0.0 <= spec.hi) ? ev(0.0) : ev(spec.lo);
  const double x_zero = (spec.lo <= 0.0 && 0.0 <= spec.hi) ? 0.0 : spec.lo;
  double best_x = x_zero, best_f = f_zero;
  double seen_lo = f_zero, seen_hi = f_zero;

  const int starts = std::max(1, spec.starts);
  const double width = (spec.hi - spec.lo) / starts;
  for (int s = 0; s < starts; ++s) {
    const double a = spec.lo + s * width;
    const double b = a + width;
    auto [x, f] = golden(ev, a, b, std::max(spec.xtol, 1e-12));
    seen_lo = std::min(seen_lo, f);
    seen_hi = std::max(seen_hi, f);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }

  // Parabolic refinement around the incumbent.
  for (int it = 0; it < 8; ++it) {
    const double h = 1e-5 * std::max(1.0, std::abs(best_x));
    const double fm = ev(best_x - h), fp = ev(best_x + h);
    const double curv = fp - 2.0 * best_f + fm;
    if (!(curv > 0.0)) break;
    const double step = -0.5 * h * (fp - fm) / curv;
    if (!std::isfinite(step)) break;
    const double cand = std::clamp(
        best_x + std::clamp(step, -10.0 * h, 10.0 * h), spec.lo, spec.hi);
    const double fcand = ev(cand);
    if (fcand < best_f) {
      best_x = cand;
      best_f = fcand;
    }
    if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(best_x))) break;
  }

  const double span = seen_hi - seen_lo;
  if (!(best_f < f_zero) || span <= 1e-14 * std::max(1.0, std::abs(f_zero))) {
    if (span <= 1e-14 * std::max(1.0, std::abs(f_zero))) {
      res.flat_warning = true;
      best_x = x_zero;
      best_f = f_zero;
    } else if (!(best_f < f_zero)) {
      best_x = x_zero;
      best_f = f_zero;
    }
  }

  res.lambda_c = best_x;
  res.f_min = best_f;
  const double hg = 1e-5 * std::max(1.0, std::abs(best_x));
  res.grad = (ev(best_x + hg) - ev(best_x - hg)) / (2.0 * hg);
  return res;
}

MultiMinimizeResult minimize_coordinates(
    const std::function<double(const std::vector<double>&)>& objective,
    std::vector<double> start, const SearchSpec& spec, int max_rounds,
    double ftol) {
  if (start.empty()) throw ConfigError("empty parameter vector");
  MultiMinimizeResult res;
  res.params = std::move(start);
  res.f_min = objective(res.params);
  ++res.evaluations;
  for (int round = 0; round < max_rounds; ++round) {
    const double before = res.f_min;
    for (std::size_t d = 0; d < res.params.size(); ++d) {
      auto line = [&](double x) {
        std::vector<double> p = res.params;
        p[d] = x;
        return objective(p);
      };
      MinimizeResult one = minimize(line, spec);
      res.evaluations += one.evaluations;
      if (one.f_min < res.f_min) {
        res.f_min = one.f_min;
        res.params[d] = one.lambda_c;
      }
    }
    ++res.rounds;
    if (before - res.f_min <= ftol * std::max(1.0, std::abs(before))) break;
  }
  return res;
}

}  // namespace scatteq
