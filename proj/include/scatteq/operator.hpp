#pragma once

#include <Eigen/Dense>
#include <complex>

#include "scatteq/grid.hpp"

namespace scatteq {

using cplx = std::complex<double>;

// Vector (form factor / state) on a measure space; inner products carry mu_i.
class Vec {
public:
  Vec(SpacePtr space, Eigen::VectorXcd values);

  SpacePtr space() const { return space_; }
  int dim() const { return static_cast<int>(v_.size()); }
  const Eigen::VectorXcd& values() const { return v_; }
  cplx operator[](int i) const { return v_[i]; }

  Vec& operator+=(const Vec& o);
  Vec operator*(cplx c) const;

private:
  SpacePtr space_;
  Eigen::VectorXcd v_;
};

cplx inner(const Vec& u, const Vec& v);  // sum_i mu_i conj(u_i) v_i
double norm(const Vec& u);

// Kernel operator on a measure space. Entries are plain kernel values
// K(x_i, x_j); the measure enters at composition time:
// (AB)(i,j) = sum_m A(i,m) mu_m B(m,j). The "dressed" matrix
// sqrt(mu) K sqrt(mu) turns composition into plain matrix product and the
// weighted norm into the Frobenius norm.
class Op {
public:
  Op(SpacePtr space, Eigen::MatrixXcd kernel, bool hermitian = false);

  static Op identity(SpacePtr s);  // kernel diag(1/mu)
  static Op zeros(SpacePtr s);
  static Op diagonal(SpacePtr s, const Eigen::ArrayXd& eigenvalues);
  static Op rank_one(cplx c, const Vec& u, const Vec& v);  // c |u><v|

  SpacePtr space() const { return space_; }
  int dim() const { return static_cast<int>(kernel_.rows()); }
  const Eigen::MatrixXcd& kernel() const { return kernel_; }
  bool hermitian_flag() const { return hermitian_; }

  Eigen::MatrixXcd dressed() const;
  static Op from_dressed(SpacePtr s, const Eigen::MatrixXcd& d, bool hermitian = false);

  Op adjoint() const;
  Vec apply(const Vec& x) const;

  // max_ij |K - K^dag|; the hermitian flag is declared, this verifies it.
  double hermiticity_residual() const;
  double max_abs() const;
  double norm() const;    // measure-weighted Frobenius norm
  cplx trace() const;     // sum_i mu_i K(i,i)

  Op& operator+=(const Op& o);
  Op& operator-=(const Op& o);

private:
  SpacePtr space_;
  Eigen::MatrixXcd kernel_;
  bool hermitian_;
};

Op operator+(Op a, const Op& b);
Op operator-(Op a, const Op& b);
Op operator*(cplx c, Op a);
Op compose(const Op& a, const Op& b);
Op compose(const Op& a, const Op& b, const Op& c);

double distance(const Op& a, const Op& b);  // weighted norm of the difference

// Inverse in the operator algebra: compose(inverse(a), a) == identity.
// Throws IllConditionedError when the reciprocal condition estimate
// underflows 1e-14.
Op inverse(const Op& a);

// Eigenvalues of a Hermitian operator (ascending), computed on the dressed
// matrix. Verifies the Hermiticity residual against 1e-12 * max|K|.
Eigen::VectorXd hermitian_eigenvalues(const Op& a);

// Singular values of the dressed matrix, descending.
Eigen::VectorXd singular_values(const Op& a);

void check_same_space(const Space& a, const Space& b);

}  // namespace scatteq
