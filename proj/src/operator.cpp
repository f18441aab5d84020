#include "scatteq/operator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "scatteq/errors.hpp"

namespace scatteq {

void check_same_space(const Space& a, const Space& b) {
  if (&a == &b) return;
  if (!a.compatible(b)) throw SpaceMismatchError("operands on different spaces");
}

Vec::Vec(SpacePtr space, Eigen::VectorXcd values)
    : space_(std::move(space)), v_(std::move(values)) {
  if (!space_ || v_.size() != space_->dim())
    throw SpaceMismatchError("vector length does not match space");
}

Vec& Vec::operator+=(const Vec& o) {
  check_same_space(*space_, *o.space_);
  v_ += o.v_;
  return *this;
}

Vec Vec::operator*(cplx c) const { return Vec(space_, v_ * c); }

cplx inner(const Vec& u, const Vec& v) {
  check_same_space(*u.space(), *v.space());
  return (u.space()->measure.cast<cplx>() * u.values().array().conjugate() *
          v.values().array())
      .sum();
}

double norm(const Vec& u) { return std::sqrt(std::real(inner(u, u))); }

Op::Op(SpacePtr space, Eigen::MatrixXcd kernel, bool hermitian)
    : space_(std::move(space)), kernel_(std::move(kernel)), hermitian_(hermitian) {
  if (!space_) throw SpaceMismatchError("operator without a space");
  if (kernel_.rows() != kernel_.cols() || kernel_.rows() != space_->dim())
    throw SpaceMismatchError("kernel dimensions do not match space");
}

Op Op::identity(SpacePtr s) {
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(s->dim(), s->dim());
  k.diagonal() = s->measure.inverse().matrix().cast<cplx>();
  return Op(std::move(s), std::move(k), true);
}

Op Op::zeros(SpacePtr s) {
  const int n = s->dim();
  return Op(std::move(s), Eigen::MatrixXcd::Zero(n, n), true);
}

Op Op::diagonal(SpacePtr s, const Eigen::ArrayXd& eigenvalues) {
  if (eigenvalues.size() != s->dim())
    throw SpaceMismatchError("diagonal length does not match space");
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(s->dim(), s->dim());
  k.diagonal() = (eigenvalues / s->measure).matrix().cast<cplx>();
  return Op(std::move(s), std::move(k), true);
}

Op Op::rank_one(cplx c, const Vec& u, const Vec& v) {
  check_same_space(*u.space(), *v.space());
  return Op(u.space(), c * u.values() * v.values().adjoint());
}

Eigen::MatrixXcd Op::dressed() const {
  const auto& sq = space_->sqrt_measure;
  return sq.matrix().cast<cplx>().asDiagonal() * kernel_ *
         sq.matrix().cast<cplx>().asDiagonal();
}

Op Op::from_dressed(SpacePtr s, const Eigen::MatrixXcd& d, bool hermitian) {
  const auto inv = s->sqrt_measure.inverse().matrix().cast<cplx>().asDiagonal();
  Eigen::MatrixXcd k = inv * d * inv;
  return Op(std::move(s), std::move(k), hermitian);
}

Op Op::adjoint() const { return Op(space_, kernel_.adjoint(), hermitian_); }

Vec Op::apply(const Vec& x) const {
  check_same_space(*space_, *x.space());
  return Vec(space_, kernel_ * (space_->measure.cast<cplx>() * x.values().array()).matrix());
}

double Op::hermiticity_residual() const {
  return (kernel_ - kernel_.adjoint()).cwiseAbs().maxCoeff();
}

double Op::max_abs() const { return kernel_.cwiseAbs().maxCoeff(); }

double Op::norm() const { return dressed().norm(); }

cplx Op::trace() const {
  return (kernel_.diagonal().array() * space_->measure.cast<cplx>()).sum();
}

Op& Op::operator+=(const Op& o) {
  check_same_space(*space_, *o.space_);
  kernel_ += o.kernel_;
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

Op& Op::operator-=(const Op& o) {
  check_same_space(*space_, *o.space_);
  kernel_ -= o.kernel_;
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

Op operator+(Op a, const Op& b) {
  a += b;
  return a;
}

Op operator-(Op a, const Op& b) {
  a -= b;
  return a;
}

Op operator*(cplx c, Op a) {
  return Op(a.space(), c * a.kernel(),
            a.hermitian_flag() && c.imag() == 0.0);
}

Op compose(const Op& a, const Op& b) {
  check_same_space(*a.space(), *b.space());
  const auto mu = a.space()->measure.matrix().cast<cplx>().asDiagonal();
  return Op(a.space(), a.kernel() * mu * b.kernel());
}

Op compose(const Op& a, const Op& b, const Op& c) { return compose(compose(a, b), c); }

double distance(const Op& a, const Op& b) { return (a - b).norm(); }

Op inverse(const Op& a) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a.dressed());
  const double rc = lu.rcond();
  if (!(rc > 1e-14))
    throw IllConditionedError("operator numerically singular", rc > 0 ? 1.0 / rc : 0.0);
  const int n = a.dim();
  Eigen::MatrixXcd inv_d = lu.solve(Eigen::MatrixXcd::Identity(n, n));
  return Op::from_dressed(a.space(), inv_d);
}

Eigen::VectorXd hermitian_eigenvalues(const Op& a) {
  const double res = a.hermiticity_residual();
  const double scale = a.max_abs();
  if (res > 1e-12 * std::max(scale, 1e-300))
    throw DomainError("operator fails its Hermiticity gate");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.dressed(),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::VectorXd singular_values(const Op& a) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.dressed());
  return svd.singularValues();
}

}  // namespace scatteq
