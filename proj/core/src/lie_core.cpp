#include "liekahler/lie_core.hpp"

#include "liekahler/errors.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>

namespace liekahler {

namespace {

using cd = std::complex<double>;

double frobenius(const Eigen::MatrixXcd& m) { return m.norm(); }

}  // namespace

GroupElement GroupElement::inverse() const {
  if (real_form) return {matrix.adjoint(), true};
  return {matrix.inverse(), false};
}

LieAlgebraSpec::LieAlgebraSpec(std::string name, int dim, std::vector<double> structure_constants,
                               Eigen::MatrixXd gram, std::vector<Eigen::MatrixXcd> rep_basis)
    : name_(std::move(name)),
      dim_(dim),
      rep_dim_(0),
      c_(std::move(structure_constants)),
      gram_(std::move(gram)),
      rep_(std::move(rep_basis)) {
  if (dim_ <= 0) throw DimensionMismatch("algebra dimension must be positive");
  const auto n = static_cast<std::size_t>(dim_);
  if (c_.size() != n * n * n)
    throw DimensionMismatch("structure constants must have dim^3 entries");
  if (gram_.rows() != dim_ || gram_.cols() != dim_)
    throw DimensionMismatch("gram matrix must be dim x dim");
  if (rep_.size() != n) throw DimensionMismatch("rep_basis must have dim matrices");
  rep_dim_ = static_cast<int>(rep_.front().rows());
  for (const auto& r : rep_) {
    if (r.rows() != rep_dim_ || r.cols() != rep_dim_)
      throw DimensionMismatch("rep_basis matrices must be square and of equal size");
  }

  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (std::abs(structure_constant(i, j, k) + structure_constant(j, i, k)) > 1e-12)
          throw ConsistencyError("structure constants are not antisymmetric");

  if ((gram_ - gram_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConsistencyError("gram matrix is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(gram_);
  if (llt.info() != Eigen::Success) throw ConsistencyError("gram matrix is not positive-definite");
  gram_l_ = llt.matrixL();
  gram_inv_ = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));

  Eigen::MatrixXd normal(dim_, dim_);
  for (int k = 0; k < dim_; ++k)
    for (int l = 0; l < dim_; ++l) normal(k, l) = (rep_[k].adjoint() * rep_[l]).trace().real();
  rep_normal_.compute(normal);
  if (rep_normal_.info() != Eigen::Success || std::abs(rep_normal_.vectorD().minCoeff()) < 1e-14)
    throw ConsistencyError("rep_basis is linearly dependent");

  if (jacobi_residual() > 1e-12) throw ConsistencyError("structure constants violate Jacobi");
  if (invariance_residual() > 1e-10) throw ConsistencyError("gram matrix is not ad-invariant");
  if (rep_residual() > 1e-12)
    throw ConsistencyError("rep_basis commutators disagree with structure constants");
}

double LieAlgebraSpec::jacobi_residual() const {
  // [e_i,[e_j,e_k]] + cyclic, component m.
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int m = 0; m < dim_; ++m) {
          double s = 0.0;
          for (int l = 0; l < dim_; ++l) {
            s += structure_constant(j, k, l) * structure_constant(i, l, m);
            s += structure_constant(k, i, l) * structure_constant(j, l, m);
            s += structure_constant(i, j, l) * structure_constant(k, l, m);
          }
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

double LieAlgebraSpec::invariance_residual() const {
  double worst = 0.0;
  for (int x = 0; x < dim_; ++x) {
    Eigen::MatrixXd ad(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) ad(k, j) = structure_constant(x, j, k);
    worst = std::max(worst, (ad.transpose() * gram_ + gram_ * ad).cwiseAbs().maxCoeff());
  }
  return worst;
}

double LieAlgebraSpec::rep_residual() const {
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      Eigen::MatrixXcd comm = rep_[i] * rep_[j] - rep_[j] * rep_[i];
      for (int k = 0; k < dim_; ++k) comm -= structure_constant(i, j, k) * rep_[k];
      worst = std::max(worst, comm.cwiseAbs().maxCoeff());
    }
  return worst;
}

Eigen::VectorXd LieAlgebraSpec::coordinates_of(const Eigen::MatrixXcd& m) const {
  Eigen::VectorXd rhs(dim_);
  for (int k = 0; k < dim_; ++k) rhs(k) = (rep_[k].adjoint() * m).trace().real();
  return rep_normal_.solve(rhs);
}

void require_same_dim(const LieAlgebraSpec& g, const AlgebraPoint& x, const char* what) {
  if (x.dim() != g.dim())
    throw DimensionMismatch(std::string(what) + ": point has dimension " +
                            std::to_string(x.dim()) + ", algebra " + g.name() + " has " +
                            std::to_string(g.dim()));
}

double dot(const LieAlgebraSpec& g, const AlgebraPoint& x, const AlgebraPoint& y) {
  require_same_dim(g, x, "dot");
  require_same_dim(g, y, "dot");
  return x.coords.dot(g.gram() * y.coords);
}

double norm(const LieAlgebraSpec& g, const AlgebraPoint& x) { return std::sqrt(dot(g, x, x)); }

Eigen::VectorXd sharp(const LieAlgebraSpec& g, const AlgebraPoint& x) {
  require_same_dim(g, x, "sharp");
  return g.gram() * x.coords;
}

AlgebraPoint bracket(const LieAlgebraSpec& g, const AlgebraPoint& x, const AlgebraPoint& y) {
  require_same_dim(g, x, "bracket");
  require_same_dim(g, y, "bracket");
  const int n = g.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x.coords(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double w = x.coords(i) * y.coords(j);
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out(k) += g.structure_constant(i, j, k) * w;
    }
  }
  return AlgebraPoint(std::move(out));
}

AlgebraPoint opposite_bracket(const LieAlgebraSpec& g, const AlgebraPoint& x,
                              const AlgebraPoint& y) {
  return -bracket(g, x, y);
}

Eigen::MatrixXd ad_matrix(const LieAlgebraSpec& g, const AlgebraPoint& a) {
  require_same_dim(g, a, "ad_matrix");
  const int n = g.dim();
  Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double ai = a.coords(i);
    if (ai == 0.0) continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ad(k, j) += ai * g.structure_constant(i, j, k);
  }
  return ad;
}

Eigen::MatrixXd bracket_pairing(const LieAlgebraSpec& g, const AlgebraPoint& a) {
  const Eigen::VectorXd w = sharp(g, a);
  const int n = g.dim();
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += g.structure_constant(i, j, k) * w(k);
      b(i, j) = s;
    }
  return b;
}

Eigen::MatrixXcd represent(const LieAlgebraSpec& g, const AlgebraPoint& x) {
  require_same_dim(g, x, "represent");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.rep_dim(), g.rep_dim());
  for (int k = 0; k < g.dim(); ++k)
    if (x.coords(k) != 0.0) m += x.coords(k) * g.rep_basis()[k];
  return m;
}

Eigen::MatrixXcd represent(const LieAlgebraSpec& g, const AlgebraPoint& re,
                           const AlgebraPoint& im) {
  require_same_dim(g, re, "represent");
  require_same_dim(g, im, "represent");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.rep_dim(), g.rep_dim());
  for (int k = 0; k < g.dim(); ++k) {
    const cd w(re.coords(k), im.coords(k));
    if (w != 0.0) m += w * g.rep_basis()[k];
  }
  return m;
}

AlgebraPoint adjoint_action(const LieAlgebraSpec& g, const GroupElement& z,
                            const AlgebraPoint& a) {
  const Eigen::MatrixXcd m = z.matrix * represent(g, a) * z.inverse().matrix;
  return AlgebraPoint(g.coordinates_of(m));
}

namespace {

void check_exp_bound(const LieAlgebraSpec& g, const AlgebraPoint& re, const AlgebraPoint& im,
                     const ExpOptions& opts) {
  const double mag = std::hypot(norm(g, re), norm(g, im));
  if (!std::isfinite(mag) || mag > opts.norm_bound)
    throw DomainError("exp_c: |z| = " + std::to_string(mag) + " exceeds bound " +
                      std::to_string(opts.norm_bound));
}

}  // namespace

GroupElement exp_c(const LieAlgebraSpec& g, const AlgebraPoint& re, const AlgebraPoint& im,
                   ExpOptions opts) {
  check_exp_bound(g, re, im, opts);
  const Eigen::MatrixXcd x = represent(g, re, im);
  return {x.exp(), im.coords.isZero(0.0)};
}

GroupElement exp_c_spectral(const LieAlgebraSpec& g, const AlgebraPoint& re,
                            const AlgebraPoint& im, ExpOptions opts) {
  check_exp_bound(g, re, im, opts);
  const bool pure_real = im.coords.isZero(0.0);
  const bool pure_imag = re.coords.isZero(0.0);
  if (!pure_real && !pure_imag)
    throw DomainError("exp_c_spectral: exponent must be anti-Hermitian or Hermitian");
  // Hermitian H with exponent = -iH (pure real part) or exponent = H (pure imaginary part).
  Eigen::MatrixXcd h = pure_real ? Eigen::MatrixXcd(cd(0, 1) * represent(g, re))
                                 : Eigen::MatrixXcd(cd(0, 1) * represent(g, im));
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw ConvergenceError("exp_c_spectral: eigensolver failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::VectorXcd f(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k)
    f(k) = pure_real ? std::exp(cd(0, -lam(k))) : cd(std::exp(lam(k)), 0);
  return {es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint(), pure_real};
}

PolarDecomposition polar_decompose(const LieAlgebraSpec& g, const GroupElement& x) {
  Eigen::MatrixXcd p2 = x.matrix.adjoint() * x.matrix;
  p2 = 0.5 * (p2 + p2.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p2);
  if (es.info() != Eigen::Success) throw ConvergenceError("polar_decompose: eigensolver failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  if (lam.minCoeff() <= 0.0) throw RegularityError("polar_decompose: singular element");
  Eigen::VectorXd inv_sqrt = lam.array().sqrt().inverse();
  Eigen::VectorXd half_log = 0.5 * lam.array().log();
  const Eigen::MatrixXcd& v = es.eigenvectors();
  const Eigen::MatrixXcd p_inv = v * inv_sqrt.cast<cd>().asDiagonal() * v.adjoint();
  const Eigen::MatrixXcd log_p = v * half_log.cast<cd>().asDiagonal() * v.adjoint();
  PolarDecomposition out;
  out.unitary = {x.matrix * p_inv, true};
  // log P = i rho(a')  =>  rho(a') = -i log P.
  out.fiber = AlgebraPoint(g.coordinates_of(cd(0, -1) * log_p));
  return out;
}

double unitarity_residual(const Eigen::MatrixXcd& m) {
  return frobenius(m * m.adjoint() - Eigen::MatrixXcd::Identity(m.rows(), m.cols()));
}

}  // namespace liekahler
