#include "liekahler/ad_calculus.hpp"

#include "liekahler/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <numbers>

namespace liekahler {

namespace {

using cd = std::complex<double>;

constexpr double kTaylorRadius = 1e-8;

// Coefficients b_j of t cot t = sum_j b_j t^(2j).
double xcotx_coeff(int j) {
  if (j == 0) return 1.0;
  const double z = boost::math::zeta(2.0 * j);
  return -2.0 * z / std::pow(std::numbers::pi, 2.0 * j);
}

// Coefficient of A^(2j) in the even part; cosm1_over is handled as A * even.
double even_coeff(const AdFunction& f, int j) {
  double fact = 1.0;
  switch (f.kind) {
    case AdKind::sinc:
      for (int k = 2; k <= 2 * j + 1; ++k) fact *= k;
      return (j % 2 ? -1.0 : 1.0) / fact;
    case AdKind::cos:
      for (int k = 2; k <= 2 * j; ++k) fact *= k;
      return (j % 2 ? -1.0 : 1.0) / fact;
    case AdKind::cosm1_over:
      // (cos t - 1)/t = t * sum_j (-1)^(j+1) t^(2j) / (2j+2)!
      for (int k = 2; k <= 2 * j + 2; ++k) fact *= k;
      return (j % 2 ? 1.0 : -1.0) / fact;
    case AdKind::x_cot_x:
      return xcotx_coeff(j);
    case AdKind::custom:
      return j < static_cast<int>(f.custom_series.size()) ? f.custom_series[j] : 0.0;
  }
  return 0.0;
}

}  // namespace

const char* to_string(AdKind kind) {
  switch (kind) {
    case AdKind::sinc: return "sinc";
    case AdKind::cosm1_over: return "cosm1_over";
    case AdKind::cos: return "cos";
    case AdKind::x_cot_x: return "x_cot_x";
    case AdKind::custom: return "custom";
  }
  return "?";
}

cd scalar_value(const AdFunction& f, cd z) {
  const bool small = std::abs(z) < kTaylorRadius;
  const cd z2 = z * z;
  switch (f.kind) {
    case AdKind::sinc:
      return small ? 1.0 - z2 / 6.0 + z2 * z2 / 120.0 : std::sin(z) / z;
    case AdKind::cosm1_over:
      if (small) return -z / 2.0 + z * z2 / 24.0;
      {
        // cos z - 1 = -2 sin^2(z/2), free of cancellation for small z.
        const cd h = std::sin(0.5 * z);
        return -2.0 * h * h / z;
      }
    case AdKind::cos:
      return std::cos(z);
    case AdKind::x_cot_x:
      return small ? 1.0 - z2 / 3.0 - z2 * z2 / 45.0 : z * std::cos(z) / std::sin(z);
    case AdKind::custom: {
      cd sum = 0.0;
      cd p = 1.0;
      for (double c : f.custom_series) {
        sum += c * p;
        p *= z2;
      }
      return sum;
    }
  }
  return 0.0;
}

SeriesResult eval_series_detailed(const AdFunction& f, const Eigen::MatrixXd& ad,
                                  SeriesOptions opts) {
  const Eigen::Index n = ad.rows();
  const Eigen::MatrixXd a2 = ad * ad;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  const bool finite_series = f.kind == AdKind::custom;
  const int cap = finite_series ? static_cast<int>(f.custom_series.size()) : opts.max_terms;
  SeriesResult out;
  for (int j = 0; j < cap; ++j) {
    const Eigen::MatrixXd term = even_coeff(f, j) * power;
    sum += term;
    out.terms = j + 1;
    out.last_term = term.norm() / std::max(1.0, sum.norm());
    if (!finite_series && j > 0 && out.last_term < opts.term_tol) break;
    if (!finite_series && j + 1 == cap)
      throw ConvergenceError(std::string("eval_series: ") + to_string(f.kind) +
                             " did not converge within " + std::to_string(cap) + " terms");
    power = power * a2;
    if (!power.allFinite())
      throw ConvergenceError(std::string("eval_series: overflow in ") + to_string(f.kind));
  }
  out.value = f.kind == AdKind::cosm1_over ? Eigen::MatrixXd(ad * sum) : sum;
  return out;
}

Eigen::MatrixXd eval_series(const LieAlgebraSpec& g, const AdFunction& f, const AlgebraPoint& a,
                            SeriesOptions opts) {
  return eval_series_detailed(f, ad_matrix(g, a), opts).value;
}

AdSpectrum::AdSpectrum(const LieAlgebraSpec& g, const Eigen::MatrixXd& ad) {
  l_ = g.gram_factor();
  l_inv_t_ = l_.transpose().triangularView<Eigen::Upper>().solve(
      Eigen::MatrixXd::Identity(ad.rows(), ad.cols()));
  Eigen::MatrixXd b = l_.transpose() * ad * l_inv_t_;
  b = 0.5 * (b - b.transpose());
  const Eigen::MatrixXcd h = cd(0, 1) * b.cast<cd>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw ConvergenceError("AdSpectrum: eigensolver failed");
  vecs_ = es.eigenvectors();
  z_ = cd(0, -1) * es.eigenvalues().cast<cd>();
}

Eigen::MatrixXd AdSpectrum::apply(const std::function<cd(cd)>& f) const {
  Eigen::VectorXcd fz(z_.size());
  for (Eigen::Index i = 0; i < z_.size(); ++i) fz(i) = f(z_(i));
  const Eigen::MatrixXcd fb = vecs_ * fz.asDiagonal() * vecs_.adjoint();
  const Eigen::MatrixXcd fa = l_inv_t_.cast<cd>() * fb * l_.transpose().cast<cd>();
  const Eigen::MatrixXd re = fa.real();
  const double im = fa.imag().norm();
  if (!(im <= 1e-12 * std::max(1.0, re.norm())))
    throw ConsistencyError("AdSpectrum: function value is not real (imaginary norm " +
                           std::to_string(im) + ")");
  return re;
}

Eigen::MatrixXd eval_spectral(const LieAlgebraSpec& g, const AdFunction& f, const AlgebraPoint& a) {
  const AdSpectrum spec(g, ad_matrix(g, a));
  return spec.apply([&f](cd z) { return scalar_value(f, z); });
}

Invertibility invertibility_of(const Eigen::MatrixXd& m) {
  Invertibility out;
  if (!m.allFinite()) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  out.condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  const double det = std::abs(m.determinant());
  out.invertible = smax > 0 && det > 1e-10 * std::pow(smax, static_cast<double>(m.rows()));
  return out;
}

Invertibility sinc_invertibility(const LieAlgebraSpec& g, const AlgebraPoint& a) {
  return invertibility_of(eval_spectral(g, AdFunction::named(AdKind::sinc), a));
}

}  // namespace liekahler
