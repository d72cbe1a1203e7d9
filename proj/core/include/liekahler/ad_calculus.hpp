#pragma once

// Analytic functions of ad(a): sin(ad a)/ad a, (cos(ad a) - Id)/ad a,
// cos(ad a) and ad(a) cot(ad a), by power series and by eigendecomposition.

#include "liekahler/lie_core.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace liekahler {

enum class AdKind { sinc, cosm1_over, cos, x_cot_x, custom };

const char* to_string(AdKind kind);

struct AdFunction {
  AdKind kind = AdKind::sinc;
  /// For kind == custom: f(t) = sum_j custom_series[j] t^(2j).
  std::vector<double> custom_series;

  static AdFunction named(AdKind k) { return {k, {}}; }
  static AdFunction custom(std::vector<double> coeffs) {
    return {AdKind::custom, std::move(coeffs)};
  }
};

/// The scalar function behind an AdFunction, with a Taylor branch for |z| < 1e-8.
std::complex<double> scalar_value(const AdFunction& f, std::complex<double> z);

struct SeriesOptions {
  double term_tol = 1e-16;
  int max_terms = 200;
};

struct SeriesResult {
  Eigen::MatrixXd value;
  int terms = 0;
  /// Norm of the last term added, relative to max(1, |value|).
  double last_term = 0.0;
};

/// Power series in ad(a); throws ConvergenceError if the cap is reached.
SeriesResult eval_series_detailed(const AdFunction& f, const Eigen::MatrixXd& ad,
                                  SeriesOptions opts = {});
Eigen::MatrixXd eval_series(const LieAlgebraSpec& g, const AdFunction& f, const AlgebraPoint& a,
                            SeriesOptions opts = {});

/// Spectral calculus for a gram-skew operator A.  With gram = L L^T the
/// matrix B = L^T A L^-T is skew and iB is Hermitian.
class AdSpectrum {
 public:
  AdSpectrum(const LieAlgebraSpec& g, const Eigen::MatrixXd& ad);

  /// Eigenvalues z of A (purely imaginary).
  const Eigen::VectorXcd& eigenvalues() const { return z_; }
  /// f(A) for f with real Taylor coefficients; throws ConsistencyError if the
  /// result is not real to 1e-12.
  Eigen::MatrixXd apply(const std::function<std::complex<double>(std::complex<double>)>& f) const;

 private:
  Eigen::MatrixXd l_;
  Eigen::MatrixXd l_inv_t_;
  Eigen::MatrixXcd vecs_;
  Eigen::VectorXcd z_;
};

Eigen::MatrixXd eval_spectral(const LieAlgebraSpec& g, const AdFunction& f, const AlgebraPoint& a);

struct Invertibility {
  bool invertible = false;
  double condition = 0.0;
};

/// Whether sin(ad a)/ad a is invertible; |det| > 1e-10 |S|^n.
Invertibility sinc_invertibility(const LieAlgebraSpec& g, const AlgebraPoint& a);

/// Shared regularity test for an n x n matrix.
Invertibility invertibility_of(const Eigen::MatrixXd& m);

}  // namespace liekahler
