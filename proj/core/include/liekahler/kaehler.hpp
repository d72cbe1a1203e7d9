#pragma once

// Momentum map, symplectic form, Psi, the metric and the Kaehler verdict at
// the point (e, a) of G x A_g.

#include "liekahler/jstruct.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace liekahler {

/// mu(e, a) = sharp a.
Eigen::VectorXd momentum(const LieAlgebraSpec& g, const AlgebraPoint& a);

/// omega = -d<mu, theta_G> at (e, a), by numerical exterior derivative of the
/// tautological 1-form in the frame (left-invariant fields, fiber fields).
Eigen::MatrixXd symplectic_at(const LieAlgebraSpec& g, const AlgebraPoint& a, FdOptions fd = {});
/// Closed form [[B(a), gram], [-gram, 0]].
Eigen::MatrixXd symplectic_matrix(const LieAlgebraSpec& g, const AlgebraPoint& a);

/// max over 2n directions of |omega(X_P, .) - d<mu, X>|; the right side is
/// differentiated through the representation.
double momentum_condition_residual(const LieAlgebraSpec& g, const AlgebraPoint& a,
                                   const AlgebraPoint& x, FdOptions fd = {});

/// d^theta mu restricted to the fiber: V -> sharp(V + [a, c V]).
Eigen::MatrixXd dtheta_mu(const LieAlgebraSpec& g, const AlgebraPoint& a, const Eigen::MatrixXd& c);

struct PsiOperator {
  AlgebraPoint base;
  /// g -> g*: <X, Psi Y> = X^T matrix Y.
  Eigen::MatrixXd matrix;

  double asymmetry() const;
  double min_eigenvalue() const;
};

/// Psi = d^theta mu o s^-1.
PsiOperator psi_at(const FormPair& pair, const AlgebraPoint& a);

/// |d^theta mu - sharp cos(ad a)| for the standard pair at a fixed su(2)
/// point; psi_at throws ConsistencyError if this exceeds 1e-9.
double coadjoint_self_test();

using OneForm = std::function<Eigen::VectorXd(const AlgebraPoint&)>;

/// V -> a.c(V) and V -> a.s(V), as covectors.
OneForm mu_c_form(const FormPair& pair);
OneForm mu_s_form(const FormPair& pair);

/// max over basis pairs of |D_V beta(W) - D_W beta(V)| at one point.
double closedness_at(const OneForm& beta, const AlgebraPoint& a, FdOptions fd = {});
double closedness_residual(const OneForm& beta, const std::vector<AlgebraPoint>& sample,
                           FdOptions fd = {});

struct MetricTensor {
  AlgebraPoint base;
  Eigen::MatrixXd matrix;

  double asymmetry() const;
  /// Smallest eigenvalue of the symmetrized matrix.
  double min_eigenvalue() const;
};

/// g = <Psi theta, theta> + <L, d^theta mu> + <mu, [L, theta]>, checked against
/// omega(., J.); throws ConsistencyError if they differ by more than 1e-8.
MetricTensor metric_at(const FormPair& pair, const AlgebraPoint& a, FdOptions fd = {});
/// The assembly alone, without the consistency check.
Eigen::MatrixXd metric_assembly(const FormPair& pair, const AlgebraPoint& a);
/// omega(., J.) from symplectic_at and j_at.
MetricTensor metric_from_symplectic(const FormPair& pair, const AlgebraPoint& a, FdOptions fd = {});
/// The variant with <Psi^-1 d^theta mu, d^theta mu> in place of <L, d^theta mu>.
Eigen::MatrixXd metric_psi_inverse_form(const FormPair& pair, const AlgebraPoint& a);

enum class Verdict { KAHLER, PSEUDO_KAHLER, NOT_KAHLER, INADMISSIBLE, NON_INTEGRABLE };
const char* to_string(Verdict v);

struct VerdictOptions {
  FdOptions fd;
  double tau = 1e-5;
  double integrability_threshold = 1e-4;
  double spd_floor = 1e-10;
};

struct KaehlerReport {
  Verdict verdict = Verdict::NOT_KAHLER;
  std::size_t points = 0;
  std::map<std::string, double> residuals;
  std::vector<std::string> causes;
  /// Imaginary Maurer-Cartan part alone below the threshold.
  bool imaginary_part_integrable = false;
};

/// Closedness is compared per point against tau * max(1, |a|).
KaehlerReport kaehler_verdict(const FormPair& pair, const std::vector<AlgebraPoint>& sample,
                              VerdictOptions opts = {});

struct ScalarField {
  std::function<double(const AlgebraPoint&)> value;
  /// Optional analytic differential (covector); central differences otherwise.
  std::function<Eigen::VectorXd(const AlgebraPoint&)> gradient;
};

/// max over the sample of |dF - <mu, s>| in the dual gram norm.
double potential_residual(const FormPair& pair, const ScalarField& f,
                          const std::vector<AlgebraPoint>& sample, FdOptions fd = {});

}  // namespace liekahler
