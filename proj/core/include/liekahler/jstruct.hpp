#pragma once

// The almost complex structure J determined by a pair (c, s), and three
// independent integrability tests.

#include "liekahler/form_pair.hpp"

#include <vector>

namespace liekahler {

/// Tangent vector at (e, a): u is the left-trivialized group direction, v the
/// fiber direction.
struct TangentPair {
  AlgebraPoint u;
  AlgebraPoint v;
};

struct JOperator {
  AlgebraPoint base;
  /// 2n x 2n, acting on the stacked coordinates (u, v).
  Eigen::MatrixXd block;

  TangentPair apply(const TangentPair& x) const;
  /// max |J^2 + Id|.
  double square_residual() const;
};

struct FdOptions {
  double h = 1e-4;
  /// Re-evaluate at h/2 and throw CancellationError if the residual grows
  /// more than tenfold.
  bool detect_cancellation = true;
};

/// J(u,v) = (-s v - c w, w) with w = s^-1 (u + c v).
/// Throws RegularityError if cond(s) >= 1e8.
JOperator j_at(const FormPair& pair, const AlgebraPoint& a);
JOperator j_from_value(const PairValue& value, const AlgebraPoint& a);

/// Gram norm sqrt(x^T G x).
double gram_norm(const LieAlgebraSpec& g, const Eigen::VectorXd& x);

struct MaurerCartanResidual {
  double real_part = 0.0;
  double imag_part = 0.0;
};

/// max over basis pairs of the gram norms of Re/Im of
/// d phi(V,W) - [phi V, phi W], evaluated in the complex matrix representation.
MaurerCartanResidual maurer_cartan_residual(const FormPair& pair, const AlgebraPoint& a,
                                            FdOptions fd = {});

struct SplitResidual {
  double curvature = 0.0;
  double covariant = 0.0;
};

/// curvature: dc - [cV,cW] + [sV,sW]; covariant: ds - [cV,sW] + [cW,sV].
SplitResidual split_integrability_residuals(const FormPair& pair, const AlgebraPoint& a,
                                            FdOptions fd = {});

/// max over frame pairs of the gram norm of the Nijenhuis tensor.
double nijenhuis_residual(const FormPair& pair, const AlgebraPoint& a, FdOptions fd = {});

struct AdmissibilityFailure {
  AlgebraPoint point;
  /// |det s| / |s|^n.
  double det_ratio = 0.0;
};

struct AdmissibilityReport {
  std::size_t points = 0;
  std::vector<AdmissibilityFailure> failures;
  bool pass() const { return points > 0 && failures.empty(); }
};

/// |det s| / |s|_2^n (0 for non-finite or zero s).
double det_ratio(const Eigen::MatrixXd& s);

/// det s(a) != 0 at every sample point (|det| > 1e-10 |s|^n).
AdmissibilityReport admissibility_check(const FormPair& pair, const std::vector<AlgebraPoint>& sample);

}  // namespace liekahler
