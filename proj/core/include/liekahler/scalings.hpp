#pragma once

// Rescalings chi(a) = phi(|a|^2) a of the standard structure and their
// potentials F(a) = |a| chi(|a|) - Xi(|a|).

#include "liekahler/form_pair.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace liekahler {

struct ScalingFunction {
  std::string name;
  /// phi(y) and phi'(y), y = x^2.
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  /// Xi with Xi' = chi, Xi(0) = 0; numeric quadrature when absent.
  std::function<double(double)> xi;
  double domain_radius = std::numeric_limits<double>::infinity();

  double chi(double x) const { return x * phi(x * x); }
  /// chi'(x) = phi(x^2) + 2 x^2 phi'(x^2).
  double chi_prime(double x) const { return phi(x * x) + 2 * x * x * dphi(x * x); }
};

ScalingFunction identity_scaling();
/// phi(x^2) = arctan(x)/x; chi maps onto the open ball of radius pi/2.
ScalingFunction arctan_scaling();
/// phi(x^2) = sinh(x)/x, domain |a| <= 5.
ScalingFunction sinh_scaling();
/// phi(y) = sum_k coeffs[k] y^k.
ScalingFunction polynomial_scaling(std::vector<double> coeffs, std::string name = "polynomial");
/// "identity", "arctan" or "sinh".
ScalingFunction scaling_by_name(const std::string& name);
/// {"coeffs": [...]} (optionally "name", "domain_radius").
ScalingFunction scaling_from_json(const std::string& json_text);

AlgebraPoint chi_map(const ScalingFunction& sf, const LieAlgebraSpec& g, const AlgebraPoint& a);
/// phi Id + 2 phi' a (x) sharp a.
Eigen::MatrixXd dchi_at(const ScalingFunction& sf, const LieAlgebraSpec& g, const AlgebraPoint& a);

/// c = c_st(chi(a)) dchi, s = s_st(chi(a)) dchi; gamma(a) = exp(i chi(a)).
FormPair scaled_pair(AlgebraPtr g, const ScalingFunction& sf);

/// F(a) = |a| chi(|a|) - Xi(|a|).
double f_potential(const ScalingFunction& sf, const LieAlgebraSpec& g, const AlgebraPoint& a);
/// dF = chi'(|a|) sharp a.
Eigen::VectorXd f_potential_gradient(const ScalingFunction& sf, const LieAlgebraSpec& g,
                                     const AlgebraPoint& a);
/// Xi(x) by Gauss-Kronrod quadrature of chi, tolerance 1e-10.
double xi_by_quadrature(const ScalingFunction& sf, double x);

struct ScalingDomainReport {
  std::size_t samples = 0;
  double min_phi = 0.0;
  double min_abs_chi_prime = 0.0;
  /// Radii where phi <= 0 or chi' vanishes (sign change between samples).
  std::vector<double> violations;
  bool pass() const { return violations.empty(); }
};

/// Sampled check of phi > 0 and chi' != 0 on [0, radius]; global injectivity
/// of chi is not certified.
ScalingDomainReport check_scaling_domain(const ScalingFunction& sf, double radius,
                                         std::size_t samples = 1001);

/// chi(a) = phi(a, invariants(a)) a with the single invariant |a|^2;
/// the differential is taken by central differences.
struct InvariantRescaling {
  std::string name;
  std::function<double(const Eigen::VectorXd& a, const std::vector<double>& invariants)> phi;
  double fd_step = 1e-6;
};

std::vector<double> algebra_invariants(const LieAlgebraSpec& g, const AlgebraPoint& a);
FormPair invariant_scaled_pair(AlgebraPtr g, InvariantRescaling r);

}  // namespace liekahler
