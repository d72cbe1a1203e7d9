#pragma once

// Integration of phi = c + i s to gamma: A_g -> G^C and the polar map
// Pi(x, a) = x gamma(a).

#include "liekahler/jstruct.hpp"

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace liekahler {

struct GammaOptions {
  int steps = 1000;
  /// Also integrate with 2*steps and throw ConvergenceError if the results
  /// differ by more than halving_tol.
  bool check_halving = false;
  double halving_tol = 1e-6;
  /// Check that s stays regular at every step along the path.
  bool check_regularity = true;
  bool use_cache = true;
};

/// Fixed-step RK4 for gamma'(t) = Phi(t) gamma(t) along straight segments.
class GammaIntegrator {
 public:
  explicit GammaIntegrator(FormPair pair, GammaOptions opts = {});
  GammaIntegrator(FormPair pair, GroupElement base_value, GammaOptions opts = {});

  const FormPair& pair() const { return pair_; }
  const GroupElement& base_value() const { return base_; }
  const GammaOptions& options() const { return opts_; }

  /// gamma(a) along the ray t a, t in [0, 1].
  GroupElement operator()(const AlgebraPoint& a) const;
  /// Continues a solution with value `start` at p along the segment p -> q.
  Eigen::MatrixXcd segment(const Eigen::MatrixXcd& start, const AlgebraPoint& p,
                           const AlgebraPoint& q, int steps) const;

  std::size_t cache_size() const;

 private:
  Eigen::MatrixXcd integrate_ray(const AlgebraPoint& a, int steps) const;

  FormPair pair_;
  GroupElement base_;
  GammaOptions opts_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, Eigen::MatrixXcd> cache_;
};

GroupElement integrate_gamma(const FormPair& pair, const AlgebraPoint& a, GammaOptions opts = {});

/// |gamma along the ray - gamma along 0 -> waypoint -> a|_F. The default
/// waypoint is |a| e_1.
double path_independence_residual(const GammaIntegrator& gamma, const AlgebraPoint& a,
                                  std::optional<AlgebraPoint> waypoint = std::nullopt);

/// x gamma(a); x must be unitary.
GroupElement polar_map(const GammaIntegrator& gamma, const GroupElement& x, const AlgebraPoint& a);

/// max over frame directions xi of |dPi(J xi) - i dPi(xi)|_F.
double holomorphy_residual(const GammaIntegrator& gamma, const GroupElement& x,
                           const AlgebraPoint& a, FdOptions fd = {});

/// max |D^T omega(a') D - omega(a)| where D is the differential of
/// (x, a) -> (u, a'), x gamma(a) = u exp(i a').
double symplecto_residual(const GammaIntegrator& gamma, const AlgebraPoint& a, FdOptions fd = {});

/// gamma(a)^-1 z gamma(Ad_z^-1 a) z^-1.
Eigen::MatrixXcd quasi_equivariance_value(const GammaIntegrator& gamma, const GroupElement& z,
                                          const AlgebraPoint& a);
/// |q(a1) - q(a2)|_F.
double quasi_equivariance_residual(const GammaIntegrator& gamma, const GroupElement& z,
                                   const AlgebraPoint& a1, const AlgebraPoint& a2);

}  // namespace liekahler
