#include "liekahler/polar.hpp"

#include "liekahler/ad_calculus.hpp"
#include "liekahler/errors.hpp"
#include "liekahler/kaehler.hpp"

#include <Eigen/LU>

#include <cstring>
#include <mutex>
#include <sstream>

namespace liekahler {

namespace {

using cd = std::complex<double>;

std::string cache_key(const AlgebraPoint& a, int steps) {
  std::string key(sizeof(int) + sizeof(double) * a.coords.size(), '\0');
  std::memcpy(key.data(), &steps, sizeof(int));
  std::memcpy(key.data() + sizeof(int), a.coords.data(), sizeof(double) * a.coords.size());
  return key;
}

}  // namespace

GammaIntegrator::GammaIntegrator(FormPair pair, GammaOptions opts)
    : GammaIntegrator(pair, GroupElement::identity(pair.algebra().rep_dim()), opts) {
  // Closed form at 0 when available; it is the identity for every shipped formula.
  if (pair_.gamma_formula()) base_ = (*pair_.gamma_formula())(AlgebraPoint::zero(pair_.algebra().dim()));
}

GammaIntegrator::GammaIntegrator(FormPair pair, GroupElement base_value, GammaOptions opts)
    : pair_(std::move(pair)), base_(std::move(base_value)), opts_(opts) {
  if (opts_.steps < 1) throw ConfigError("GammaIntegrator: steps must be positive");
  const int m = pair_.algebra().rep_dim();
  if (base_.matrix.rows() != m || base_.matrix.cols() != m)
    throw DimensionMismatch("GammaIntegrator: base value has wrong size");
}

Eigen::MatrixXcd GammaIntegrator::segment(const Eigen::MatrixXcd& start, const AlgebraPoint& p,
                                          const AlgebraPoint& q, int steps) const {
  const LieAlgebraSpec& g = pair_.algebra();
  require_same_dim(g, p, "GammaIntegrator::segment");
  require_same_dim(g, q, "GammaIntegrator::segment");
  const AlgebraPoint d = q - p;
  auto phi = [&](double t) {
    const AlgebraPoint x = p + t * d;
    const PairValue v = pair_.evaluate(x);
    if (opts_.check_regularity && !invertibility_of(v.s).invertible) {
      std::ostringstream os;
      os << "integrate_gamma: s loses regularity at t=" << t;
      throw RegularityError(os.str());
    }
    return represent(g, AlgebraPoint(v.c * d.coords), AlgebraPoint(v.s * d.coords));
  };
  Eigen::MatrixXcd y = start;
  const double h = 1.0 / steps;
  Eigen::MatrixXcd f0 = phi(0.0);
  for (int k = 0; k < steps; ++k) {
    const double t = k * h;
    const Eigen::MatrixXcd fm = phi(t + 0.5 * h);
    const Eigen::MatrixXcd f1 = phi(t + h);
    const Eigen::MatrixXcd k1 = f0 * y;
    const Eigen::MatrixXcd k2 = fm * (y + 0.5 * h * k1);
    const Eigen::MatrixXcd k3 = fm * (y + 0.5 * h * k2);
    const Eigen::MatrixXcd k4 = f1 * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    f0 = f1;
  }
  if (!y.allFinite()) throw ConvergenceError("integrate_gamma: non-finite result");
  return y;
}

Eigen::MatrixXcd GammaIntegrator::integrate_ray(const AlgebraPoint& a, int steps) const {
  return segment(base_.matrix, AlgebraPoint::zero(a.dim()), a, steps);
}

GroupElement GammaIntegrator::operator()(const AlgebraPoint& a) const {
  require_same_dim(pair_.algebra(), a, "integrate_gamma");
  if (!a.finite()) throw DomainError("integrate_gamma: non-finite point");
  if (a.coords.isZero(0.0)) return base_;
  const std::string key = cache_key(a, opts_.steps);
  if (opts_.use_cache) {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return {it->second, false};
  }
  Eigen::MatrixXcd y = integrate_ray(a, opts_.steps);
  if (opts_.check_halving) {
    const Eigen::MatrixXcd y2 = integrate_ray(a, 2 * opts_.steps);
    const double diff = (y - y2).norm();
    if (!(diff <= opts_.halving_tol)) {
      std::ostringstream os;
      os << "integrate_gamma: step halving changed the result by " << diff;
      throw ConvergenceError(os.str());
    }
  }
  if (opts_.use_cache) {
    std::unique_lock lock(mutex_);
    cache_[key] = y;
  }
  return {y, false};
}

std::size_t GammaIntegrator::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

GroupElement integrate_gamma(const FormPair& pair, const AlgebraPoint& a, GammaOptions opts) {
  opts.use_cache = false;
  return GammaIntegrator(pair, opts)(a);
}

double path_independence_residual(const GammaIntegrator& gamma, const AlgebraPoint& a,
                                  std::optional<AlgebraPoint> waypoint) {
  const LieAlgebraSpec& g = gamma.pair().algebra();
  const int n = g.dim();
  const AlgebraPoint w = waypoint ? *waypoint : norm(g, a) * AlgebraPoint::basis(n, 0);
  const int steps = gamma.options().steps;
  const Eigen::MatrixXcd ray = gamma.segment(gamma.base_value().matrix, AlgebraPoint::zero(n), a, steps);
  const Eigen::MatrixXcd first = gamma.segment(gamma.base_value().matrix, AlgebraPoint::zero(n), w, steps);
  const Eigen::MatrixXcd two = gamma.segment(first, w, a, steps);
  return (ray - two).norm();
}

GroupElement polar_map(const GammaIntegrator& gamma, const GroupElement& x, const AlgebraPoint& a) {
  if (!x.real_form || unitarity_residual(x.matrix) > 1e-10)
    throw DomainError("polar_map: x must lie in G");
  return {x.matrix * gamma(a).matrix, false};
}

double holomorphy_residual(const GammaIntegrator& gamma, const GroupElement& x,
                           const AlgebraPoint& a, FdOptions fd) {
  const LieAlgebraSpec& g = gamma.pair().algebra();
  const int n = g.dim();
  const AlgebraPoint zero = AlgebraPoint::zero(n);
  const Eigen::MatrixXcd ga = gamma(a).matrix;
  std::vector<Eigen::MatrixXcd> dpi(2 * n);
  for (int k = 0; k < n; ++k) {
    const AlgebraPoint u = AlgebraPoint::basis(n, k);
    const Eigen::MatrixXcd p = x.matrix * exp_c(g, fd.h * u, zero).matrix * ga;
    const Eigen::MatrixXcd m = x.matrix * exp_c(g, -fd.h * u, zero).matrix * ga;
    dpi[k] = (p - m) / (2 * fd.h);
  }
  for (int k = 0; k < n; ++k) {
    const AlgebraPoint v = AlgebraPoint::basis(n, k);
    dpi[n + k] = x.matrix * (gamma(a + fd.h * v).matrix - gamma(a - fd.h * v).matrix) / (2 * fd.h);
  }
  const Eigen::MatrixXd j = j_at(gamma.pair(), a).block;
  double r = 0.0;
  for (int xi = 0; xi < 2 * n; ++xi) {
    Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Zero(ga.rows(), ga.cols());
    for (int k = 0; k < 2 * n; ++k) lhs += j(k, xi) * dpi[k];
    r = std::max(r, (lhs - cd(0, 1) * dpi[xi]).norm());
  }
  return r;
}

double symplecto_residual(const GammaIntegrator& gamma, const AlgebraPoint& a, FdOptions fd) {
  const LieAlgebraSpec& g = gamma.pair().algebra();
  const int n = g.dim();
  const AlgebraPoint zero = AlgebraPoint::zero(n);
  const Eigen::MatrixXcd ga = gamma(a).matrix;
  const PolarDecomposition p0 = polar_decompose(g, {ga, false});
  const Eigen::MatrixXcd u0inv = p0.unitary.matrix.adjoint();
  Eigen::MatrixXd d(2 * n, 2 * n);
  auto column = [&](const Eigen::MatrixXcd& plus, const Eigen::MatrixXcd& minus) {
    const PolarDecomposition pp = polar_decompose(g, {plus, false});
    const PolarDecomposition pm = polar_decompose(g, {minus, false});
    Eigen::VectorXd col(2 * n);
    col.head(n) = g.coordinates_of(u0inv * (pp.unitary.matrix - pm.unitary.matrix) / (2 * fd.h));
    col.tail(n) = (pp.fiber.coords - pm.fiber.coords) / (2 * fd.h);
    return col;
  };
  for (int k = 0; k < n; ++k) {
    const AlgebraPoint u = AlgebraPoint::basis(n, k);
    d.col(k) = column(exp_c(g, fd.h * u, zero).matrix * ga, exp_c(g, -fd.h * u, zero).matrix * ga);
  }
  for (int k = 0; k < n; ++k) {
    const AlgebraPoint v = AlgebraPoint::basis(n, k);
    d.col(n + k) = column(gamma(a + fd.h * v).matrix, gamma(a - fd.h * v).matrix);
  }
  const Eigen::MatrixXd pulled = d.transpose() * symplectic_matrix(g, p0.fiber) * d;
  return (pulled - symplectic_matrix(g, a)).cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd quasi_equivariance_value(const GammaIntegrator& gamma, const GroupElement& z,
                                          const AlgebraPoint& a) {
  const LieAlgebraSpec& g = gamma.pair().algebra();
  if (!z.real_form || unitarity_residual(z.matrix) > 1e-10)
    throw DomainError("quasi_equivariance: z must lie in G");
  const GroupElement zinv = z.inverse();
  const AlgebraPoint b = adjoint_action(g, zinv, a);
  const Eigen::MatrixXcd twisted = z.matrix * gamma(b).matrix * zinv.matrix;
  return gamma(a).matrix.inverse() * twisted;
}

double quasi_equivariance_residual(const GammaIntegrator& gamma, const GroupElement& z,
                                   const AlgebraPoint& a1, const AlgebraPoint& a2) {
  return (quasi_equivariance_value(gamma, z, a1) - quasi_equivariance_value(gamma, z, a2)).norm();
}

}  // namespace liekahler
