#include "liekahler/errors.hpp"
#include "liekahler/kaehler.hpp"
#include "liekahler/polar.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace liekahler;

namespace {

std::vector<AlgebraPoint> points(const LieAlgebraSpec& g, int count, double radius, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<AlgebraPoint> out;
  for (int i = 0; i < count; ++i) out.emplace_back(oracle::random_point(eng, g.dim(), radius));
  return out;
}

// exp(i a) through the representation, without the library exponential.
Eigen::MatrixXcd exp_i_oracle(const LieAlgebraSpec& g, const Eigen::VectorXd& a) {
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(g.rep_dim(), g.rep_dim());
  for (int k = 0; k < g.dim(); ++k) x += oracle::cd(0, a(k)) * g.rep_basis()[k];
  return oracle::expm_taylor(x);
}

const AlgebraPoint kB0(Eigen::Vector3d(0.3, 0.5, -0.4));

}  // namespace

TEST(Polar, StandardGammaIsExpIA) {
  for (const auto& g : {su2(), su3()}) {
    const GammaIntegrator gamma(standard_pair(g));
    for (const auto& a : points(*g, 6, 2.0, 501))
      EXPECT_LT((gamma(a).matrix - exp_i_oracle(*g, a.coords)).norm(), 1e-6);
  }
}

TEST(Polar, Rk4ErrorIsFourthOrder) {
  const auto g = su2();
  const AlgebraPoint a(Eigen::Vector3d(1.2, -0.8, 0.9));
  const Eigen::MatrixXcd exact = exp_i_oracle(*g, a.coords);
  for (int n : {8, 16, 32}) {
    GammaOptions o1, o2;
    o1.steps = n;
    o2.steps = 2 * n;
    const double e1 = (integrate_gamma(standard_pair(g), a, o1).matrix - exact).norm();
    const double e2 = (integrate_gamma(standard_pair(g), a, o2).matrix - exact).norm();
    EXPECT_GE(e1 / e2, 12.0) << n;
    EXPECT_LE(e1 / e2, 20.0) << n;
  }
}

TEST(Polar, GaugeTwistedGammaMatchesClosedForm) {
  const auto g = su2();
  const FormPair p = gauge_twisted_pair(g, kB0);
  const GammaIntegrator gamma(p);
  for (const auto& a : points(*g, 6, 2.0, 503))
    EXPECT_LT((gamma(a).matrix - (*p.gamma_formula())(a).matrix).norm(), 1e-6);
}

TEST(Polar, PathIndependence) {
  const auto g = su2();
  const GammaIntegrator st(standard_pair(g));
  const GammaIntegrator pe(perturbed_pair(g, 0.2));
  const AlgebraPoint a(Eigen::Vector3d(0.4, 1.1, -0.6));
  EXPECT_LE(path_independence_residual(st, a), 1e-6);
  EXPECT_GT(path_independence_residual(pe, a), 1e-3);
}

TEST(Polar, CacheReturnsIdenticalValues) {
  const auto g = su2();
  const GammaIntegrator gamma(standard_pair(g));
  const AlgebraPoint a(Eigen::Vector3d(0.1, 0.2, 0.3));
  EXPECT_EQ(gamma.cache_size(), 0u);
  const Eigen::MatrixXcd first = gamma(a).matrix;
  EXPECT_EQ(gamma.cache_size(), 1u);
  EXPECT_EQ(gamma(a).matrix, first);
  EXPECT_EQ(gamma.cache_size(), 1u);
  GammaOptions nc;
  nc.use_cache = false;
  const GammaIntegrator uncached(standard_pair(g), nc);
  EXPECT_EQ(uncached(a).matrix, first);
  EXPECT_EQ(uncached.cache_size(), 0u);
}

TEST(Polar, HalvingCheck) {
  const auto g = su2();
  GammaOptions o;
  o.check_halving = true;
  EXPECT_NO_THROW(integrate_gamma(standard_pair(g), AlgebraPoint(Eigen::Vector3d(1, 0, 0)), o));
  o.steps = 2;
  o.halving_tol = 1e-12;
  EXPECT_THROW(integrate_gamma(standard_pair(g), AlgebraPoint(Eigen::Vector3d(1.5, 1, 0)), o),
               ConvergenceError);
}

TEST(Polar, SingularPathIsRejected) {
  const auto g = su2();
  const FormPair p(g, Provenance::custom, "degenerate", [](const AlgebraPoint& a) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(3, 3);
    s(0, 0) = 1.0 - a.coords(0);
    return PairValue{Eigen::MatrixXd::Zero(3, 3), s};
  });
  EXPECT_THROW(integrate_gamma(p, AlgebraPoint(Eigen::Vector3d(2, 0, 0))), RegularityError);
}

TEST(Polar, PolarMapIsHolomorphic) {
  for (const auto& g : {su2(), su3()}) {
    const GammaIntegrator gamma(standard_pair(g));
    std::mt19937_64 eng(505);
    for (const auto& a : points(*g, 3, 2.0, 507)) {
      const GroupElement x =
          exp_c(*g, AlgebraPoint(oracle::random_point(eng, g->dim(), 2.0)), AlgebraPoint::zero(g->dim()));
      EXPECT_LE(holomorphy_residual(gamma, x, a), 1e-5);
    }
  }
}

TEST(Polar, PolarMapRequiresUnitaryX) {
  const auto g = su2();
  const GammaIntegrator gamma(standard_pair(g));
  const GroupElement p = exp_c(*g, AlgebraPoint::zero(3), AlgebraPoint::basis(3, 0));
  EXPECT_THROW(polar_map(gamma, p, AlgebraPoint::zero(3)), DomainError);
}

TEST(Polar, StandardPolarMapIsSymplectic) {
  const auto g = su2();
  const GammaIntegrator gamma(standard_pair(g));
  for (const auto& a : points(*g, 4, 2.0, 509)) EXPECT_LE(symplecto_residual(gamma, a), 1e-5);
}

TEST(Polar, TwistedSymplectoResidualMatchesClosednessDefect) {
  const auto g = su2();
  const FormPair p = gauge_twisted_pair(g, kB0);
  const GammaIntegrator gamma(p);
  const AlgebraPoint a(Eigen::Vector3d(0.01, -0.01, 0.005));
  const double analytic = 2.0 * oracle::ad_by_loops(*g, kB0.coords).cwiseAbs().maxCoeff();
  const double r = symplecto_residual(gamma, a);
  EXPECT_NEAR(r, analytic, 0.2 * analytic);
  EXPECT_NEAR(closedness_at(mu_c_form(p), a), analytic, 0.2 * analytic);
}

TEST(Polar, StandardGammaIsQuasiEquivariant) {
  const auto g = su3();
  const GammaIntegrator gamma(standard_pair(g));
  std::mt19937_64 eng(511);
  const GroupElement z = exp_c(*g, AlgebraPoint(oracle::random_point(eng, 8, 2.0)), AlgebraPoint::zero(8));
  const auto pts = points(*g, 3, 2.0, 513);
  EXPECT_LE(quasi_equivariance_residual(gamma, z, pts[0], pts[1]), 1e-6);
  EXPECT_LE(quasi_equivariance_residual(gamma, z, pts[1], pts[2]), 1e-6);
}

TEST(Polar, TwistedGammaIsNotQuasiEquivariant) {
  const auto g = su2();
  const GammaIntegrator gamma(gauge_twisted_pair(g, kB0));
  const GroupElement z = exp_c(*g, AlgebraPoint(Eigen::Vector3d(0.0, 0.0, 1.0)), AlgebraPoint::zero(3));
  EXPECT_GT(quasi_equivariance_residual(gamma, z, AlgebraPoint(Eigen::Vector3d(1, 0, 0)),
                                        AlgebraPoint(Eigen::Vector3d(0, 1, 0.5))),
            1e-3);
}
