#include "liekahler/ad_calculus.hpp"
#include "liekahler/errors.hpp"
#include "liekahler/kaehler.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace liekahler;

namespace {

std::vector<AlgebraPoint> points(const LieAlgebraSpec& g, int count, double radius, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::vector<AlgebraPoint> out;
  for (int i = 0; i < count; ++i) out.emplace_back(oracle::random_point(eng, g.dim(), radius));
  return out;
}

const AlgebraPoint kB0(Eigen::Vector3d(0.3, 0.5, -0.4));

}  // namespace

TEST(Kaehler, MomentumIsSharp) {
  const auto g = su2();
  EXPECT_EQ(momentum(*g, AlgebraPoint(Eigen::Vector3d(1, 2, 3))), Eigen::Vector3d(1, 2, 3));
}

TEST(Kaehler, SymplecticClosedFormMatchesFormulaAndExteriorDerivative) {
  for (const auto& g : {su2(), su3()}) {
    for (const auto& a : points(*g, 8, 2.0, 401)) {
      const Eigen::MatrixXd w = symplectic_matrix(*g, a);
      EXPECT_LT((w - oracle::omega_by_formula(*g, a.coords)).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LT((w + w.transpose()).norm(), 1e-14);
      EXPECT_LT((symplectic_at(*g, a) - w).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Kaehler, MomentumConditionHolds) {
  const auto g = su3();
  std::mt19937_64 eng(403);
  for (const auto& a : points(*g, 6, 2.0, 405)) {
    const AlgebraPoint x(oracle::random_point(eng, 8, 1.0));
    EXPECT_LE(momentum_condition_residual(*g, a, x), 1e-7);
  }
}

TEST(Kaehler, PsiOfStandardPairEqualsXCotX) {
  EXPECT_LE(coadjoint_self_test(), 1e-9);
  for (const auto& g : {su2(), so3(), su3()}) {
    const FormPair p = standard_pair(g);
    for (const auto& a : points(*g, 32, 2.0, 407)) {
      const Eigen::MatrixXd ad = oracle::ad_by_loops(*g, a.coords);
      const Eigen::MatrixXd expect = g->gram() * oracle::matrix_function(ad, oracle::xcotx);
      const PsiOperator psi = psi_at(p, a);
      EXPECT_LT((psi.matrix - expect).cwiseAbs().maxCoeff(), 1e-9);
      EXPECT_LE(psi.asymmetry(), 1e-9);
      EXPECT_GT(psi.min_eigenvalue(), 0.0);
    }
  }
}

TEST(Kaehler, DthetaMuOfStandardPairIsCos) {
  const auto g = su2();
  const AlgebraPoint a(Eigen::Vector3d(0.3, -1.2, 0.5));
  const Eigen::MatrixXd c = standard_pair(g).evaluate(a).c;
  EXPECT_LT((dtheta_mu(*g, a, c) - eval_series(*g, AdFunction::named(AdKind::cos), a)).norm(), 1e-12);
}

TEST(Kaehler, MetricGroupBlockAtUnitE3) {
  const auto g = su2();
  const MetricTensor m = metric_at(standard_pair(g), AlgebraPoint::basis(3, 2));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix.topLeftCorner(3, 3));
  const double coth1 = 1.0 / std::tanh(1.0);
  EXPECT_NEAR(es.eigenvalues()(0), 1.0, 1e-10);
  EXPECT_NEAR(es.eigenvalues()(1), coth1, 1e-10);
  EXPECT_NEAR(es.eigenvalues()(2), coth1, 1e-10);
}

TEST(Kaehler, MetricRoutesAgree) {
  for (const auto& g : {su2(), su3()}) {
    const FormPair p = standard_pair(g);
    for (const auto& a : points(*g, 8, 2.0, 409)) {
      const MetricTensor m = metric_at(p, a);
      EXPECT_LE(m.asymmetry(), 1e-9);
      const MetricTensor ref = metric_from_symplectic(p, a);
      EXPECT_LE((m.matrix - ref.matrix).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_LE((metric_psi_inverse_form(p, a) - m.matrix).cwiseAbs().maxCoeff(), 1e-9);
      // Independent route: omega from the entrywise formula and J from its block.
      const Eigen::MatrixXd oj = oracle::omega_by_formula(*g, a.coords) * j_at(p, a).block;
      EXPECT_LE((m.matrix - oj).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Kaehler, StandardMetricIsPositiveDefinite) {
  const auto g = su2();
  const FormPair p = standard_pair(g);
  double worst = 1e300;
  for (const auto& a : points(*g, 64, 2.0, 411)) worst = std::min(worst, metric_at(p, a).min_eigenvalue());
  EXPECT_GT(worst, 0.3);
}

TEST(Kaehler, ClosednessOfStandardForms) {
  const auto g = su3();
  const FormPair p = standard_pair(g);
  const auto sample = points(*g, 6, 2.0, 413);
  EXPECT_LE(closedness_residual(mu_c_form(p), sample), 1e-7);
  EXPECT_LE(closedness_residual(mu_s_form(p), sample), 1e-7);
}

TEST(Kaehler, ClosednessControlMatchesBracketTerm) {
  // For c_st + [b0,.] the extra term of d<mu,c>(V,W) is 2 V.[b0,W].
  const auto g = su2();
  const Eigen::MatrixXd adb = oracle::ad_by_loops(*g, kB0.coords);
  const double expect = 2.0 * adb.cwiseAbs().maxCoeff();
  const FormPair p = bracket_shift_pair(g, kB0);
  for (const auto& a : points(*g, 4, 1.5, 415)) EXPECT_NEAR(closedness_at(mu_c_form(p), a), expect, 1e-7);
}

TEST(Kaehler, VerdictForStandardPairIsKaehler) {
  for (const auto& g : {su2(), so3()}) {
    const KaehlerReport r = kaehler_verdict(standard_pair(g), points(*g, 16, 2.0, 417));
    EXPECT_EQ(r.verdict, Verdict::KAHLER) << to_string(r.verdict);
    EXPECT_TRUE(r.causes.empty());
    EXPECT_EQ(r.points, 16u);
  }
}

TEST(Kaehler, VerdictsForNegativeFixtures) {
  const auto g = su2();
  const auto sample = points(*g, 8, 2.0, 419);
  EXPECT_EQ(kaehler_verdict(perturbed_pair(g, 0.1), sample).verdict, Verdict::NON_INTEGRABLE);
  EXPECT_EQ(kaehler_verdict(bracket_shift_pair(g, kB0), sample).verdict, Verdict::NON_INTEGRABLE);
  const KaehlerReport twisted = kaehler_verdict(gauge_twisted_pair(g, kB0), sample);
  EXPECT_EQ(twisted.verdict, Verdict::NOT_KAHLER);
  EXPECT_NE(std::find(twisted.causes.begin(), twisted.causes.end(), "closedness_mu_c"), twisted.causes.end());
  Eigen::Matrix3d s = Eigen::Matrix3d::Identity();
  s(0, 0) = 0.0;
  EXPECT_EQ(kaehler_verdict(constant_pair(g, Eigen::Matrix3d::Zero(), s), sample).verdict,
            Verdict::INADMISSIBLE);
}

TEST(Kaehler, ConjugatePairGivesIndefiniteMetric) {
  const auto g = su2();
  const FormPair st = standard_pair(g);
  const FormPair conj(g, Provenance::custom, "conjugate", [st](const AlgebraPoint& a) {
    PairValue v = st.evaluate(a);
    v.s = -v.s;
    return v;
  });
  const KaehlerReport r = kaehler_verdict(conj, points(*g, 8, 2.0, 421));
  EXPECT_EQ(r.verdict, Verdict::PSEUDO_KAHLER) << to_string(r.verdict);
}

TEST(Kaehler, PotentialOfFlatPair) {
  const auto g = abelian(3);
  const FormPair p = constant_pair(g, Eigen::Matrix3d::Zero(), Eigen::Matrix3d::Identity());
  const auto sample = points(*g, 16, 2.0, 423);
  const ScalarField half{[](const AlgebraPoint& a) { return 0.5 * a.coords.squaredNorm(); }, {}};
  EXPECT_LE(potential_residual(p, half, sample), 1e-8);
  const ScalarField analytic{[](const AlgebraPoint& a) { return 0.5 * a.coords.squaredNorm(); },
                             [](const AlgebraPoint& a) { return Eigen::VectorXd(a.coords); }};
  EXPECT_LE(potential_residual(p, analytic, sample), 1e-15);
  const ScalarField wrong{[](const AlgebraPoint& a) { return a.coords.squaredNorm(); }, {}};
  EXPECT_GT(potential_residual(p, wrong, sample), 0.1);
}
