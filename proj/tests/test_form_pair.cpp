#include "liekahler/errors.hpp"
#include "liekahler/form_pair.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace liekahler;
using oracle::cd;

namespace {

FormPair linear_pair(AlgebraPtr g) {
  return FormPair(g, Provenance::custom, "linear", [g](const AlgebraPoint& a) {
    const int n = g->dim();
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
    s.diagonal() += 0.1 * a.coords;
    return PairValue{oracle::ad_by_loops(*g, a.coords), s};
  });
}

}  // namespace

TEST(FormPair, StandardPairMatchesEigenOracle) {
  std::mt19937_64 eng(201);
  for (const auto& g : {su2(), su3()}) {
    const FormPair p = standard_pair(g);
    EXPECT_EQ(p.provenance(), Provenance::standard);
    for (int t = 0; t < 16; ++t) {
      const Eigen::VectorXd a = oracle::random_point(eng, g->dim(), 2.0);
      const Eigen::MatrixXd ad = oracle::ad_by_loops(*g, a);
      const PairValue v = p.evaluate(AlgebraPoint(a));
      EXPECT_LT((v.c - oracle::matrix_function(ad, oracle::cosm1_over)).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((v.s - oracle::matrix_function(ad, oracle::sinc)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(FormPair, StandardPairAtOriginIsZeroAndIdentity) {
  const PairValue v = standard_pair(su3()).evaluate(AlgebraPoint::zero(8));
  EXPECT_EQ(v.c.norm(), 0.0);
  EXPECT_EQ(v.s, Eigen::MatrixXd::Identity(8, 8));
}

TEST(FormPair, PerturbedAndShiftedFixtures) {
  const auto g = su2();
  const AlgebraPoint a(Eigen::Vector3d(0.5, -0.2, 0.9));
  const AlgebraPoint b0(Eigen::Vector3d(0.3, 0.5, -0.4));
  const PairValue st = standard_pair(g).evaluate(a);
  const Eigen::MatrixXd ad = oracle::ad_by_loops(*g, a.coords);
  const PairValue pe = perturbed_pair(g, 0.1).evaluate(a);
  EXPECT_LT((pe.c - st.c - 0.1 * ad * ad).norm(), 1e-14);
  EXPECT_LT((pe.s - st.s).norm(), 1e-15);
  const PairValue sh = bracket_shift_pair(g, b0).evaluate(a);
  EXPECT_LT((sh.c - st.c - oracle::ad_by_loops(*g, b0.coords)).norm(), 1e-14);
  EXPECT_LT((sh.s - st.s).norm(), 1e-15);
}

TEST(FormPair, GaugeTwistedPairAtOrigin) {
  const auto g = su2();
  const AlgebraPoint b0(Eigen::Vector3d(0.3, 0.5, -0.4));
  const FormPair p = gauge_twisted_pair(g, b0);
  const PairValue v = p.evaluate(AlgebraPoint::zero(3));
  EXPECT_LT((v.c - oracle::ad_by_loops(*g, b0.coords)).norm(), 1e-14);
  EXPECT_LT((v.s - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-14);
  ASSERT_TRUE(p.gamma_formula().has_value());
  EXPECT_LT(((*p.gamma_formula())(AlgebraPoint::zero(3)).matrix - Eigen::MatrixXcd::Identity(2, 2)).norm(),
            1e-15);
}

TEST(FormPair, GaugeTwistedSIsAdjointConjugateOfStandard) {
  const auto g = su2();
  const AlgebraPoint b0(Eigen::Vector3d(0.3, 0.5, -0.4));
  const AlgebraPoint a(Eigen::Vector3d(-0.7, 0.4, 1.1));
  const Eigen::VectorXd x = oracle::ad_by_loops(*g, b0.coords) * a.coords;
  const Eigen::MatrixXd e = oracle::matrix_function(oracle::ad_by_loops(*g, x), [](cd z) { return std::exp(z); });
  const PairValue v = gauge_twisted_pair(g, b0).evaluate(a);
  EXPECT_LT((v.s - e * standard_pair(g).evaluate(a).s).norm(), 1e-12);
}

TEST(FormPair, EvaluatorShapeIsChecked) {
  const auto g = su2();
  const FormPair bad(g, Provenance::custom, "bad", [](const AlgebraPoint&) {
    return PairValue{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(3, 3)};
  });
  EXPECT_THROW(bad.evaluate(AlgebraPoint::zero(3)), DimensionMismatch);
  EXPECT_THROW(standard_pair(g).evaluate(AlgebraPoint::zero(8)), DimensionMismatch);
  EXPECT_THROW(FormPair(nullptr, Provenance::custom, "x", {}), ConfigError);
}

TEST(FormPair, TabulatedRoundTripReproducesNodes) {
  const auto g = su2();
  const FormPair st = standard_pair(g);
  const std::vector<double> axis{-1.0, -0.25, 0.5, 1.0};
  const FormPair tab = tabulated_pair_from_json(g, tabulate_pair_json(st, {axis, axis, axis}));
  EXPECT_EQ(tab.provenance(), Provenance::custom);
  for (double x : axis)
    for (double z : axis) {
      const AlgebraPoint a(Eigen::Vector3d(x, 0.5, z));
      EXPECT_EQ(tab.evaluate(a).c, st.evaluate(a).c);
      EXPECT_EQ(tab.evaluate(a).s, st.evaluate(a).s);
    }
}

TEST(FormPair, TabulatedInterpolationIsExactForLinearFields) {
  const auto g = su2();
  const FormPair lin = linear_pair(g);
  const std::vector<double> axis{-1.0, 0.0, 1.0};
  const FormPair tab = tabulated_pair_from_json(g, tabulate_pair_json(lin, {axis, axis, axis}));
  std::mt19937_64 eng(203);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    const AlgebraPoint a(Eigen::Vector3d(u(eng), u(eng), u(eng)));
    EXPECT_LT((tab.evaluate(a).c - lin.evaluate(a).c).norm(), 1e-14);
    EXPECT_LT((tab.evaluate(a).s - lin.evaluate(a).s).norm(), 1e-14);
  }
  EXPECT_THROW(tab.evaluate(AlgebraPoint(Eigen::Vector3d(1.5, 0, 0))), DomainError);
}

TEST(FormPair, TabulatedRejectsMalformedInput) {
  const auto g = su2();
  EXPECT_THROW(tabulated_pair_from_json(g, "not json"), ConfigError);
  EXPECT_THROW(tabulated_pair_from_json(g, R"({"points":[],"c_matrices":[],"s_matrices":[]})"), ConfigError);
  // Two points on a 3d grid with a missing corner.
  const std::string id = "[[1,0,0],[0,1,0],[0,0,1]]";
  const std::string text = R"({"points":[[0,0,0],[1,0,0],[0,1,0]],"c_matrices":[)" + id + "," + id + "," +
                           id + R"(],"s_matrices":[)" + id + "," + id + "," + id + "]}";
  EXPECT_THROW(tabulated_pair_from_json(g, text), ConfigError);
  EXPECT_THROW(tabulate_pair_json(standard_pair(g), {{0.0}, {0.0}}), DimensionMismatch);
}
