#include "liekahler/jstruct.hpp"

#include "liekahler/ad_calculus.hpp"
#include "liekahler/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace liekahler {

namespace {

using cd = std::complex<double>;

constexpr double kMaxCondition = 1e8;

// Applies the cancellation detector to a residual functional of h.
template <class F>
auto with_cancellation_check(FdOptions fd, F&& f, const char* what) {
  auto r = f(fd.h);
  if (!fd.detect_cancellation) return r;
  auto r2 = f(0.5 * fd.h);
  const double a = r.max_value(), b = r2.max_value();
  if (b > 10.0 * a && b > 1e-12) {
    std::ostringstream os;
    os << what << ": residual grew from " << a << " to " << b << " when halving h=" << fd.h;
    throw CancellationError(os.str());
  }
  return r;
}

struct Scalar {
  double v;
  double max_value() const { return v; }
};
struct Pair2 {
  double x, y;
  double max_value() const { return std::max(x, y); }
};

// Directional derivative of (c, s) along e_dir by central differences.
PairValue pair_derivative(const FormPair& pair, const AlgebraPoint& a, int dir, double h) {
  AlgebraPoint ap = a, am = a;
  ap.coords(dir) += h;
  am.coords(dir) -= h;
  const PairValue p = pair.evaluate(ap);
  const PairValue m = pair.evaluate(am);
  return {(p.c - m.c) / (2 * h), (p.s - m.s) / (2 * h)};
}

}  // namespace

double gram_norm(const LieAlgebraSpec& g, const Eigen::VectorXd& x) {
  return std::sqrt(std::max(0.0, x.dot(g.gram() * x)));
}

TangentPair JOperator::apply(const TangentPair& x) const {
  const Eigen::Index n = base.coords.size();
  Eigen::VectorXd in(2 * n);
  in << x.u.coords, x.v.coords;
  const Eigen::VectorXd out = block * in;
  return {AlgebraPoint(out.head(n)), AlgebraPoint(out.tail(n))};
}

double JOperator::square_residual() const {
  const Eigen::Index m = block.rows();
  return (block * block + Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
}

JOperator j_from_value(const PairValue& value, const AlgebraPoint& a) {
  const Eigen::Index n = value.s.rows();
  const Invertibility inv = invertibility_of(value.s);
  if (!inv.invertible || !(inv.condition < kMaxCondition)) {
    std::ostringstream os;
    os << "j_at: s(a) is singular (condition " << inv.condition << ")";
    throw RegularityError(os.str());
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(value.s);
  const Eigen::MatrixXd sinv = lu.inverse();
  JOperator j;
  j.base = a;
  j.block.resize(2 * n, 2 * n);
  j.block.topLeftCorner(n, n) = -value.c * sinv;
  j.block.topRightCorner(n, n) = -value.s - value.c * sinv * value.c;
  j.block.bottomLeftCorner(n, n) = sinv;
  j.block.bottomRightCorner(n, n) = sinv * value.c;
  return j;
}

JOperator j_at(const FormPair& pair, const AlgebraPoint& a) {
  return j_from_value(pair.evaluate(a), a);
}

MaurerCartanResidual maurer_cartan_residual(const FormPair& pair, const AlgebraPoint& a,
                                            FdOptions fd) {
  const LieAlgebraSpec& g = pair.algebra();
  const int n = g.dim();
  const PairValue at = pair.evaluate(a);
  // Phi(e_k) as complex matrices in the representation.
  std::vector<Eigen::MatrixXcd> phi(n);
  for (int k = 0; k < n; ++k)
    phi[k] = represent(g, AlgebraPoint(at.c.col(k)), AlgebraPoint(at.s.col(k)));

  auto eval = [&](double h) {
    std::vector<PairValue> d(n);
    for (int k = 0; k < n; ++k) d[k] = pair_derivative(pair, a, k, h);
    Pair2 r{0.0, 0.0};
    for (int v = 0; v < n; ++v)
      for (int w = v + 1; w < n; ++w) {
        const Eigen::VectorXd dc = d[v].c.col(w) - d[w].c.col(v);
        const Eigen::VectorXd ds = d[v].s.col(w) - d[w].s.col(v);
        const Eigen::MatrixXcd m = represent(g, AlgebraPoint(dc), AlgebraPoint(ds)) -
                                   (phi[v] * phi[w] - phi[w] * phi[v]);
        const Eigen::MatrixXcd skew = 0.5 * (m - m.adjoint());
        const Eigen::MatrixXcd herm = cd(0, -0.5) * (m + m.adjoint());
        r.x = std::max(r.x, gram_norm(g, g.coordinates_of(skew)));
        r.y = std::max(r.y, gram_norm(g, g.coordinates_of(herm)));
      }
    return r;
  };
  const Pair2 r = with_cancellation_check(fd, eval, "maurer_cartan_residual");
  return {r.x, r.y};
}

SplitResidual split_integrability_residuals(const FormPair& pair, const AlgebraPoint& a,
                                            FdOptions fd) {
  const LieAlgebraSpec& g = pair.algebra();
  const int n = g.dim();
  const PairValue at = pair.evaluate(a);
  auto br = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return bracket(g, AlgebraPoint(x), AlgebraPoint(y)).coords;
  };
  auto eval = [&](double h) {
    std::vector<PairValue> d(n);
    for (int k = 0; k < n; ++k) d[k] = pair_derivative(pair, a, k, h);
    Pair2 r{0.0, 0.0};
    for (int v = 0; v < n; ++v)
      for (int w = v + 1; w < n; ++w) {
        const auto cv = at.c.col(v), cw = at.c.col(w), sv = at.s.col(v), sw = at.s.col(w);
        const Eigen::VectorXd curv =
            d[v].c.col(w) - d[w].c.col(v) - br(cv, cw) + br(sv, sw);
        const Eigen::VectorXd cov =
            d[v].s.col(w) - d[w].s.col(v) - br(cv, sw) + br(cw, sv);
        r.x = std::max(r.x, gram_norm(g, curv));
        r.y = std::max(r.y, gram_norm(g, cov));
      }
    return r;
  };
  const Pair2 r = with_cancellation_check(fd, eval, "split_integrability_residuals");
  return {r.x, r.y};
}

double nijenhuis_residual(const FormPair& pair, const AlgebraPoint& a, FdOptions fd) {
  const LieAlgebraSpec& g = pair.algebra();
  const int n = g.dim();
  const int m = 2 * n;
  const Eigen::MatrixXd j = j_at(pair, a).block;

  // Frame brackets: only group-group pairs are nonzero.
  auto frame_bracket = [&](int k, int l) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    if (k < n && l < n)
      for (int q = 0; q < n; ++q) out(q) = g.structure_constant(k, l, q);
    return out;
  };
  // [X, Y] for fields with coefficient vectors x, y and fiber derivative
  // tables dx[j], dy[j] (derivative of the coefficients along d/da_j).
  auto field_bracket = [&](const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& dx,
                           const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& dy) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        if (x(k) != 0.0 && y(l) != 0.0) out += x(k) * y(l) * frame_bracket(k, l);
    for (int q = 0; q < n; ++q) out += x(n + q) * dy[q] - y(n + q) * dx[q];
    return out;
  };

  auto eval = [&](double h) {
    std::vector<Eigen::MatrixXd> dj(n);
    for (int q = 0; q < n; ++q) {
      AlgebraPoint ap = a, am = a;
      ap.coords(q) += h;
      am.coords(q) -= h;
      dj[q] = (j_at(pair, ap).block - j_at(pair, am).block) / (2 * h);
    }
    const std::vector<Eigen::VectorXd> zero(n, Eigen::VectorXd::Zero(m));
    Scalar r{0.0};
    for (int p = 0; p < m; ++p)
      for (int q = p + 1; q < m; ++q) {
        const Eigen::VectorXd ep = Eigen::VectorXd::Unit(m, p), eq = Eigen::VectorXd::Unit(m, q);
        const Eigen::VectorXd jp = j.col(p), jq = j.col(q);
        std::vector<Eigen::VectorXd> djp(n), djq(n);
        for (int k = 0; k < n; ++k) {
          djp[k] = dj[k].col(p);
          djq[k] = dj[k].col(q);
        }
        const Eigen::VectorXd nij = field_bracket(jp, djp, jq, djq) -
                                    j * field_bracket(jp, djp, eq, zero) -
                                    j * field_bracket(ep, zero, jq, djq) -
                                    field_bracket(ep, zero, eq, zero);
        r.v = std::max(r.v, std::hypot(gram_norm(g, nij.head(n)), gram_norm(g, nij.tail(n))));
      }
    return r;
  };
  return with_cancellation_check(fd, eval, "nijenhuis_residual").v;
}

double det_ratio(const Eigen::MatrixXd& s) {
  if (!s.allFinite()) return 0.0;
  const double scale = std::pow(s.operatorNorm(), static_cast<double>(s.rows()));
  return scale > 0 ? std::abs(s.determinant()) / scale : 0.0;
}

AdmissibilityReport admissibility_check(const FormPair& pair,
                                        const std::vector<AlgebraPoint>& sample) {
  if (sample.empty()) throw ConfigError("admissibility_check: empty sample");
  AdmissibilityReport rep;
  rep.points = sample.size();
  for (const auto& a : sample) {
    const double ratio = det_ratio(pair.evaluate(a).s);
    if (!(ratio > 1e-10)) rep.failures.push_back({a, ratio});
  }
  return rep;
}

}  // namespace liekahler
