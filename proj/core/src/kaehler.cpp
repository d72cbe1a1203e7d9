#include "liekahler/kaehler.hpp"

#include "liekahler/ad_calculus.hpp"
#include "liekahler/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <mutex>
#include <sstream>

namespace liekahler {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double min_sym_eigenvalue(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void ensure_self_test() {
  static std::once_flag once;
  static double residual = 0.0;
  std::call_once(once, [] { residual = coadjoint_self_test(); });
  if (!(residual <= 1e-9))
    throw ConsistencyError("coadjoint sign self-test failed: residual " + std::to_string(residual));
}

}  // namespace

Eigen::VectorXd momentum(const LieAlgebraSpec& g, const AlgebraPoint& a) { return sharp(g, a); }

Eigen::MatrixXd symplectic_matrix(const LieAlgebraSpec& g, const AlgebraPoint& a) {
  const int n = g.dim();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  w.topLeftCorner(n, n) = bracket_pairing(g, a);
  w.topRightCorner(n, n) = g.gram();
  w.bottomLeftCorner(n, n) = -g.gram();
  return w;
}

Eigen::MatrixXd symplectic_at(const LieAlgebraSpec& g, const AlgebraPoint& a, FdOptions fd) {
  require_same_dim(g, a, "symplectic_at");
  const int n = g.dim();
  const int m = 2 * n;
  // Theta(F_k) as a function of a: a.e_k on group fields, 0 on fiber fields.
  auto theta = [&](const AlgebraPoint& p) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(m);
    t.head(n) = g.gram() * p.coords;
    return t;
  };
  // F_p(Theta(F_q)): group fields do not see a, fiber fields differentiate.
  Eigen::MatrixXd deriv = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < n; ++j) {
    AlgebraPoint ap = a, am = a;
    ap.coords(j) += fd.h;
    am.coords(j) -= fd.h;
    deriv.row(n + j) = ((theta(ap) - theta(am)) / (2 * fd.h)).transpose();
  }
  const Eigen::VectorXd t0 = theta(a);
  Eigen::MatrixXd w(m, m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      double frame = 0.0;
      if (p < n && q < n)
        for (int k = 0; k < n; ++k) frame += g.structure_constant(p, q, k) * t0(k);
      w(p, q) = -(deriv(p, q) - deriv(q, p) - frame);
    }
  return w;
}

double momentum_condition_residual(const LieAlgebraSpec& g, const AlgebraPoint& a,
                                   const AlgebraPoint& x, FdOptions fd) {
  require_same_dim(g, x, "momentum_condition_residual");
  const int n = g.dim();
  const Eigen::MatrixXd w = symplectic_at(g, a, fd);
  Eigen::VectorXd xp = Eigen::VectorXd::Zero(2 * n);
  xp.head(n) = x.coords;
  const Eigen::VectorXd lhs = w.transpose() * xp;  // xi -> omega(X_P, xi)

  // <mu, X>(x, a) = (Ad_x a).X, differentiated along (exp(t u), a + t v).
  const Eigen::MatrixXcd ra = represent(g, a);
  const AlgebraPoint zero = AlgebraPoint::zero(n);
  auto pairing = [&](const Eigen::MatrixXcd& z, const Eigen::MatrixXcd& rb) {
    const Eigen::MatrixXcd m = z * rb * z.inverse();
    return dot(g, AlgebraPoint(g.coordinates_of(m)), x);
  };
  double r = 0.0;
  for (int k = 0; k < 2 * n; ++k) {
    double rhs;
    if (k < n) {
      const AlgebraPoint u = AlgebraPoint::basis(n, k);
      const Eigen::MatrixXcd zp = exp_c(g, fd.h * u, zero).matrix;
      const Eigen::MatrixXcd zm = exp_c(g, -fd.h * u, zero).matrix;
      rhs = (pairing(zp, ra) - pairing(zm, ra)) / (2 * fd.h);
    } else {
      const AlgebraPoint v = AlgebraPoint::basis(n, k - n);
      const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(g.rep_dim(), g.rep_dim());
      rhs = (pairing(id, represent(g, a + fd.h * v)) - pairing(id, represent(g, a - fd.h * v))) /
            (2 * fd.h);
    }
    r = std::max(r, std::abs(lhs(k) - rhs));
  }
  return r;
}

Eigen::MatrixXd dtheta_mu(const LieAlgebraSpec& g, const AlgebraPoint& a, const Eigen::MatrixXd& c) {
  const int n = g.dim();
  // sharp V + sharp [c V, a]^-, with [x, y]^- = -[x, y].
  return g.gram() * (Eigen::MatrixXd::Identity(n, n) + ad_matrix(g, a) * c);
}

double coadjoint_self_test() {
  const AlgebraPtr g = su2();
  AlgebraPoint a(Eigen::Vector3d(0.3, -0.5, 0.7));
  const PairValue st = standard_pair(g).evaluate(a);
  const Eigen::MatrixXd expected =
      g->gram() * eval_series(*g, AdFunction::named(AdKind::cos), a);
  return max_abs(dtheta_mu(*g, a, st.c) - expected);
}

double PsiOperator::asymmetry() const { return max_abs(matrix - matrix.transpose()); }
double PsiOperator::min_eigenvalue() const { return min_sym_eigenvalue(matrix); }

PsiOperator psi_at(const FormPair& pair, const AlgebraPoint& a) {
  ensure_self_test();
  const PairValue v = pair.evaluate(a);
  const Invertibility inv = invertibility_of(v.s);
  if (!inv.invertible) throw RegularityError("psi_at: s(a) is singular");
  const Eigen::MatrixXd d = dtheta_mu(pair.algebra(), a, v.c);
  const Eigen::MatrixXd psi = v.s.transpose().partialPivLu().solve(d.transpose()).transpose();
  return {a, psi};
}

OneForm mu_c_form(const FormPair& pair) {
  return [&pair](const AlgebraPoint& a) -> Eigen::VectorXd {
    return pair.evaluate(a).c.transpose() * (pair.algebra().gram() * a.coords);
  };
}

OneForm mu_s_form(const FormPair& pair) {
  return [&pair](const AlgebraPoint& a) -> Eigen::VectorXd {
    return pair.evaluate(a).s.transpose() * (pair.algebra().gram() * a.coords);
  };
}

double closedness_at(const OneForm& beta, const AlgebraPoint& a, FdOptions fd) {
  const int n = a.dim();
  Eigen::MatrixXd d(n, n);  // d(v, w) = D_v beta(w)
  for (int v = 0; v < n; ++v) {
    AlgebraPoint ap = a, am = a;
    ap.coords(v) += fd.h;
    am.coords(v) -= fd.h;
    d.row(v) = ((beta(ap) - beta(am)) / (2 * fd.h)).transpose();
  }
  return max_abs(d - d.transpose());
}

double closedness_residual(const OneForm& beta, const std::vector<AlgebraPoint>& sample,
                           FdOptions fd) {
  double r = 0.0;
  for (const auto& a : sample) r = std::max(r, closedness_at(beta, a, fd));
  return r;
}

double MetricTensor::asymmetry() const { return max_abs(matrix - matrix.transpose()); }
double MetricTensor::min_eigenvalue() const { return min_sym_eigenvalue(matrix); }

Eigen::MatrixXd metric_assembly(const FormPair& pair, const AlgebraPoint& a) {
  const LieAlgebraSpec& g = pair.algebra();
  const int n = g.dim();
  const PairValue v = pair.evaluate(a);
  const Eigen::MatrixXd psi = psi_at(pair, a).matrix;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd th(n, 2 * n), l = Eigen::MatrixXd::Zero(n, 2 * n),
      dm = Eigen::MatrixXd::Zero(n, 2 * n);
  th << id, v.c;  // theta(u, v) = u + c v
  l.rightCols(n) = v.s;  // L(u, v) = s v
  dm.rightCols(n) = dtheta_mu(g, a, v.c);
  const Eigen::MatrixXd b = bracket_pairing(g, a);
  const Eigen::MatrixXd cross = l.transpose() * b * th;
  return th.transpose() * psi * th + dm.transpose() * l + cross + cross.transpose();
}

Eigen::MatrixXd metric_psi_inverse_form(const FormPair& pair, const AlgebraPoint& a) {
  const LieAlgebraSpec& g = pair.algebra();
  const int n = g.dim();
  const PairValue v = pair.evaluate(a);
  const Eigen::MatrixXd psi = psi_at(pair, a).matrix;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd th(n, 2 * n), l = Eigen::MatrixXd::Zero(n, 2 * n),
      dm = Eigen::MatrixXd::Zero(n, 2 * n);
  th << id, v.c;
  l.rightCols(n) = v.s;
  dm.rightCols(n) = dtheta_mu(g, a, v.c);
  const Eigen::MatrixXd b = bracket_pairing(g, a);
  const Eigen::MatrixXd cross = l.transpose() * b * th;
  return th.transpose() * psi * th + dm.transpose() * psi.partialPivLu().solve(dm) + cross +
         cross.transpose();
}

MetricTensor metric_from_symplectic(const FormPair& pair, const AlgebraPoint& a, FdOptions fd) {
  return {a, symplectic_at(pair.algebra(), a, fd) * j_at(pair, a).block};
}

MetricTensor metric_at(const FormPair& pair, const AlgebraPoint& a, FdOptions fd) {
  MetricTensor out{a, metric_assembly(pair, a)};
  const Eigen::MatrixXd other = metric_from_symplectic(pair, a, fd).matrix;
  const double diff = max_abs(out.matrix - other);
  if (!(diff <= 1e-8 * std::max(1.0, max_abs(other)))) {
    std::ostringstream os;
    os << "metric_at: assembly and omega(., J.) differ by " << diff;
    throw ConsistencyError(os.str());
  }
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::KAHLER: return "KAHLER";
    case Verdict::PSEUDO_KAHLER: return "PSEUDO_KAHLER";
    case Verdict::NOT_KAHLER: return "NOT_KAHLER";
    case Verdict::INADMISSIBLE: return "INADMISSIBLE";
    case Verdict::NON_INTEGRABLE: return "NON_INTEGRABLE";
  }
  return "?";
}

KaehlerReport kaehler_verdict(const FormPair& pair, const std::vector<AlgebraPoint>& sample,
                              VerdictOptions opts) {
  KaehlerReport rep;
  rep.points = sample.size();
  const AdmissibilityReport adm = admissibility_check(pair, sample);
  rep.residuals["admissibility_failures"] = static_cast<double>(adm.failures.size());
  if (!adm.pass()) {
    rep.verdict = Verdict::INADMISSIBLE;
    rep.causes.push_back("s singular at " + std::to_string(adm.failures.size()) + " point(s)");
    return rep;
  }

  double mc_re = 0.0, mc_im = 0.0;
  for (const auto& a : sample) {
    const auto mc = maurer_cartan_residual(pair, a, opts.fd);
    mc_re = std::max(mc_re, mc.real_part);
    mc_im = std::max(mc_im, mc.imag_part);
  }
  rep.residuals["maurer_cartan_real"] = mc_re;
  rep.residuals["maurer_cartan_imag"] = mc_im;
  rep.imaginary_part_integrable = mc_im <= opts.integrability_threshold;
  if (mc_re > opts.integrability_threshold || mc_im > opts.integrability_threshold) {
    rep.verdict = Verdict::NON_INTEGRABLE;
    if (mc_re > opts.integrability_threshold) rep.causes.push_back("maurer_cartan_real");
    if (mc_im > opts.integrability_threshold) rep.causes.push_back("maurer_cartan_imag");
    return rep;
  }

  const OneForm bc = mu_c_form(pair), bs = mu_s_form(pair);
  double rc = 0.0, rs = 0.0, psi_asym = 0.0, compat = 0.0, jsq = 0.0;
  bool c_ok = true, s_ok = true;
  for (const auto& a : sample) {
    const double tau_eff = opts.tau * std::max(1.0, norm(pair.algebra(), a));
    const double xc = closedness_at(bc, a, opts.fd), xs = closedness_at(bs, a, opts.fd);
    rc = std::max(rc, xc);
    rs = std::max(rs, xs);
    c_ok = c_ok && xc <= tau_eff;
    s_ok = s_ok && xs <= tau_eff;
    psi_asym = std::max(psi_asym, psi_at(pair, a).asymmetry());
    const JOperator j = j_at(pair, a);
    const Eigen::MatrixXd w = symplectic_at(pair.algebra(), a, opts.fd);
    compat = std::max(compat, max_abs(j.block.transpose() * w * j.block - w));
    jsq = std::max(jsq, j.square_residual());
  }
  rep.residuals["closedness_mu_c"] = rc;
  rep.residuals["closedness_mu_s"] = rs;
  rep.residuals["psi_asymmetry"] = psi_asym;
  rep.residuals["compatibility"] = compat;
  rep.residuals["j_square"] = jsq;
  if (!c_ok || !s_ok) {
    rep.verdict = Verdict::NOT_KAHLER;
    if (!c_ok) rep.causes.push_back("closedness_mu_c");
    if (!s_ok) rep.causes.push_back("closedness_mu_s");
    return rep;
  }

  double min_eig = std::numeric_limits<double>::infinity(), consistency = 0.0;
  for (const auto& a : sample) {
    const MetricTensor m = metric_at(pair, a, opts.fd);
    min_eig = std::min(min_eig, m.min_eigenvalue());
    consistency = std::max(consistency,
                           max_abs(m.matrix - metric_from_symplectic(pair, a, opts.fd).matrix));
  }
  rep.residuals["metric_min_eigenvalue"] = min_eig;
  rep.residuals["metric_consistency"] = consistency;
  if (min_eig > opts.spd_floor) {
    rep.verdict = Verdict::KAHLER;
  } else {
    rep.verdict = Verdict::PSEUDO_KAHLER;
    rep.causes.push_back("metric_not_positive");
  }
  return rep;
}

double potential_residual(const FormPair& pair, const ScalarField& f,
                          const std::vector<AlgebraPoint>& sample, FdOptions fd) {
  const LieAlgebraSpec& g = pair.algebra();
  const int n = g.dim();
  const OneForm bs = mu_s_form(pair);
  double r = 0.0;
  for (const auto& a : sample) {
    Eigen::VectorXd df(n);
    if (f.gradient) {
      df = f.gradient(a);
    } else {
      for (int k = 0; k < n; ++k) {
        AlgebraPoint ap = a, am = a;
        ap.coords(k) += fd.h;
        am.coords(k) -= fd.h;
        df(k) = (f.value(ap) - f.value(am)) / (2 * fd.h);
      }
    }
    const Eigen::VectorXd diff = df - bs(a);
    r = std::max(r, std::sqrt(std::max(0.0, diff.dot(g.gram_inverse() * diff))));
  }
  return r;
}

}  // namespace liekahler
