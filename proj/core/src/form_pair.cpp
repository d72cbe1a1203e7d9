#include "liekahler/form_pair.hpp"

#include "liekahler/ad_calculus.hpp"
#include "liekahler/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace liekahler {

namespace {

using cd = std::complex<double>;

PairValue standard_value(const LieAlgebraSpec& g, const AlgebraPoint& a) {
  const AdSpectrum spec(g, ad_matrix(g, a));
  const auto cm1 = AdFunction::named(AdKind::cosm1_over);
  const auto sinc = AdFunction::named(AdKind::sinc);
  return {spec.apply([&](cd z) { return scalar_value(cm1, z); }),
          spec.apply([&](cd z) { return scalar_value(sinc, z); })};
}

cd expm1_over(cd z) {
  if (std::abs(z) < 1e-8) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  // e^z - 1 = 2 e^(z/2) sinh(z/2)
  return 2.0 * std::exp(0.5 * z) * std::sinh(0.5 * z) / z;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::standard: return "standard";
    case Provenance::rescaled: return "rescaled";
    case Provenance::custom: return "custom";
  }
  return "?";
}

FormPair::FormPair(AlgebraPtr algebra, Provenance provenance, std::string name, Evaluator eval,
                   bool analytic_derivative)
    : algebra_(std::move(algebra)),
      provenance_(provenance),
      name_(std::move(name)),
      eval_(std::move(eval)),
      analytic_derivative_(analytic_derivative) {
  if (!algebra_) throw ConfigError("FormPair: null algebra");
  if (!eval_) throw ConfigError("FormPair: missing evaluator");
}

PairValue FormPair::evaluate(const AlgebraPoint& a) const {
  require_same_dim(*algebra_, a, "FormPair::evaluate");
  PairValue v = eval_(a);
  const int n = algebra_->dim();
  if (v.c.rows() != n || v.c.cols() != n || v.s.rows() != n || v.s.cols() != n)
    throw DimensionMismatch("FormPair '" + name_ + "': evaluator returned wrong shape");
  return v;
}

FormPair standard_pair(AlgebraPtr g) {
  const LieAlgebraSpec* spec = g.get();
  FormPair p(g, Provenance::standard, "standard",
             [spec](const AlgebraPoint& a) { return standard_value(*spec, a); }, true);
  p.with_gamma_formula([spec](const AlgebraPoint& a) {
    return exp_c(*spec, AlgebraPoint::zero(spec->dim()), a);
  });
  return p;
}

FormPair constant_pair(AlgebraPtr g, Eigen::MatrixXd c, Eigen::MatrixXd s, std::string name) {
  return FormPair(std::move(g), Provenance::custom, std::move(name),
                  [c, s](const AlgebraPoint&) { return PairValue{c, s}; }, true);
}

FormPair perturbed_pair(AlgebraPtr g, double eps) {
  const LieAlgebraSpec* spec = g.get();
  return FormPair(g, Provenance::custom, "perturbed",
                  [spec, eps](const AlgebraPoint& a) {
                    PairValue v = standard_value(*spec, a);
                    const Eigen::MatrixXd ad = ad_matrix(*spec, a);
                    v.c += eps * ad * ad;
                    return v;
                  },
                  true);
}

FormPair bracket_shift_pair(AlgebraPtr g, const AlgebraPoint& b0) {
  const LieAlgebraSpec* spec = g.get();
  require_same_dim(*spec, b0, "bracket_shift_pair");
  const Eigen::MatrixXd adb = ad_matrix(*spec, b0);
  return FormPair(g, Provenance::custom, "bracket_shift",
                  [spec, adb](const AlgebraPoint& a) {
                    PairValue v = standard_value(*spec, a);
                    v.c += adb;
                    return v;
                  },
                  true);
}

FormPair gauge_twisted_pair(AlgebraPtr g, const AlgebraPoint& b0) {
  const LieAlgebraSpec* spec = g.get();
  require_same_dim(*spec, b0, "gauge_twisted_pair");
  const Eigen::MatrixXd adb = ad_matrix(*spec, b0);
  FormPair p(g, Provenance::custom, "gauge_twisted",
             [spec, adb, b0](const AlgebraPoint& a) {
               const AlgebraPoint x = bracket(*spec, b0, a);
               const AdSpectrum ex(*spec, ad_matrix(*spec, x));
               const Eigen::MatrixXd dexp = ex.apply(expm1_over);
               const Eigen::MatrixXd adj = ex.apply([](cd z) { return std::exp(z); });
               PairValue st = standard_value(*spec, a);
               return PairValue{dexp * adb + adj * st.c, adj * st.s};
             },
             true);
  p.with_gamma_formula([spec, b0](const AlgebraPoint& a) {
    const AlgebraPoint zero = AlgebraPoint::zero(spec->dim());
    return exp_c(*spec, bracket(*spec, b0, a), zero) * exp_c(*spec, zero, a);
  });
  return p;
}

namespace {

struct Grid {
  std::vector<std::vector<double>> axes;
  std::vector<Eigen::MatrixXd> c;  // row-major over axes, last axis fastest
  std::vector<Eigen::MatrixXd> s;
};

Eigen::MatrixXd read_matrix(const nlohmann::json& j, int n) {
  if (j.size() != static_cast<std::size_t>(n)) throw ConfigError("tabulated pair: matrix shape");
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    if (j[r].size() != static_cast<std::size_t>(n)) throw ConfigError("tabulated pair: matrix shape");
    for (int k = 0; k < n; ++k) m(r, k) = j[r][k].get<double>();
  }
  return m;
}

nlohmann::json write_matrix(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(r, k));
    out.push_back(row);
  }
  return out;
}

PairValue interpolate(const Grid& grid, const AlgebraPoint& a) {
  const int n = static_cast<int>(grid.axes.size());
  std::vector<std::size_t> lo(n);
  std::vector<double> w(n);
  std::vector<std::size_t> stride(n, 1);
  for (int d = n - 2; d >= 0; --d) stride[d] = stride[d + 1] * grid.axes[d + 1].size();
  for (int d = 0; d < n; ++d) {
    const auto& ax = grid.axes[d];
    const double x = a.coords(d);
    if (ax.size() == 1) {
      if (std::abs(x - ax[0]) > 1e-12) throw DomainError("tabulated pair: point outside grid");
      lo[d] = 0;
      w[d] = 0.0;
      continue;
    }
    if (x < ax.front() - 1e-12 || x > ax.back() + 1e-12)
      throw DomainError("tabulated pair: point outside grid");
    auto it = std::upper_bound(ax.begin(), ax.end(), x);
    std::size_t i = it == ax.begin() ? 0 : static_cast<std::size_t>(it - ax.begin()) - 1;
    i = std::min(i, ax.size() - 2);
    lo[d] = i;
    w[d] = std::clamp((x - ax[i]) / (ax[i + 1] - ax[i]), 0.0, 1.0);
  }
  const Eigen::Index m = grid.c.front().rows();
  PairValue out{Eigen::MatrixXd::Zero(m, m), Eigen::MatrixXd::Zero(m, m)};
  for (unsigned corner = 0; corner < (1u << n); ++corner) {
    double weight = 1.0;
    std::size_t idx = 0;
    for (int d = 0; d < n; ++d) {
      const bool up = (corner >> d) & 1u;
      if (up && grid.axes[d].size() == 1) {
        weight = 0.0;
        break;
      }
      weight *= up ? w[d] : 1.0 - w[d];
      idx += (lo[d] + (up ? 1 : 0)) * stride[d];
    }
    if (weight == 0.0) continue;
    out.c += weight * grid.c[idx];
    out.s += weight * grid.s[idx];
  }
  return out;
}

}  // namespace

FormPair tabulated_pair_from_json(AlgebraPtr g, const std::string& json_text, std::string name) {
  const int n = g->dim();
  if (n > 16) throw ConfigError("tabulated pair: dimension too large for multilinear interpolation");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("tabulated pair JSON: ") + e.what());
  }
  auto grid = std::make_shared<Grid>();
  try {
    const auto& pts = doc.at("points");
    const auto& cm = doc.at("c_matrices");
    const auto& sm = doc.at("s_matrices");
    if (pts.empty() || pts.size() != cm.size() || pts.size() != sm.size())
      throw ConfigError("tabulated pair: points, c_matrices and s_matrices must have equal nonzero length");
    std::vector<Eigen::VectorXd> p;
    grid->axes.assign(n, {});
    for (const auto& row : pts) {
      if (row.size() != static_cast<std::size_t>(n)) throw ConfigError("tabulated pair: point dimension");
      Eigen::VectorXd v(n);
      for (int d = 0; d < n; ++d) {
        v(d) = row[d].get<double>();
        grid->axes[d].push_back(v(d));
      }
      p.push_back(v);
    }
    std::size_t total = 1;
    for (auto& ax : grid->axes) {
      std::sort(ax.begin(), ax.end());
      ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
      total *= ax.size();
    }
    if (total != p.size()) throw ConfigError("tabulated pair: points do not form a tensor grid");
    grid->c.assign(total, {});
    grid->s.assign(total, {});
    std::vector<bool> seen(total, false);
    for (std::size_t q = 0; q < p.size(); ++q) {
      std::size_t idx = 0;
      for (int d = 0; d < n; ++d) {
        const auto& ax = grid->axes[d];
        idx = idx * ax.size() +
              static_cast<std::size_t>(std::lower_bound(ax.begin(), ax.end(), p[q](d)) - ax.begin());
      }
      if (seen[idx]) throw ConfigError("tabulated pair: duplicate grid point");
      seen[idx] = true;
      grid->c[idx] = read_matrix(cm[q], n);
      grid->s[idx] = read_matrix(sm[q], n);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("tabulated pair JSON: ") + e.what());
  }
  return FormPair(std::move(g), Provenance::custom, std::move(name),
                  [grid](const AlgebraPoint& a) { return interpolate(*grid, a); }, false);
}

std::string tabulate_pair_json(const FormPair& pair, const std::vector<std::vector<double>>& axes) {
  const int n = pair.algebra().dim();
  if (static_cast<int>(axes.size()) != n) throw DimensionMismatch("tabulate_pair_json: axes");
  nlohmann::json pts = nlohmann::json::array(), cm = nlohmann::json::array(),
                 sm = nlohmann::json::array();
  std::vector<std::size_t> idx(n, 0);
  for (const auto& ax : axes)
    if (ax.empty()) throw ConfigError("tabulate_pair_json: empty axis");
  while (true) {
    AlgebraPoint a = AlgebraPoint::zero(n);
    nlohmann::json row = nlohmann::json::array();
    for (int d = 0; d < n; ++d) {
      a.coords(d) = axes[d][idx[d]];
      row.push_back(a.coords(d));
    }
    const PairValue v = pair.evaluate(a);
    pts.push_back(row);
    cm.push_back(write_matrix(v.c));
    sm.push_back(write_matrix(v.s));
    int d = n - 1;
    while (d >= 0 && ++idx[d] == axes[d].size()) idx[d--] = 0;
    if (d < 0) break;
  }
  nlohmann::json doc;
  doc["points"] = pts;
  doc["c_matrices"] = cm;
  doc["s_matrices"] = sm;
  return doc.dump();
}

}  // namespace liekahler
