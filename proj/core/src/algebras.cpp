#include "liekahler/errors.hpp"
#include "liekahler/lie_core.hpp"

#include "json.hpp"

#include <cmath>
#include <complex>
#include <mutex>

namespace liekahler {

namespace {

using cd = std::complex<double>;
using nlohmann::json;

// Builds the spec from a representation: C by projecting commutators onto the
// basis, gram = -trace_scale * Re tr(rho_i rho_j).
AlgebraPtr from_representation(std::string name, std::vector<Eigen::MatrixXcd> rep,
                               double trace_scale) {
  const int n = static_cast<int>(rep.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::MatrixXd normal(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gram(i, j) = -trace_scale * (rep[i] * rep[j]).trace().real();
      normal(i, j) = (rep[i].adjoint() * rep[j]).trace().real();
    }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Eigen::MatrixXcd comm = rep[i] * rep[j] - rep[j] * rep[i];
      Eigen::VectorXd rhs(n);
      for (int k = 0; k < n; ++k) rhs(k) = (rep[k].adjoint() * comm).trace().real();
      const Eigen::VectorXd x = ldlt.solve(rhs);
      for (int k = 0; k < n; ++k) {
        // Snap projection noise; shipped constants are 0, +-1/2, +-1, +-sqrt(3)/2.
        const double v = std::abs(x(k)) < 1e-15 ? 0.0 : x(k);
        c[(static_cast<std::size_t>(i) * n + j) * n + k] = v;
      }
    }
  // Exact antisymmetry after snapping.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        auto& a = c[(static_cast<std::size_t>(i) * n + j) * n + k];
        auto& b = c[(static_cast<std::size_t>(j) * n + i) * n + k];
        const double m = 0.5 * (a - b);
        a = m;
        b = -m;
      }
  return std::make_shared<const LieAlgebraSpec>(std::move(name), n, std::move(c), gram,
                                                std::move(rep));
}

}  // namespace

AlgebraPtr su2() {
  static const AlgebraPtr spec = [] {
    const cd i(0, 1);
    Eigen::Matrix2cd s1, s2, s3;
    s1 << 0, 1, 1, 0;
    s2 << 0, -i, i, 0;
    s3 << 1, 0, 0, -1;
    std::vector<Eigen::MatrixXcd> rep = {-0.5 * i * s1, -0.5 * i * s2, -0.5 * i * s3};
    return from_representation("su2", std::move(rep), 2.0);
  }();
  return spec;
}

AlgebraPtr so3() {
  static const AlgebraPtr spec = [] {
    std::vector<Eigen::MatrixXcd> rep(3, Eigen::MatrixXcd::Zero(3, 3));
    // (L_i)_{jk} = -epsilon_{ijk}
    auto eps = [](int i, int j, int k) -> double {
      return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0;
    };
    for (int a = 0; a < 3; ++a)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) rep[a](j, k) = -eps(a, j, k);
    return from_representation("so3", std::move(rep), 0.5);
  }();
  return spec;
}

AlgebraPtr su3() {
  static const AlgebraPtr spec = [] {
    const cd i(0, 1);
    std::vector<Eigen::Matrix3cd> gm(8, Eigen::Matrix3cd::Zero());
    gm[0](0, 1) = 1; gm[0](1, 0) = 1;
    gm[1](0, 1) = -i; gm[1](1, 0) = i;
    gm[2](0, 0) = 1; gm[2](1, 1) = -1;
    gm[3](0, 2) = 1; gm[3](2, 0) = 1;
    gm[4](0, 2) = -i; gm[4](2, 0) = i;
    gm[5](1, 2) = 1; gm[5](2, 1) = 1;
    gm[6](1, 2) = -i; gm[6](2, 1) = i;
    const double r3 = 1.0 / std::sqrt(3.0);
    gm[7](0, 0) = r3; gm[7](1, 1) = r3; gm[7](2, 2) = -2.0 * r3;
    std::vector<Eigen::MatrixXcd> rep;
    for (const auto& l : gm) rep.emplace_back(-0.5 * i * l);
    return from_representation("su3", std::move(rep), 2.0);
  }();
  return spec;
}

AlgebraPtr abelian(int n) {
  if (n <= 0) throw DimensionMismatch("abelian: dimension must be positive");
  std::vector<Eigen::MatrixXcd> rep(n, Eigen::MatrixXcd::Zero(n, n));
  for (int k = 0; k < n; ++k) rep[k](k, k) = cd(0, 1);
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  return std::make_shared<const LieAlgebraSpec>("u1^" + std::to_string(n), n, std::move(c),
                                                Eigen::MatrixXd::Identity(n, n), std::move(rep));
}

AlgebraPtr algebra_by_name(const std::string& name) {
  if (name == "su2") return su2();
  if (name == "so3") return so3();
  if (name == "su3") return su3();
  if (name.rfind("u1^", 0) == 0) {
    try {
      return abelian(std::stoi(name.substr(3)));
    } catch (const std::logic_error&) {
    }
  }
  throw ConfigError("unknown algebra '" + name + "'");
}

AlgebraPtr algebra_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("algebra JSON: ") + e.what());
  }
  try {
    const std::string name = doc.at("name").get<std::string>();
    const int n = doc.at("dim").get<int>();
    if (n <= 0) throw ConfigError("algebra JSON: dim must be positive");
    const auto& sc = doc.at("structure_constants");
    std::vector<double> c(static_cast<std::size_t>(n) * n * n);
    if (sc.size() != static_cast<std::size_t>(n)) throw ConfigError("structure_constants shape");
    for (int i = 0; i < n; ++i) {
      if (sc[i].size() != static_cast<std::size_t>(n)) throw ConfigError("structure_constants shape");
      for (int j = 0; j < n; ++j) {
        if (sc[i][j].size() != static_cast<std::size_t>(n))
          throw ConfigError("structure_constants shape");
        for (int k = 0; k < n; ++k)
          c[(static_cast<std::size_t>(i) * n + j) * n + k] = sc[i][j][k].get<double>();
      }
    }
    Eigen::MatrixXd gram(n, n);
    const auto& gj = doc.at("gram");
    if (gj.size() != static_cast<std::size_t>(n)) throw ConfigError("gram shape");
    for (int i = 0; i < n; ++i) {
      if (gj[i].size() != static_cast<std::size_t>(n)) throw ConfigError("gram shape");
      for (int j = 0; j < n; ++j) gram(i, j) = gj[i][j].get<double>();
    }
    const auto& rj = doc.at("rep_basis");
    if (rj.size() != static_cast<std::size_t>(n)) throw ConfigError("rep_basis must have dim entries");
    std::vector<Eigen::MatrixXcd> rep;
    for (const auto& mat : rj) {
      const int m = static_cast<int>(mat.size());
      Eigen::MatrixXcd r(m, m);
      for (int a = 0; a < m; ++a) {
        if (mat[a].size() != static_cast<std::size_t>(m)) throw ConfigError("rep_basis shape");
        for (int b = 0; b < m; ++b)
          r(a, b) = cd(mat[a][b].at(0).get<double>(), mat[a][b].at(1).get<double>());
      }
      rep.push_back(std::move(r));
    }
    return std::make_shared<const LieAlgebraSpec>(name, n, std::move(c), gram, std::move(rep));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("algebra JSON: ") + e.what());
  }
}

std::string algebra_to_json(const LieAlgebraSpec& spec) {
  const int n = spec.dim();
  json doc;
  doc["name"] = spec.name();
  doc["dim"] = n;
  json sc = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) {
      json col = json::array();
      for (int k = 0; k < n; ++k) col.push_back(spec.structure_constant(i, j, k));
      row.push_back(col);
    }
    sc.push_back(row);
  }
  doc["structure_constants"] = sc;
  json gram = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    for (int j = 0; j < n; ++j) row.push_back(spec.gram()(i, j));
    gram.push_back(row);
  }
  doc["gram"] = gram;
  json rep = json::array();
  for (const auto& r : spec.rep_basis()) {
    json mat = json::array();
    for (int a = 0; a < r.rows(); ++a) {
      json row = json::array();
      for (int b = 0; b < r.cols(); ++b) row.push_back({r(a, b).real(), r(a, b).imag()});
      mat.push_back(row);
    }
    rep.push_back(mat);
  }
  doc["rep_basis"] = rep;
  return doc.dump();
}

}  // namespace liekahler
