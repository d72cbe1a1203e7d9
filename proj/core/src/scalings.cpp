#include "liekahler/scalings.hpp"

#include "liekahler/ad_calculus.hpp"
#include "liekahler/errors.hpp"

#include "json.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace liekahler {

namespace {

using cd = std::complex<double>;

constexpr double kSeriesBelow = 1e-3;

void check_domain(const ScalingFunction& sf, double x) {
  if (!(x <= sf.domain_radius)) {
    std::ostringstream os;
    os << "scaling '" << sf.name << "': |a| = " << x << " outside domain " << sf.domain_radius;
    throw DomainError(os.str());
  }
}

PairValue standard_at(const LieAlgebraSpec& g, const AlgebraPoint& b) {
  const AdSpectrum spec(g, ad_matrix(g, b));
  const auto cm1 = AdFunction::named(AdKind::cosm1_over);
  const auto sinc = AdFunction::named(AdKind::sinc);
  return {spec.apply([&](cd z) { return scalar_value(cm1, z); }),
          spec.apply([&](cd z) { return scalar_value(sinc, z); })};
}

}  // namespace

ScalingFunction identity_scaling() {
  ScalingFunction sf;
  sf.name = "identity";
  sf.phi = [](double) { return 1.0; };
  sf.dphi = [](double) { return 0.0; };
  sf.xi = [](double x) { return 0.5 * x * x; };
  return sf;
}

ScalingFunction arctan_scaling() {
  ScalingFunction sf;
  sf.name = "arctan";
  sf.phi = [](double y) {
    if (y < kSeriesBelow) {
      double sum = 0.0, p = 1.0;
      for (int k = 0; k < 7; ++k, p *= -y) sum += p / (2 * k + 1);
      return sum;
    }
    const double x = std::sqrt(y);
    return std::atan(x) / x;
  };
  sf.dphi = [phi = sf.phi](double y) {
    if (y < kSeriesBelow) {
      double sum = 0.0, p = -1.0;
      for (int k = 1; k < 8; ++k, p *= -y) sum += k * p / (2 * k + 1);
      return sum;
    }
    return (1.0 / (1.0 + y) - phi(y)) / (2.0 * y);
  };
  sf.xi = [](double x) { return x * std::atan(x) - 0.5 * std::log1p(x * x); };
  return sf;
}

ScalingFunction sinh_scaling() {
  ScalingFunction sf;
  sf.name = "sinh";
  sf.domain_radius = 5.0;
  sf.phi = [](double y) {
    if (y < kSeriesBelow) {
      double sum = 0.0, term = 1.0;
      for (int k = 0; k < 7; ++k) {
        sum += term;
        term *= y / ((2 * k + 2) * (2 * k + 3));
      }
      return sum;
    }
    const double x = std::sqrt(y);
    return std::sinh(x) / x;
  };
  sf.dphi = [phi = sf.phi](double y) {
    if (y < kSeriesBelow) {
      // sum_{k>=1} k y^(k-1) / (2k+1)!
      double sum = 0.0, fact = 6.0, p = 1.0;
      for (int k = 1; k < 8; ++k) {
        sum += k * p / fact;
        p *= y;
        fact *= (2 * k + 2) * (2 * k + 3);
      }
      return sum;
    }
    return (std::cosh(std::sqrt(y)) - phi(y)) / (2.0 * y);
  };
  sf.xi = [](double x) { return std::cosh(x) - 1.0; };
  return sf;
}

ScalingFunction polynomial_scaling(std::vector<double> coeffs, std::string name) {
  if (coeffs.empty()) throw ConfigError("polynomial scaling: empty coefficient list");
  ScalingFunction sf;
  sf.name = std::move(name);
  sf.phi = [coeffs](double y) {
    double sum = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) sum = sum * y + *it;
    return sum;
  };
  sf.dphi = [coeffs](double y) {
    double sum = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) sum = sum * y + static_cast<double>(k) * coeffs[k];
    return sum;
  };
  // Xi(x) = sum_k coeffs[k] x^(2k+2) / (2k+2)
  sf.xi = [coeffs](double x) {
    double sum = 0.0, p = x * x;
    for (std::size_t k = 0; k < coeffs.size(); ++k, p *= x * x) sum += coeffs[k] * p / (2.0 * k + 2.0);
    return sum;
  };
  return sf;
}

ScalingFunction scaling_by_name(const std::string& name) {
  if (name == "identity") return identity_scaling();
  if (name == "arctan") return arctan_scaling();
  if (name == "sinh") return sinh_scaling();
  throw ConfigError("unknown scaling family '" + name + "'");
}

ScalingFunction scaling_from_json(const std::string& json_text) {
  try {
    const auto doc = nlohmann::json::parse(json_text);
    auto coeffs = doc.at("coeffs").get<std::vector<double>>();
    ScalingFunction sf = polynomial_scaling(std::move(coeffs), doc.value("name", "polynomial"));
    if (doc.contains("domain_radius")) sf.domain_radius = doc["domain_radius"].get<double>();
    return sf;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scaling JSON: ") + e.what());
  }
}

AlgebraPoint chi_map(const ScalingFunction& sf, const LieAlgebraSpec& g, const AlgebraPoint& a) {
  require_same_dim(g, a, "chi_map");
  const double y = dot(g, a, a);
  check_domain(sf, std::sqrt(y));
  return sf.phi(y) * a;
}

Eigen::MatrixXd dchi_at(const ScalingFunction& sf, const LieAlgebraSpec& g, const AlgebraPoint& a) {
  require_same_dim(g, a, "dchi_at");
  const double y = dot(g, a, a);
  check_domain(sf, std::sqrt(y));
  const int n = g.dim();
  return sf.phi(y) * Eigen::MatrixXd::Identity(n, n) +
         2.0 * sf.dphi(y) * a.coords * sharp(g, a).transpose();
}

FormPair scaled_pair(AlgebraPtr g, const ScalingFunction& sf) {
  const LieAlgebraSpec* spec = g.get();
  FormPair p(g, Provenance::rescaled, "rescaled:" + sf.name,
             [spec, sf](const AlgebraPoint& a) {
               const Eigen::MatrixXd d = dchi_at(sf, *spec, a);
               const PairValue st = standard_at(*spec, chi_map(sf, *spec, a));
               return PairValue{st.c * d, st.s * d};
             },
             true);
  p.with_gamma_formula([spec, sf](const AlgebraPoint& a) {
    return exp_c(*spec, AlgebraPoint::zero(spec->dim()), chi_map(sf, *spec, a));
  });
  return p;
}

double xi_by_quadrature(const ScalingFunction& sf, double x) {
  if (x == 0.0) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&sf](double t) { return sf.chi(t); }, 0.0, x, 15, 1e-12, &err);
  if (!(err <= 1e-10 * std::max(1.0, std::abs(v))))
    throw ConvergenceError("xi_by_quadrature: error estimate " + std::to_string(err));
  return v;
}

double f_potential(const ScalingFunction& sf, const LieAlgebraSpec& g, const AlgebraPoint& a) {
  const double x = norm(g, a);
  check_domain(sf, x);
  const double xi = sf.xi ? sf.xi(x) : xi_by_quadrature(sf, x);
  return x * sf.chi(x) - xi;
}

Eigen::VectorXd f_potential_gradient(const ScalingFunction& sf, const LieAlgebraSpec& g,
                                     const AlgebraPoint& a) {
  const double x = norm(g, a);
  check_domain(sf, x);
  return sf.chi_prime(x) * sharp(g, a);
}

ScalingDomainReport check_scaling_domain(const ScalingFunction& sf, double radius,
                                         std::size_t samples) {
  if (samples < 2) throw ConfigError("check_scaling_domain: need at least 2 samples");
  const double r = std::min(radius, sf.domain_radius);
  ScalingDomainReport rep;
  rep.samples = samples;
  rep.min_phi = std::numeric_limits<double>::infinity();
  rep.min_abs_chi_prime = std::numeric_limits<double>::infinity();
  double prev = sf.chi_prime(0.0);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = r * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double ph = sf.phi(x * x);
    const double cp = sf.chi_prime(x);
    rep.min_phi = std::min(rep.min_phi, ph);
    rep.min_abs_chi_prime = std::min(rep.min_abs_chi_prime, std::abs(cp));
    if (!(ph > 0.0) || cp == 0.0 || (i > 0 && (cp > 0) != (prev > 0))) rep.violations.push_back(x);
    prev = cp;
  }
  return rep;
}

std::vector<double> algebra_invariants(const LieAlgebraSpec& g, const AlgebraPoint& a) {
  return {dot(g, a, a)};
}

FormPair invariant_scaled_pair(AlgebraPtr g, InvariantRescaling r) {
  if (!r.phi) throw ConfigError("invariant_scaled_pair: missing phi");
  const LieAlgebraSpec* spec = g.get();
  auto chi = [spec, r](const AlgebraPoint& a) {
    return r.phi(a.coords, algebra_invariants(*spec, a)) * a;
  };
  return FormPair(g, Provenance::rescaled, "invariant:" + r.name,
                  [spec, r, chi](const AlgebraPoint& a) {
                    const int n = spec->dim();
                    Eigen::MatrixXd d(n, n);
                    for (int k = 0; k < n; ++k) {
                      AlgebraPoint ap = a, am = a;
                      ap.coords(k) += r.fd_step;
                      am.coords(k) -= r.fd_step;
                      d.col(k) = (chi(ap).coords - chi(am).coords) / (2 * r.fd_step);
                    }
                    const PairValue st = standard_at(*spec, chi(a));
                    return PairValue{st.c * d, st.s * d};
                  },
                  false);
}

}  // namespace liekahler
