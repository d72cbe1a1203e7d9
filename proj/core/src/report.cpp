#include "liekahler/report.hpp"

#include "liekahler/ad_calculus.hpp"
#include "liekahler/errors.hpp"
#include "liekahler/polar.hpp"
#include "liekahler/scalings.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace liekahler {

const char* version() { return "0.3.0"; }

const char* const kSamplerAlgorithm = "mt19937_64/u53/box-rejection/v1";

const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> checks = {
      "admissible", "integrable", "closed", "kaehler", "polar", "quasi_equivariance", "potential"};
  return checks;
}

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double unit_double(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  for (unsigned t = 0; t < count; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::optional<ScalingFunction> resolve_scaling(const std::string& structure) {
  if (structure == "standard") return identity_scaling();
  if (structure.rfind("rescaled:", 0) == 0) {
    const std::string family = structure.substr(9);
    if (ends_with(family, ".json")) return scaling_from_json(read_file(family));
    return scaling_by_name(family);
  }
  return std::nullopt;
}

// Max-merge of per-point values into a summary; `lower_is_worse` for values
// such as eigenvalues where the minimum is the offender.
void summarize(CheckSummary& s, const std::string& key, const std::vector<double>& v,
               const std::vector<AlgebraPoint>& pts, bool lower_is_worse = false) {
  if (v.empty()) return;
  std::size_t w = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (lower_is_worse ? v[i] < v[w] : v[i] > v[w]) w = i;
  s.residuals[key] = v[w];
  s.worst = {w, pts[w].coords, v[w]};
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace

void RunConfig::validate() const {
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (!(h >= 1e-8 && h <= 1e-2)) throw ConfigError("h must lie in [1e-8, 1e-2]");
  if (!(tau > 0)) throw ConfigError("tau must be positive");
  if (!(radius > 0) || !std::isfinite(radius)) throw ConfigError("radius must be positive");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (gamma_steps < 1) throw ConfigError("gamma_steps must be >= 1");
  if (!(integrability_threshold > 0) || !(polar_tol > 0) || !(quasi_tol > 0) || !(potential_tol > 0))
    throw ConfigError("thresholds must be positive");
  for (const auto& c : checks)
    if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end())
      throw ConfigError("unknown check '" + c + "'");
}

RunConfig config_from_json(const std::string& json_text, RunConfig c) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config JSON must be an object");
  try {
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string& k = it.key();
      const json& v = it.value();
      if (k == "group") c.group = v.get<std::string>();
      else if (k == "structure") c.structure = v.get<std::string>();
      else if (k == "samples") {
        if (v.get<long long>() < 0) throw ConfigError("samples must be >= 1");
        c.samples = v.get<std::size_t>();
      } else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "radius") c.radius = v.get<double>();
      else if (k == "h") c.h = v.get<double>();
      else if (k == "tau") c.tau = v.get<double>();
      else if (k == "checks") {
        if (v.is_string() && v.get<std::string>() == "all") c.checks = all_checks();
        else c.checks = v.get<std::vector<std::string>>();
      } else if (k == "output") c.output = v.get<std::string>();
      else if (k == "threads") c.threads = v.get<unsigned>();
      else if (k == "timing") c.timing = v.get<bool>();
      else if (k == "integrability_threshold") c.integrability_threshold = v.get<double>();
      else if (k == "polar_samples") c.polar_samples = v.get<std::size_t>();
      else if (k == "gamma_steps") c.gamma_steps = v.get<int>();
      else if (k == "polar_tol") c.polar_tol = v.get<double>();
      else if (k == "quasi_tol") c.quasi_tol = v.get<double>();
      else if (k == "potential_tol") c.potential_tol = v.get<double>();
      else throw ConfigError("unknown config key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  return c;
}

namespace {

// Everything that determines the numbers; threads, output and timing do not.
json config_echo(const RunConfig& c) {
  json j;
  j["group"] = c.group;
  j["structure"] = c.structure;
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  j["radius"] = c.radius;
  j["h"] = c.h;
  j["tau"] = c.tau;
  j["checks"] = c.checks;
  j["integrability_threshold"] = c.integrability_threshold;
  j["polar_samples"] = c.polar_samples;
  j["gamma_steps"] = c.gamma_steps;
  j["polar_tol"] = c.polar_tol;
  j["quasi_tol"] = c.quasi_tol;
  j["potential_tol"] = c.potential_tol;
  return j;
}

}  // namespace

std::string config_to_json(const RunConfig& config) {
  json j = config_echo(config);
  j["output"] = config.output;
  j["threads"] = config.threads;
  j["timing"] = config.timing;
  return j.dump(2);
}

std::vector<AlgebraPoint> sample_ball(const LieAlgebraSpec& g, std::size_t count,
                                      std::uint64_t seed, double radius) {
  const int n = g.dim();
  Eigen::VectorXd half(n);
  for (int i = 0; i < n; ++i) half(i) = radius * std::sqrt(g.gram_inverse()(i, i));
  std::mt19937_64 eng(seed);
  std::vector<AlgebraPoint> out;
  out.reserve(count);
  const double r2 = radius * radius;
  while (out.size() < count) {
    AlgebraPoint a = AlgebraPoint::zero(n);
    for (int i = 0; i < n; ++i) a.coords(i) = (2.0 * unit_double(eng) - 1.0) * half(i);
    if (dot(g, a, a) <= r2) out.push_back(std::move(a));
  }
  return out;
}

AlgebraPtr resolve_algebra(const std::string& group) {
  if (ends_with(group, ".json")) return algebra_from_json(read_file(group));
  return algebra_by_name(group);
}

FormPair resolve_pair(AlgebraPtr g, const std::string& structure) {
  if (structure == "standard") return standard_pair(std::move(g));
  if (structure.rfind("rescaled:", 0) == 0) return scaled_pair(std::move(g), *resolve_scaling(structure));
  if (structure.rfind("custom:", 0) == 0) {
    const std::string path = structure.substr(7);
    return tabulated_pair_from_json(std::move(g), read_file(path), "custom:" + path);
  }
  throw ConfigError("unknown structure '" + structure + "'");
}

const CheckSummary* VerificationReport::find(const std::string& check) const {
  for (const auto& c : checks)
    if (c.name == check) return &c;
  return nullptr;
}

std::string VerificationReport::to_json() const {
  json j;
  j["schema"] = 1;
  j["tool"] = "liekahler";
  j["version"] = version();
  j["config"] = config_echo(config);
  j["sampler"] = {{"algorithm", kSamplerAlgorithm}, {"seed", config.seed}};
  j["group"] = config.group;
  j["pair"] = pair_name;
  j["points"] = config.samples;
  j["h"] = config.h;
  j["tau"] = config.tau;
  j["residuals"] = residuals;
  j["flags"] = flags;
  j["verdict"] = verdict;
  j["pass"] = pass;
  j["causes"] = causes;
  json cj = json::object();
  for (const auto& c : checks) {
    json e;
    e["pass"] = c.pass;
    e["skipped"] = c.skipped;
    if (!c.note.empty()) e["note"] = c.note;
    e["residuals"] = c.residuals;
    if (!c.skipped && c.worst.coords.size() > 0) {
      std::vector<double> coords(c.worst.coords.data(), c.worst.coords.data() + c.worst.coords.size());
      e["worst"] = {{"point", c.worst.point}, {"coords", coords}, {"value", c.worst.value}};
    }
    cj[c.name] = e;
  }
  j["checks"] = cj;
  if (config.timing) j["wall_time_s"] = wall_time_s;
  return j.dump(2) + "\n";
}

VerificationReport run(const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const AlgebraPtr g = resolve_algebra(cfg.group);
  const FormPair pair = resolve_pair(g, cfg.structure);
  const std::optional<ScalingFunction> scaling = resolve_scaling(cfg.structure);
  if (scaling && cfg.radius > scaling->domain_radius)
    throw ConfigError("radius exceeds the domain of scaling '" + scaling->name + "'");

  VerificationReport rep;
  rep.config = cfg;
  rep.pair_name = pair.name();
  rep.dim = static_cast<std::size_t>(g->dim());

  // Requested checks plus their prerequisites, in dependency order.
  std::set<std::string> want(cfg.checks.begin(), cfg.checks.end());
  if (want.count("kaehler")) want.insert({"closed", "integrable"});
  if (want.count("polar") || want.count("quasi_equivariance")) want.insert("integrable");
  if (!want.empty()) want.insert("admissible");

  const std::vector<AlgebraPoint> pts = sample_ball(*g, cfg.samples, cfg.seed, cfg.radius);
  const std::size_t np = pts.size();
  const std::vector<AlgebraPoint> polar_pts(pts.begin(), pts.begin() + std::min(np, cfg.polar_samples));
  const FdOptions fd{cfg.h, true};
  const GammaIntegrator gamma(pair, GammaOptions{cfg.gamma_steps, false, 1e-6, true, true});

  auto add_rows = [&](const std::string& check, const std::vector<double>& values,
                      const std::vector<AlgebraPoint>& where) {
    for (std::size_t i = 0; i < values.size(); ++i)
      rep.rows.push_back({check, i, norm(*g, where[i]), values[i]});
  };
  auto record = [&](CheckSummary s) {
    if (!s.skipped && !s.pass) rep.causes.push_back(s.name);
    rep.checks.push_back(std::move(s));
  };

  bool admissible = true, integrable = true, closed = true;
  std::string kaehler_verdict_str;

  if (want.count("admissible")) {
    CheckSummary s{"admissible"};
    std::vector<double> ratio(np);
    parallel_for(np, cfg.threads, [&](std::size_t i) {
      ratio[i] = det_ratio(pair.evaluate(pts[i]).s);
    });
    summarize(s, "min_det_ratio", ratio, pts, true);
    std::size_t failures = 0;
    for (double r : ratio) failures += r > 1e-10 ? 0 : 1;
    s.residuals["failures"] = static_cast<double>(failures);
    if (scaling && pair.provenance() == Provenance::rescaled) {
      const ScalingDomainReport dom = check_scaling_domain(*scaling, cfg.radius);
      s.residuals["scaling_domain_violations"] = static_cast<double>(dom.violations.size());
      rep.flags["scaling_domain_sampled_only"] = true;
      failures += dom.violations.size();
    }
    s.pass = failures == 0;
    admissible = s.pass;
    add_rows("admissible", ratio, pts);
    record(std::move(s));
  }

  auto skipped = [&](const std::string& name, const std::string& why) {
    CheckSummary s{name};
    s.skipped = true;
    s.note = why;
    record(std::move(s));
  };

  if (want.count("integrable")) {
    if (!admissible) {
      skipped("integrable", "gated on admissible");
      integrable = false;
    } else {
      CheckSummary s{"integrable"};
      std::vector<double> re(np), im(np), curv(np), cov(np), nij(np), worst(np);
      parallel_for(np, cfg.threads, [&](std::size_t i) {
        const auto mc = maurer_cartan_residual(pair, pts[i], fd);
        const auto sp = split_integrability_residuals(pair, pts[i], fd);
        re[i] = mc.real_part;
        im[i] = mc.imag_part;
        curv[i] = sp.curvature;
        cov[i] = sp.covariant;
        nij[i] = nijenhuis_residual(pair, pts[i], fd);
        worst[i] = std::max({re[i], im[i], curv[i], cov[i], nij[i]});
      });
      const double thr = cfg.integrability_threshold;
      s.residuals["maurer_cartan_real"] = max_of(re);
      s.residuals["maurer_cartan_imag"] = max_of(im);
      s.residuals["split_curvature"] = max_of(curv);
      s.residuals["split_covariant"] = max_of(cov);
      s.residuals["nijenhuis"] = max_of(nij);
      summarize(s, "max", worst, pts);
      bool agree = true;
      for (std::size_t i = 0; i < np; ++i) {
        const bool a = std::max(re[i], im[i]) <= thr, b = std::max(curv[i], cov[i]) <= thr,
                   c = nij[i] <= thr;
        agree = agree && a == b && b == c;
      }
      rep.flags["integrability_tests_agree"] = agree;
      rep.flags["imaginary_part_integrable"] = max_of(im) <= thr;
      s.pass = s.residuals["maurer_cartan_real"] <= thr && s.residuals["maurer_cartan_imag"] <= thr;
      integrable = s.pass;
      add_rows("integrable", worst, pts);
      record(std::move(s));
    }
  }

  if (want.count("closed")) {
    CheckSummary s{"closed"};
    const OneForm bc = mu_c_form(pair), bs = mu_s_form(pair);
    std::vector<double> rc(np), rs(np), worst(np);
    std::vector<char> ok(np);
    parallel_for(np, cfg.threads, [&](std::size_t i) {
      rc[i] = closedness_at(bc, pts[i], fd);
      rs[i] = closedness_at(bs, pts[i], fd);
      worst[i] = std::max(rc[i], rs[i]);
      ok[i] = worst[i] <= cfg.tau * std::max(1.0, norm(*g, pts[i]));
    });
    s.residuals["closedness_mu_c"] = max_of(rc);
    s.residuals["closedness_mu_s"] = max_of(rs);
    summarize(s, "max", worst, pts);
    s.pass = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
    closed = s.pass;
    add_rows("closed", worst, pts);
    record(std::move(s));
  }

  if (want.count("kaehler")) {
    if (!admissible || !integrable) {
      skipped("kaehler", admissible ? "gated on integrable" : "gated on admissible");
    } else {
      CheckSummary s{"kaehler"};
      std::vector<double> eig(np), psi_asym(np), compat(np), jsq(np), consist(np);
      parallel_for(np, cfg.threads, [&](std::size_t i) {
        const JOperator j = j_at(pair, pts[i]);
        const Eigen::MatrixXd w = symplectic_at(*g, pts[i], fd);
        jsq[i] = j.square_residual();
        compat[i] = max_abs(j.block.transpose() * w * j.block - w);
        psi_asym[i] = psi_at(pair, pts[i]).asymmetry();
        const MetricTensor wj{pts[i], w * j.block};
        if (closed) {
          const MetricTensor m = metric_at(pair, pts[i], fd);
          eig[i] = m.min_eigenvalue();
          consist[i] = max_abs(m.matrix - wj.matrix);
        } else {
          eig[i] = wj.min_eigenvalue();
        }
      });
      summarize(s, "metric_min_eigenvalue", eig, pts, true);
      s.residuals["psi_asymmetry"] = max_of(psi_asym);
      s.residuals["compatibility"] = max_of(compat);
      s.residuals["j_square"] = max_of(jsq);
      if (closed) s.residuals["metric_consistency"] = max_of(consist);
      const double min_eig = s.residuals["metric_min_eigenvalue"];
      if (!closed) {
        kaehler_verdict_str = to_string(Verdict::NOT_KAHLER);
        s.note = "closedness fails";
      } else if (min_eig > 1e-10) {
        kaehler_verdict_str = to_string(Verdict::KAHLER);
      } else {
        kaehler_verdict_str = to_string(Verdict::PSEUDO_KAHLER);
        s.note = "metric not positive";
      }
      s.pass = kaehler_verdict_str == "KAHLER";
      add_rows("kaehler", eig, pts);
      record(std::move(s));
    }
  }

  if (want.count("polar")) {
    if (!admissible || !integrable) {
      skipped("polar", "gated on integrable");
    } else {
      CheckSummary s{"polar"};
      const std::size_t m = polar_pts.size();
      std::vector<double> holo(m), path(m), closed_form(m), sympl(m), worst(m);
      const GroupElement x = GroupElement::identity(g->rep_dim());
      const auto& formula = pair.gamma_formula();
      parallel_for(m, cfg.threads, [&](std::size_t i) {
        const AlgebraPoint& a = polar_pts[i];
        holo[i] = holomorphy_residual(gamma, x, a, fd);
        path[i] = path_independence_residual(gamma, a);
        closed_form[i] = formula ? (gamma(a).matrix - (*formula)(a).matrix).norm() : 0.0;
        sympl[i] = symplecto_residual(gamma, a, fd);
        worst[i] = std::max({holo[i], path[i], closed_form[i]});
      });
      s.residuals["holomorphy"] = max_of(holo);
      s.residuals["path_independence"] = max_of(path);
      if (formula) s.residuals["gamma_closed_form"] = max_of(closed_form);
      s.residuals["symplecto"] = max_of(sympl);
      s.note = "symplecto is reported, not gated";
      summarize(s, "max", worst, polar_pts);
      s.pass = max_of(worst) <= cfg.polar_tol;
      add_rows("polar", worst, polar_pts);
      record(std::move(s));
    }
  }

  if (want.count("quasi_equivariance")) {
    if (!admissible || !integrable) {
      skipped("quasi_equivariance", "gated on integrable");
    } else {
      CheckSummary s{"quasi_equivariance"};
      std::mt19937_64 eng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
      AlgebraPoint b = AlgebraPoint::zero(g->dim());
      for (int k = 0; k < g->dim(); ++k) b.coords(k) = 2.0 * unit_double(eng) - 1.0;
      const GroupElement z = exp_c(*g, b, AlgebraPoint::zero(g->dim()));
      const std::size_t m = polar_pts.size();
      std::vector<Eigen::MatrixXcd> q(m);
      parallel_for(m, cfg.threads,
                   [&](std::size_t i) { q[i] = quasi_equivariance_value(gamma, z, polar_pts[i]); });
      std::vector<double> dev(m);
      for (std::size_t i = 0; i < m; ++i) dev[i] = (q[i] - q[0]).norm();
      summarize(s, "max", dev, polar_pts);
      s.residuals["identity_deviation"] =
          (q[0] - Eigen::MatrixXcd::Identity(q[0].rows(), q[0].cols())).norm();
      s.pass = max_of(dev) <= cfg.quasi_tol;
      add_rows("quasi_equivariance", dev, polar_pts);
      record(std::move(s));
    }
  }

  if (want.count("potential")) {
    if (!admissible) {
      skipped("potential", "gated on admissible");
    } else if (!scaling) {
      skipped("potential", "no potential known for custom structures");
    } else {
      CheckSummary s{"potential"};
      const ScalarField f{[&](const AlgebraPoint& a) { return f_potential(*scaling, *g, a); }, {}};
      std::vector<double> r(np);
      parallel_for(np, cfg.threads,
                   [&](std::size_t i) { r[i] = potential_residual(pair, f, {pts[i]}, fd); });
      summarize(s, "max", r, pts);
      s.pass = max_of(r) <= cfg.potential_tol;
      add_rows("potential", r, pts);
      record(std::move(s));
    }
  }

  for (const auto& c : rep.checks)
    for (const auto& [k, v] : c.residuals) rep.residuals[c.name + "." + k] = v;

  if (!admissible) rep.verdict = to_string(Verdict::INADMISSIBLE);
  else if (!integrable) rep.verdict = to_string(Verdict::NON_INTEGRABLE);
  else if (!kaehler_verdict_str.empty()) rep.verdict = kaehler_verdict_str;
  else rep.verdict = rep.causes.empty() ? "PASS" : "FAIL";
  rep.pass = rep.causes.empty() && (kaehler_verdict_str.empty() || kaehler_verdict_str == "KAHLER");
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string emit_csv(const VerificationReport& report) {
  std::string out = "check,point,norm_a,value\n";
  for (const auto& r : report.rows) {
    out += r.check;
    out += ',';
    out += std::to_string(r.point);
    out += ',';
    out += format_double(r.norm_a);
    out += ',';
    out += format_double(r.value);
    out += '\n';
  }
  return out;
}

std::vector<PointRecord> parse_csv(const std::string& text) {
  std::vector<PointRecord> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "check,point,norm_a,value")
    throw ConfigError("CSV: unexpected header");
  auto parse = [](const std::string& s, auto& out) {
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
      throw ConfigError("CSV: bad number '" + s + "'");
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (std::size_t p; (p = line.find(',', start)) != std::string::npos; start = p + 1)
      f.push_back(line.substr(start, p - start));
    f.push_back(line.substr(start));
    if (f.size() != 4) throw ConfigError("CSV: expected 4 fields");
    PointRecord r;
    r.check = f[0];
    parse(f[1], r.point);
    parse(f[2], r.norm_a);
    parse(f[3], r.value);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace liekahler
