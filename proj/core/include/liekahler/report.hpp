#pragma once

// Configuration-driven verification runs and their JSON/CSV reports.

#include "liekahler/kaehler.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace liekahler {

const char* version();

/// Checks in dependency order.
const std::vector<std::string>& all_checks();

struct RunConfig {
  std::string group = "su2";
  /// standard | rescaled:<family or scaling JSON path> | custom:<tabulated JSON path>
  std::string structure = "standard";
  std::size_t samples = 64;
  std::uint64_t seed = 1;
  double radius = 2.0;
  double h = 1e-4;
  double tau = 1e-5;
  std::vector<std::string> checks = all_checks();
  std::string output;
  unsigned threads = 1;
  bool timing = false;

  double integrability_threshold = 1e-4;
  /// Points (a prefix of the sample) used by the polar and quasi-equivariance checks.
  std::size_t polar_samples = 16;
  int gamma_steps = 1000;
  double polar_tol = 1e-5;
  double quasi_tol = 1e-6;
  double potential_tol = 1e-7;

  /// Throws ConfigError: samples >= 1, h in [1e-8, 1e-2], tau > 0, known checks.
  void validate() const;
};

/// Applies the keys present in a JSON object on top of `base`.
RunConfig config_from_json(const std::string& json_text, RunConfig base = {});
std::string config_to_json(const RunConfig& config);

extern const char* const kSamplerAlgorithm;

/// Uniform points of the gram-norm ball of radius r, by rejection from the
/// bounding box |a_i| <= r sqrt((gram^-1)_ii). Doubles are (x >> 11) 2^-53
/// of successive mt19937_64 outputs.
std::vector<AlgebraPoint> sample_ball(const LieAlgebraSpec& g, std::size_t count,
                                      std::uint64_t seed, double radius);

struct PointRecord {
  std::string check;
  std::size_t point = 0;
  double norm_a = 0.0;
  double value = 0.0;
};

struct WorstOffender {
  std::size_t point = 0;
  Eigen::VectorXd coords;
  double value = 0.0;
};

struct CheckSummary {
  explicit CheckSummary(std::string n = {}) : name(std::move(n)) {}

  std::string name;
  bool pass = false;
  bool skipped = false;
  std::string note;
  std::map<std::string, double> residuals;
  WorstOffender worst;
};

struct VerificationReport {
  RunConfig config;
  std::string pair_name;
  std::size_t dim = 0;
  std::vector<CheckSummary> checks;
  std::vector<PointRecord> rows;
  std::map<std::string, double> residuals;
  std::map<std::string, bool> flags;
  std::vector<std::string> causes;
  std::string verdict;
  bool pass = false;
  double wall_time_s = 0.0;

  const CheckSummary* find(const std::string& check) const;
  /// Deterministic for fixed config; wall time only with config.timing.
  std::string to_json() const;
  /// 0 on pass, 2 on a negative verdict.
  int exit_code() const { return pass ? 0 : 2; }
};

VerificationReport run(const RunConfig& config);

/// Columns check,point,norm_a,value; numbers with 17 significant digits.
std::string emit_csv(const VerificationReport& report);
std::vector<PointRecord> parse_csv(const std::string& text);

/// Resolves the algebra and pair named in a config.
AlgebraPtr resolve_algebra(const std::string& group);
FormPair resolve_pair(AlgebraPtr g, const std::string& structure);

}  // namespace liekahler
