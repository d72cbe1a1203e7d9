#pragma once

// The pair (c, s) of End(g)-valued fields on A_g that encodes an admissible
// almost complex structure, with phi = c + i s.

#include "liekahler/lie_core.hpp"

#include <functional>
#include <optional>
#include <string>

namespace liekahler {

enum class Provenance { standard, rescaled, custom };

const char* to_string(Provenance p);

struct PairValue {
  Eigen::MatrixXd c;
  Eigen::MatrixXd s;
};

class FormPair {
 public:
  using Evaluator = std::function<PairValue(const AlgebraPoint&)>;
  using GammaFormula = std::function<GroupElement(const AlgebraPoint&)>;

  FormPair(AlgebraPtr algebra, Provenance provenance, std::string name, Evaluator eval,
           bool analytic_derivative = false);

  const LieAlgebraSpec& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  Provenance provenance() const { return provenance_; }
  const std::string& name() const { return name_; }
  bool analytic_derivative() const { return analytic_derivative_; }

  /// Evaluates (c(a), s(a)); callbacks must be reentrant.
  PairValue evaluate(const AlgebraPoint& a) const;

  /// Known closed form of the integrated map gamma, if any.
  const std::optional<GammaFormula>& gamma_formula() const { return gamma_; }
  FormPair& with_gamma_formula(GammaFormula f) {
    gamma_ = std::move(f);
    return *this;
  }

 private:
  AlgebraPtr algebra_;
  Provenance provenance_;
  std::string name_;
  Evaluator eval_;
  bool analytic_derivative_;
  std::optional<GammaFormula> gamma_;
};

/// c = (cos(ad a) - Id)/ad a, s = sin(ad a)/ad a; gamma(a) = exp(i a).
FormPair standard_pair(AlgebraPtr g);

/// Constant fields.
FormPair constant_pair(AlgebraPtr g, Eigen::MatrixXd c, Eigen::MatrixXd s, std::string name = "constant");

/// c_st + eps [a,[a,.]]: non-integrable for eps != 0 on non-abelian g.
FormPair perturbed_pair(AlgebraPtr g, double eps);

/// c_st + [b0,.]: non-integrable (curvature -[[b0,V],[b0,W]] at a = 0).
FormPair bracket_shift_pair(AlgebraPtr g, const AlgebraPoint& b0);

/// Pair of gamma(a) = exp([b0,a]) exp(i a): integrable, with <mu,c> not closed.
FormPair gauge_twisted_pair(AlgebraPtr g, const AlgebraPoint& b0);

/// (c, s) sampled on a tensor grid and multilinearly interpolated.
/// JSON: {"points": [[...]], "c_matrices": [[[...]]], "s_matrices": [[[...]]]}.
FormPair tabulated_pair_from_json(AlgebraPtr g, const std::string& json_text,
                                  std::string name = "tabulated");
/// Tabulates `pair` on the grid axes[0] x ... x axes[n-1].
std::string tabulate_pair_json(const FormPair& pair, const std::vector<std::vector<double>>& axes);

}  // namespace liekahler
