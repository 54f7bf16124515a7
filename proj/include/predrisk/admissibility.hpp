#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "predrisk/model.hpp"
#include "predrisk/risk.hpp"
#include "predrisk/ruleopt.hpp"

namespace predrisk {

inline constexpr double kDefaultDominanceTol = 1e-10;

enum class Dominance { Dominates, DominatedBy, Incomparable, RiskEqual };

inline const char* dominance_name(Dominance d) {
  switch (d) {
    case Dominance::Dominates: return "dominates";
    case Dominance::DominatedBy: return "dominated-by";
    case Dominance::Incomparable: return "incomparable";
    case Dominance::RiskEqual: return "risk-equal";
  }
  return "?";
}

/// Outcome of a pointwise-in-theta risk comparison of rule A against rule B.
/// margins[i] = risk_A(theta_i) - risk_B(theta_i); a strict inequality must
/// clear the tolerance, and its witness index is recorded.
struct DominanceVerdict {
  Dominance relation;
  std::optional<std::size_t> witness;
  std::vector<double> margins;
};

namespace detail {

inline DominanceVerdict classify_margins(std::vector<double> margins, double tol) {
  bool a_everywhere = true, b_everywhere = true;
  std::optional<std::size_t> a_witness, b_witness;
  for (std::size_t i = 0; i < margins.size(); ++i) {
    if (margins[i] > tol) a_everywhere = false;
    if (margins[i] < -tol) b_everywhere = false;
    if (!a_witness && margins[i] < -tol) a_witness = i;
    if (!b_witness && margins[i] > tol) b_witness = i;
  }
  if (a_everywhere && a_witness)
    return {Dominance::Dominates, a_witness, std::move(margins)};
  if (b_everywhere && b_witness)
    return {Dominance::DominatedBy, b_witness, std::move(margins)};
  if (a_everywhere && b_everywhere)
    return {Dominance::RiskEqual, std::nullopt, std::move(margins)};
  return {Dominance::Incomparable, std::nullopt, std::move(margins)};
}

/// Exact frequentist risk at every grid point.
inline std::vector<double> risk_vector(const FiniteModel& m, const PredictionRule& rule,
                                       const LossSpec& loss) {
  const auto outs = rule_outputs(m, rule);
  std::vector<double> risks(m.n_theta());
  for (std::size_t i = 0; i < m.n_theta(); ++i)
    risks[i] = loss.scale() * finite_theta_base_risk(m, outs, i, loss);
  return risks;
}

/// risk_contribution[i][k][p]: frequentist risk contribution at theta_i of
/// predicting pred_p at obs_k. Risk of an assignment word r is then
/// sum_k table[i][k][r_k], which makes scanning many rules cheap.
class RiskContributionTable {
 public:
  RiskContributionTable(const FiniteModel& m, const LossSpec& loss)
      : n_theta_(m.n_theta()), n_obs_(m.n_obs()), n_pred_(m.n_pred()) {
    std::vector<double> loss_mat(n_pred_ * n_pred_);
    for (std::size_t p = 0; p < n_pred_; ++p)
      for (std::size_t j = 0; j < n_pred_; ++j)
        loss_mat[p * n_pred_ + j] =
            loss.scale() * loss.base_evaluate(m.pred_space()[p], m.pred_space()[j]);
    table_.assign(n_theta_ * n_obs_ * n_pred_, 0.0);
    for (std::size_t i = 0; i < n_theta_; ++i)
      for (std::size_t k = 0; k < n_obs_; ++k)
        for (std::size_t p = 0; p < n_pred_; ++p) {
          double sum = 0.0;
          for (std::size_t j = 0; j < n_pred_; ++j)
            sum += loss_mat[p * n_pred_ + j] * m.joint(i, j, k);
          table_[(i * n_obs_ + k) * n_pred_ + p] = sum;
        }
  }

  double risk(std::size_t theta, const std::vector<std::size_t>& assignment) const {
    double sum = 0.0;
    for (std::size_t k = 0; k < n_obs_; ++k)
      sum += table_[(theta * n_obs_ + k) * n_pred_ + assignment[k]];
    return sum;
  }

  std::size_t n_theta() const { return n_theta_; }

 private:
  std::size_t n_theta_, n_obs_, n_pred_;
  std::vector<double> table_;
};

}  // namespace detail

/// Classifies rule A against rule B by exact frequentist risk at every theta.
/// A dominates B iff risk_A <= risk_B + tol everywhere and
/// risk_A < risk_B - tol somewhere.
inline DominanceVerdict compare_rules(const FiniteModel& m, const PredictionRule& a,
                                      const PredictionRule& b, const LossSpec& loss,
                                      double tol = kDefaultDominanceTol) {
  if (!(tol > 0.0)) throw std::invalid_argument("compare_rules: tol must be > 0");
  const auto risk_a = detail::risk_vector(m, a, loss);
  const auto risk_b = detail::risk_vector(m, b, loss);
  std::vector<double> margins(risk_a.size());
  for (std::size_t i = 0; i < margins.size(); ++i) margins[i] = risk_a[i] - risk_b[i];
  return detail::classify_margins(std::move(margins), tol);
}

/// Scans every deterministic rule (lexicographic order) for one that
/// dominates the given rule; empty means no enumerated rule dominates it.
inline std::optional<std::pair<PredictionRule, DominanceVerdict>> find_dominating_rule(
    const FiniteModel& m, const PredictionRule& rule, const LossSpec& loss,
    double tol = kDefaultDominanceTol,
    std::uint64_t cap = kDefaultEnumerationCap) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_dominating_rule: tol must be > 0");
  const auto enumeration = enumerate_all_rules(m, cap);
  const auto target = detail::risk_vector(m, rule, loss);
  const detail::RiskContributionTable table(m, loss);

  for (const auto& assignment : enumeration) {
    bool everywhere = true;
    bool somewhere = false;
    std::vector<double> margins(m.n_theta());
    for (std::size_t i = 0; i < m.n_theta(); ++i) {
      margins[i] = table.risk(i, assignment) - target[i];
      if (margins[i] > tol) {
        everywhere = false;
        break;
      }
      if (margins[i] < -tol) somewhere = true;
    }
    if (everywhere && somewhere) {
      auto verdict = detail::classify_margins(std::move(margins), tol);
      return std::make_pair(PredictionRule::index_table(assignment),
                            std::move(verdict));
    }
  }
  return std::nullopt;
}

/// One enumerated rule with its risk profile and dominance status.
struct RuleRecord {
  std::vector<std::size_t> assignment;
  std::vector<double> risks;                  // frequentist risk per theta
  bool admissible = true;
  std::optional<std::uint64_t> dominated_by;  // witnessing rule index
  std::optional<std::size_t> witness_theta;   // theta index of the strict gap
};

/// Admissible/inadmissible partition of the full rule space.
struct AdmissibilityReport {
  std::vector<RuleRecord> rules;
  std::uint64_t bayes_index = 0;  // enumeration index of the Bayes rule
  double tol = kDefaultDominanceTol;

  std::size_t admissible_count() const {
    std::size_t n = 0;
    for (const auto& r : rules) n += r.admissible;
    return n;
  }
};

/// Labels every deterministic rule, witnessing each inadmissible rule with
/// the first rule (by enumeration index) that dominates it.
inline AdmissibilityReport admissibility_report(const FiniteModel& m,
                                                const LossSpec& loss,
                                                double tol = kDefaultDominanceTol,
                                                std::uint64_t cap = kDefaultEnumerationCap) {
  if (!(tol > 0.0)) throw std::invalid_argument("admissibility_report: tol must be > 0");
  const auto enumeration = enumerate_all_rules(m, cap);
  const detail::RiskContributionTable table(m, loss);

  AdmissibilityReport report;
  report.tol = tol;
  report.rules.reserve(enumeration.size());
  std::vector<double> totals;
  totals.reserve(enumeration.size());
  for (const auto& assignment : enumeration) {
    RuleRecord rec;
    rec.assignment = assignment;
    rec.risks.resize(m.n_theta());
    double total = 0.0;
    for (std::size_t i = 0; i < m.n_theta(); ++i) {
      rec.risks[i] = table.risk(i, assignment);
      total += rec.risks[i];
    }
    totals.push_back(total);
    report.rules.push_back(std::move(rec));
  }

  const std::size_t n = report.rules.size();
  const double prune = m.n_theta() * tol;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (c == r) continue;
      // A dominator's risk total must undercut ours.
      if (totals[c] >= totals[r] + prune) continue;
      bool everywhere = true;
      std::optional<std::size_t> witness;
      for (std::size_t i = 0; i < m.n_theta(); ++i) {
        const double d = report.rules[c].risks[i] - report.rules[r].risks[i];
        if (d > tol) {
          everywhere = false;
          break;
        }
        if (!witness && d < -tol) witness = i;
      }
      if (everywhere && witness) {
        report.rules[r].admissible = false;
        report.rules[r].dominated_by = c;
        report.rules[r].witness_theta = witness;
        break;
      }
    }
  }

  const auto bayes = bayes_prediction_rule(m, loss);
  report.bayes_index = rule_enumeration_index(bayes.indices(), m.n_pred());
  return report;
}

}  // namespace predrisk
