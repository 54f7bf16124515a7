#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "predrisk/errors.hpp"
#include "predrisk/inference.hpp"
#include "predrisk/model.hpp"
#include "predrisk/numeric.hpp"
#include "predrisk/risk.hpp"

namespace predrisk {

// Ties within this absolute margin of the minimum break to the lowest
// prediction index (or smallest value), so derived rules are reproducible
// and invariant under loss scaling.
inline constexpr double kArgminTieTol = 1e-12;

/// The known minimizer of posterior predictive risk for the analytic loss
/// forms: mean (squared), smallest median (absolute), highest-probability
/// point with lowest-index tie-break (zero-one).
inline Point closed_form_predictor(const PosteriorPredictive& predictive,
                                   LossSpec::Form form) {
  switch (form) {
    case LossSpec::Form::Squared: return predictive_mean(predictive);
    case LossSpec::Form::Absolute: return predictive_median(predictive);
    case LossSpec::Form::ZeroOne: return predictive_mode(predictive);
    case LossSpec::Form::Table:
      throw std::invalid_argument(
          "closed_form_predictor: table losses have no closed form; use the "
          "exhaustive argmin");
  }
  throw std::logic_error("closed_form_predictor: unreachable");
}

namespace detail {

/// Exhaustive argmin of expected loss over a finite candidate set, on base
/// (unscaled) loss values with the deterministic tie-break.
inline std::size_t argmin_expected_loss(const PosteriorPredictive& predictive,
                                        const std::vector<Point>& candidates,
                                        const LossSpec& loss) {
  std::vector<double> values(candidates.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    values[c] = expected_loss_base(predictive, candidates[c], loss).value;
    if (values[c] < best) best = values[c];
  }
  if (!std::isfinite(best))
    throw std::runtime_error("bayes_prediction_rule: objective is not finite");
  for (std::size_t c = 0; c < candidates.size(); ++c)
    if (values[c] <= best + kArgminTieTol) return c;
  return 0;
}

}  // namespace detail

/// Minimizes posterior predictive risk over a continuous scalar prediction by
/// golden-section search on a bracket spanning the predictive's 1e-6 and
/// 1 - 1e-6 quantiles. Intended for the unimodal analytic losses.
inline double minimize_posterior_predictive_risk(const PosteriorPredictive& predictive,
                                                 const LossSpec& loss,
                                                 double xtol = 1e-9) {
  double lo, hi;
  if (const auto* d = std::get_if<DiscreteDistribution>(&predictive)) {
    lo = d->quantile1d(1e-6);
    hi = d->quantile1d(1.0 - 1e-6);
  } else {
    const auto& cf = std::get<ClosedFormPredictive>(predictive);
    lo = cf.quantile(1e-6);
    hi = cf.quantile(1.0 - 1e-6);
  }
  if (lo >= hi) return lo;
  auto objective = [&](double y) {
    return detail::expected_loss_base(predictive, Point{y}, loss).value;
  };
  double x = golden_section_minimize(objective, lo, hi, xtol);
  if (loss.form() == LossSpec::Form::Squared) {
    // The squared objective is exactly quadratic in the prediction, so one
    // three-point parabola fit pushes through the evaluation-noise plateau
    // that golden-section alone bottoms out on (~sqrt(eps) * scale).
    const double h = std::max(1e-4, 1e-4 * std::abs(x));
    const double f_lo = objective(x - h), f_mid = objective(x), f_hi = objective(x + h);
    const double curvature = f_hi - 2.0 * f_mid + f_lo;
    if (curvature > 0.0) {
      const double vertex = x - 0.5 * h * (f_hi - f_lo) / curvature;
      if (vertex > lo && vertex < hi && objective(vertex) <= f_mid) x = vertex;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Bayes prediction rules
// ---------------------------------------------------------------------------

/// Derives the Bayes prediction rule of a finite model by exhaustive argmin
/// of posterior predictive risk at every observation.
inline PredictionRule bayes_prediction_rule(const FiniteModel& m,
                                            const LossSpec& loss) {
  std::vector<std::size_t> choice(m.n_obs());
  for (std::size_t k = 0; k < m.n_obs(); ++k) {
    const auto predictive = posterior_predictive(m, m.obs_space()[k]);
    choice[k] = detail::argmin_expected_loss(predictive, m.pred_space(), loss);
  }
  return PredictionRule::index_table(std::move(choice));
}

/// Conjugate families return the closed-form minimizer as a lazily evaluated
/// tag; table losses fall back to exhaustive argmin over the loss domain
/// (finite observation summaries only).
inline PredictionRule bayes_prediction_rule(const ConjugateModel& m,
                                            const LossSpec& loss) {
  switch (loss.form()) {
    case LossSpec::Form::Squared:
      return PredictionRule::closed_form(PredictionRule::Tag::PredictiveMean);
    case LossSpec::Form::Absolute:
      return PredictionRule::closed_form(PredictionRule::Tag::PredictiveMedian);
    case LossSpec::Form::ZeroOne:
      return PredictionRule::closed_form(PredictionRule::Tag::PredictiveMode);
    case LossSpec::Form::Table: {
      if (!m.finite_obs_summaries())
        throw std::invalid_argument(
            "table-loss rule derivation requires finite observation summaries");
      std::vector<Point> outputs;
      for (double s : m.obs_summary_values()) {
        const auto predictive = posterior_predictive(m, s);
        outputs.push_back(
            loss.domain()[detail::argmin_expected_loss(predictive, loss.domain(), loss)]);
      }
      return PredictionRule::value_table(std::move(outputs));
    }
  }
  throw std::logic_error("bayes_prediction_rule: unreachable");
}

inline PredictionRule bayes_prediction_rule(const Model& m, const LossSpec& loss) {
  return std::visit([&](const auto& mm) { return bayes_prediction_rule(mm, loss); }, m);
}

// ---------------------------------------------------------------------------
// Rule enumeration
// ---------------------------------------------------------------------------

/// Every deterministic map obs-space -> pred-space, yielded exactly once in
/// lexicographic order of the assignment word (all-zeros first, last
/// observation index cycling fastest).
class RuleEnumeration {
 public:
  RuleEnumeration(std::size_t n_obs, std::size_t n_pred, std::uint64_t cap)
      : n_obs_(n_obs), n_pred_(n_pred) {
    if (n_obs == 0 || n_pred == 0)
      throw std::invalid_argument("RuleEnumeration: empty spaces");
    std::uint64_t count = 1;
    bool overflow = false;
    for (std::size_t k = 0; k < n_obs; ++k) {
      if (count > std::numeric_limits<std::uint64_t>::max() / n_pred) {
        count = std::numeric_limits<std::uint64_t>::max();
        overflow = true;
        break;
      }
      count *= n_pred;
    }
    if (overflow || count > cap) throw EnumerationCapError(count, overflow, cap);
    count_ = count;
  }

  std::uint64_t size() const { return count_; }
  std::size_t n_obs() const { return n_obs_; }
  std::size_t n_pred() const { return n_pred_; }

  class iterator {
   public:
    using value_type = std::vector<std::size_t>;

    iterator() : done_(true) {}
    iterator(std::size_t n_obs, std::size_t n_pred)
        : assignment_(n_obs, 0), n_pred_(n_pred), done_(false) {}

    const value_type& operator*() const { return assignment_; }
    const value_type* operator->() const { return &assignment_; }

    iterator& operator++() {
      std::size_t k = assignment_.size();
      while (k > 0) {
        --k;
        if (++assignment_[k] < n_pred_) return *this;
        assignment_[k] = 0;
      }
      done_ = true;
      return *this;
    }

    friend bool operator==(const iterator& a, const iterator& b) {
      if (a.done_ != b.done_) return false;
      return a.done_ || a.assignment_ == b.assignment_;
    }
    friend bool operator!=(const iterator& a, const iterator& b) { return !(a == b); }

   private:
    value_type assignment_;
    std::size_t n_pred_ = 0;
    bool done_;
  };

  iterator begin() const { return iterator(n_obs_, n_pred_); }
  iterator end() const { return iterator(); }

 private:
  std::size_t n_obs_;
  std::size_t n_pred_;
  std::uint64_t count_ = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

inline RuleEnumeration enumerate_all_rules(const FiniteModel& m,
                                           std::uint64_t cap = kDefaultEnumerationCap) {
  return RuleEnumeration(m.n_obs(), m.n_pred(), cap);
}

/// Position of an assignment word in the lexicographic enumeration.
inline std::uint64_t rule_enumeration_index(const std::vector<std::size_t>& assignment,
                                            std::size_t n_pred) {
  std::uint64_t idx = 0;
  for (std::size_t a : assignment) idx = idx * n_pred + a;
  return idx;
}

}  // namespace predrisk
