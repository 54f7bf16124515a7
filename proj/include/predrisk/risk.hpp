#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <variant>
#include <vector>

#include "predrisk/inference.hpp"
#include "predrisk/model.hpp"

namespace predrisk {

namespace detail {

struct BaseRisk {
  double value;  // before the loss scale multiplier
  double error;  // truncation residual bound, 0 when exact
};

// --- expected loss under a 1-D count distribution, exact for every form ----
//
// squared:  E(yh - T)^2 = Var T + (yh - E T)^2
// absolute: E|yh - T|   = (E T - yh) + 2 * sum_{t <= yh} (yh - t) pmf(t)
// zero-one: 1 - P(|T - yh| <= band), a finite window
template <typename Pmf>
BaseRisk count_expected_loss(const LossSpec& loss, double y_hat, double mean,
                             double variance, Pmf&& pmf, int support_hi) {
  switch (loss.form()) {
    case LossSpec::Form::Squared: {
      const double bias = y_hat - mean;
      return {variance + bias * bias, 0.0};
    }
    case LossSpec::Form::Absolute: {
      double partial = 0.0;
      const int top = static_cast<int>(std::floor(y_hat));
      for (int t = 0; t <= std::min(top, support_hi); ++t)
        partial += (y_hat - t) * pmf(t);
      return {(mean - y_hat) + 2.0 * partial, 0.0};
    }
    case LossSpec::Form::ZeroOne: {
      const int lo = std::max(0, static_cast<int>(std::ceil(y_hat - loss.band())));
      const int hi = std::min(support_hi,
                              static_cast<int>(std::floor(y_hat + loss.band())));
      double inside = 0.0;
      for (int t = lo; t <= hi; ++t) inside += pmf(t);
      return {1.0 - inside, 0.0};
    }
    case LossSpec::Form::Table:
      throw std::invalid_argument(
          "table loss is not defined over an unbounded count support");
  }
  return {0.0, 0.0};
}

inline BaseRisk expected_loss_base(const PosteriorPredictive& pp, const Point& y_hat,
                                   const LossSpec& loss) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&pp)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < d->size(); ++i)
      sum += d->prob(i) * loss.base_evaluate(y_hat, d->point(i));
    return {sum, 0.0};
  }

  const auto& cf = std::get<ClosedFormPredictive>(pp);
  if (y_hat.size() != 1)
    throw std::invalid_argument("expected_loss: closed-form predictives are 1-D");
  const double yh = y_hat[0];

  if (const auto* n = cf.as<NormalPredictive>()) {
    const double sd = std::sqrt(n->variance);
    switch (loss.form()) {
      case LossSpec::Form::Squared: {
        const double bias = yh - n->mean;
        return {n->variance + bias * bias, 0.0};
      }
      case LossSpec::Form::Absolute:
        return {normal_mean_abs_dev(yh, n->mean, n->variance), 0.0};
      case LossSpec::Form::ZeroOne: {
        const double inside = normal_cdf((yh + loss.band() - n->mean) / sd) -
                              normal_cdf((yh - loss.band() - n->mean) / sd);
        return {1.0 - inside, 0.0};
      }
      case LossSpec::Form::Table:
        throw std::invalid_argument(
            "table loss is not defined over a continuous prediction space");
    }
  }

  if (const auto* b = cf.as<BetaBinomialPredictive>()) {
    if (loss.form() == LossSpec::Form::Table) {
      double sum = 0.0;
      for (int t = 0; t <= b->n; ++t)
        sum += b->pmf(t) * loss.base_evaluate(y_hat, Point{static_cast<double>(t)});
      return {sum, 0.0};
    }
    return count_expected_loss(loss, yh, b->mean(), b->variance(),
                               [&](int t) { return b->pmf(t); }, b->n);
  }

  const auto* nb = cf.as<NegativeBinomialPredictive>();
  return count_expected_loss(loss, yh, nb->mean(), nb->variance(),
                             [&](int t) { return nb->pmf(t); },
                             ClosedFormPredictive::kCountScanCap);
}

}  // namespace detail

/// Expected loss of the point prediction y_hat under a predictive
/// distribution: exact summation / closed form for every shipped loss.
inline RiskEstimate expected_loss(const PosteriorPredictive& pp, const Point& y_hat,
                                  const LossSpec& loss) {
  const auto base = detail::expected_loss_base(pp, y_hat, loss);
  if (base.error > 0.0)
    return RiskEstimate::quadrature(loss.scale() * base.value,
                                    loss.scale() * base.error);
  return RiskEstimate::exact(loss.scale() * base.value);
}

// ---------------------------------------------------------------------------
// Posterior predictive risk
// ---------------------------------------------------------------------------

inline RiskEstimate posterior_predictive_risk(const FiniteModel& m, const Point& y_obs,
                                              const Point& y_hat, const LossSpec& loss) {
  return expected_loss(posterior_predictive(m, y_obs), y_hat, loss);
}

inline RiskEstimate posterior_predictive_risk(const ConjugateModel& m, double y_obs,
                                              double y_hat, const LossSpec& loss) {
  return expected_loss(posterior_predictive(m, y_obs), Point{y_hat}, loss);
}

// ---------------------------------------------------------------------------
// Frequentist prediction risk
// ---------------------------------------------------------------------------

namespace detail {

/// Rule outputs per observation index. Closed-form rules can be undefined at
/// zero-evidence observations; those slots stay empty and may only be touched
/// by zero-mass columns.
inline std::vector<std::optional<Point>> rule_outputs(const FiniteModel& m,
                                                      const PredictionRule& rule) {
  if ((rule.kind() == PredictionRule::Kind::IndexTable ||
       rule.kind() == PredictionRule::Kind::ValueTable) &&
      !rule.total_over(m.n_obs()))
    throw RuleMismatchError("rule table does not cover the observation space");

  std::vector<std::optional<Point>> outs(m.n_obs());
  for (std::size_t k = 0; k < m.n_obs(); ++k) {
    switch (rule.kind()) {
      case PredictionRule::Kind::IndexTable: {
        const std::size_t p = rule.indices()[k];
        if (p >= m.n_pred())
          throw RuleMismatchError("rule prediction index out of range");
        outs[k] = m.pred_space()[p];
        break;
      }
      case PredictionRule::Kind::ValueTable:
        outs[k] = rule.values()[k];
        break;
      case PredictionRule::Kind::ClosedForm:
        try {
          outs[k] = predictive_statistic(posterior_predictive(m, m.obs_space()[k]),
                                         rule.tag());
        } catch (const ConditioningError&) {
          outs[k] = std::nullopt;
        }
        break;
    }
  }
  return outs;
}

inline double finite_theta_base_risk(const FiniteModel& m,
                                     const std::vector<std::optional<Point>>& outs,
                                     std::size_t i, const LossSpec& loss) {
  double sum = 0.0;
  for (std::size_t k = 0; k < m.n_obs(); ++k) {
    double col = 0.0;
    for (std::size_t j = 0; j < m.n_pred(); ++j) col += m.joint(i, j, k);
    if (col == 0.0) continue;
    if (!outs[k])
      throw ConditioningError("rule is undefined at observation " +
                              point_to_string(m.obs_space()[k]) +
                              " which has positive probability under theta[" +
                              std::to_string(i) + "]");
    for (std::size_t j = 0; j < m.n_pred(); ++j) {
      const double t = m.joint(i, j, k);
      if (t != 0.0) sum += t * loss.base_evaluate(*outs[k], m.pred_space()[j]);
    }
  }
  return sum;
}

// Posterior-mean weight for the Normal family: y_hat(obs) = a + b * obs.
struct AffineRule {
  double a;
  double b;
};

inline AffineRule normal_posterior_mean_rule(const NormalKnownVar& nn) {
  const double prior_precision = 1.0 / nn.tau0_sq;
  const double data_precision = nn.n_obs / nn.sigma_sq;
  const double b = data_precision / (prior_precision + data_precision);
  return {(1.0 - b) * nn.mu0, b};
}

/// E L(D + yh_shift, 0) style evaluation for D ~ Normal(mean, variance):
/// squared/absolute/zero-one losses of a normal discrepancy, in closed form.
inline double normal_discrepancy_base_loss(const LossSpec& loss, double mean,
                                           double variance) {
  const double sd = std::sqrt(variance);
  switch (loss.form()) {
    case LossSpec::Form::Squared:
      return variance + mean * mean;
    case LossSpec::Form::Absolute:
      return normal_mean_abs_dev(0.0, mean, variance);
    case LossSpec::Form::ZeroOne: {
      const double inside = normal_cdf((loss.band() - mean) / sd) -
                            normal_cdf((-loss.band() - mean) / sd);
      return 1.0 - inside;
    }
    case LossSpec::Form::Table:
      throw std::invalid_argument(
          "table loss is not defined over a continuous prediction space");
  }
  return 0.0;
}

/// Affine majorant yh(s) <= A + B s for every closed-form tag output on the
/// Gamma-Poisson posterior predictive (mean is affine, the mode is below the
/// mean, the median is within one standard deviation of the mean, and
/// sd <= (1 + var) / 2).
inline AffineRule gp_output_majorant(const GammaPoisson& gp) {
  const double denom = gp.rate + gp.n_obs;
  const double cm = gp.n_pred / denom;
  const double cv = gp.n_pred * (denom + gp.n_pred) / (denom * denom);
  return {gp.shape * cm + 0.5 * (1.0 + gp.shape * cv), cm + 0.5 * cv};
}

struct Quadratic {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
};

inline Quadratic square_affine(const AffineRule& f) {
  return {f.a * f.a, 2.0 * f.a * f.b, f.b * f.b};
}

/// Truncated expectation of inner(s) over a count distribution for s, with a
/// rigorous residual bound built from a quadratic majorant of inner and the
/// tail partial moments of the outer distribution.
template <typename Pmf, typename Inner>
BaseRisk truncated_count_expectation(Pmf&& pmf, double outer_mean,
                                     double outer_second_moment, Inner&& inner,
                                     const Quadratic& inner_bound,
                                     double tail_mass_target = 1e-14) {
  double total = 0.0, mass = 0.0, m1 = 0.0, m2 = 0.0;
  int s = 0;
  for (; s < ClosedFormPredictive::kCountScanCap; ++s) {
    const double p = pmf(s);
    if (p > 0.0) {
      total += p * inner(s);
      mass += p;
      m1 += p * s;
      m2 += p * static_cast<double>(s) * s;
    }
    if (1.0 - mass < tail_mass_target && s > outer_mean) break;
  }
  const double tail0 = std::max(0.0, 1.0 - mass);
  const double tail1 = std::max(0.0, outer_mean - m1);
  const double tail2 = std::max(0.0, outer_second_moment - m2);
  const double err =
      inner_bound.c0 * tail0 + inner_bound.c1 * tail1 + inner_bound.c2 * tail2;
  return {total, err};
}

}  // namespace detail

/// Frequentist prediction risk at one grid point of a finite model: the
/// exact double sum of L(rule(y_obs), y_pred) against t[theta][.][.].
inline RiskEstimate frequentist_prediction_risk(const FiniteModel& m,
                                                const PredictionRule& rule,
                                                std::size_t theta_index,
                                                const LossSpec& loss) {
  if (theta_index >= m.n_theta())
    throw std::invalid_argument("theta index outside the parameter grid");
  const auto outs = detail::rule_outputs(m, rule);
  return RiskEstimate::exact(
      loss.scale() * detail::finite_theta_base_risk(m, outs, theta_index, loss));
}

inline RiskEstimate frequentist_prediction_risk(const FiniteModel& m,
                                                const PredictionRule& rule,
                                                const Point& theta,
                                                const LossSpec& loss) {
  const auto i = m.theta_index(theta);
  if (!i)
    throw std::invalid_argument("theta " + point_to_string(theta) +
                                " is outside the parameter space");
  return frequentist_prediction_risk(m, rule, *i, loss);
}

/// Frequentist prediction risk of a conjugate model with theta held fixed.
/// Beta-Bernoulli and Normal evaluate exactly; Gamma-Poisson truncates the
/// count sums and reports the residual bound.
inline RiskEstimate frequentist_prediction_risk(const ConjugateModel& m,
                                                const PredictionRule& rule,
                                                double theta, const LossSpec& loss) {
  if (!m.parameter_space().contains(Point{theta}))
    throw std::invalid_argument("theta " + std::to_string(theta) +
                                " is outside the parameter space");

  if (const auto* bb = m.as<BetaBernoulli>()) {
    double total = 0.0;
    for (int s = 0; s <= bb->n_obs; ++s) {
      const double ps = binomial_pmf(bb->n_obs, theta, s);
      if (ps == 0.0) continue;
      const Point yh = apply_rule(m, rule, s);
      double inner = 0.0;
      for (int t = 0; t <= bb->n_pred; ++t)
        inner += binomial_pmf(bb->n_pred, theta, t) *
                 loss.base_evaluate(yh, Point{static_cast<double>(t)});
      total += ps * inner;
    }
    return RiskEstimate::exact(loss.scale() * total);
  }

  if (const auto* gp = m.as<GammaPoisson>()) {
    if (rule.kind() != PredictionRule::Kind::ClosedForm)
      throw RuleMismatchError(
          "table rules cannot be total over unbounded count observations");
    const double obs_rate = gp->n_obs * theta;
    const double pred_rate = gp->n_pred * theta;
    auto inner = [&](int s) {
      const double yh = apply_rule(m, rule, s)[0];
      return detail::count_expected_loss(
                 loss, yh, pred_rate, pred_rate,
                 [&](int t) { return poisson_pmf(pred_rate, t); },
                 ClosedFormPredictive::kCountScanCap)
          .value;
    };
    const auto yh_bound = detail::gp_output_majorant(*gp);
    detail::Quadratic bound;
    switch (loss.form()) {
      case LossSpec::Form::Squared: {
        const auto q = detail::square_affine(yh_bound);
        bound = {pred_rate + 2.0 * pred_rate * pred_rate + 2.0 * q.c0, 2.0 * q.c1,
                 2.0 * q.c2};
        break;
      }
      case LossSpec::Form::Absolute:
        bound = {yh_bound.a + pred_rate, yh_bound.b, 0.0};
        break;
      case LossSpec::Form::ZeroOne:
        bound = {1.0, 0.0, 0.0};
        break;
      case LossSpec::Form::Table:
        throw std::invalid_argument(
            "table loss is not defined over an unbounded count support");
    }
    const auto base = detail::truncated_count_expectation(
        [&](int s) { return poisson_pmf(obs_rate, s); }, obs_rate,
        obs_rate + obs_rate * obs_rate, inner, bound);
    return RiskEstimate::quadrature(loss.scale() * base.value,
                                    loss.scale() * base.error);
  }

  const auto* nn = m.as<NormalKnownVar>();
  if (rule.kind() != PredictionRule::Kind::ClosedForm)
    throw RuleMismatchError(
        "table rules cannot be total over continuous observations");
  // Every closed-form tag reduces to the posterior mean here, which is
  // affine in the observed mean, so the discrepancy yh - y_pred is normal.
  const auto aff = detail::normal_posterior_mean_rule(*nn);
  const double mean = aff.a + (aff.b - 1.0) * theta;
  const double variance =
      aff.b * aff.b * nn->sigma_sq / nn->n_obs + nn->sigma_sq / nn->n_pred;
  return RiskEstimate::exact(
      loss.scale() * detail::normal_discrepancy_base_loss(loss, mean, variance));
}

// ---------------------------------------------------------------------------
// Bayes prediction risk
// ---------------------------------------------------------------------------

/// Bayes prediction risk of a finite model: the exact triple sum of
/// L(rule(y_obs), y_pred) t[theta][y_pred][y_obs] g(theta).
inline RiskEstimate bayes_prediction_risk(const FiniteModel& m,
                                          const PredictionRule& rule,
                                          const LossSpec& loss) {
  const auto outs = detail::rule_outputs(m, rule);
  double total = 0.0;
  for (std::size_t i = 0; i < m.n_theta(); ++i)
    total += m.prior_weight(i) * detail::finite_theta_base_risk(m, outs, i, loss);
  return RiskEstimate::exact(loss.scale() * total);
}

inline RiskEstimate bayes_prediction_risk(const ConjugateModel& m,
                                          const PredictionRule& rule,
                                          const LossSpec& loss) {
  if (const auto* bb = m.as<BetaBernoulli>()) {
    // Average posterior predictive risk over the prior predictive of the
    // observation summary; both supports are finite, so the sum is exact.
    const BetaBinomialPredictive obs_marginal{bb->alpha, bb->beta, bb->n_obs};
    double total = 0.0;
    for (int s = 0; s <= bb->n_obs; ++s) {
      const Point yh = apply_rule(m, rule, s);
      const auto inner =
          detail::expected_loss_base(posterior_predictive(m, s), yh, loss);
      total += obs_marginal.pmf(s) * inner.value;
    }
    return RiskEstimate::exact(loss.scale() * total);
  }

  if (const auto* gp = m.as<GammaPoisson>()) {
    if (rule.kind() != PredictionRule::Kind::ClosedForm)
      throw RuleMismatchError(
          "table rules cannot be total over unbounded count observations");
    const double p0 = gp->rate / (gp->rate + gp->n_obs);
    const NegativeBinomialPredictive obs_marginal{gp->shape, p0};
    auto inner = [&](int s) {
      const Point yh = apply_rule(m, rule, s);
      return detail::expected_loss_base(posterior_predictive(m, s), yh, loss).value;
    };
    const auto yh_bound = detail::gp_output_majorant(*gp);
    const double denom = gp->rate + gp->n_obs;
    const detail::AffineRule pred_mean{gp->shape * gp->n_pred / denom,
                                       gp->n_pred / denom};
    const detail::AffineRule pred_var{
        gp->shape * gp->n_pred * (denom + gp->n_pred) / (denom * denom),
        gp->n_pred * (denom + gp->n_pred) / (denom * denom)};
    detail::Quadratic bound;
    switch (loss.form()) {
      case LossSpec::Form::Squared: {
        const auto qy = detail::square_affine(yh_bound);
        const auto qm = detail::square_affine(pred_mean);
        bound = {pred_var.a + 2.0 * qy.c0 + 2.0 * qm.c0,
                 pred_var.b + 2.0 * qy.c1 + 2.0 * qm.c1, 2.0 * (qy.c2 + qm.c2)};
        break;
      }
      case LossSpec::Form::Absolute:
        bound = {yh_bound.a + pred_mean.a, yh_bound.b + pred_mean.b, 0.0};
        break;
      case LossSpec::Form::ZeroOne:
        bound = {1.0, 0.0, 0.0};
        break;
      case LossSpec::Form::Table:
        throw std::invalid_argument(
            "table loss is not defined over an unbounded count support");
    }
    const double mean = obs_marginal.mean();
    const double second = obs_marginal.variance() + mean * mean;
    const auto base = detail::truncated_count_expectation(
        [&](int s) { return obs_marginal.pmf(s); }, mean, second, inner, bound);
    return RiskEstimate::quadrature(loss.scale() * base.value,
                                    loss.scale() * base.error);
  }

  const auto* nn = m.as<NormalKnownVar>();
  if (rule.kind() != PredictionRule::Kind::ClosedForm)
    throw RuleMismatchError(
        "table rules cannot be total over continuous observations");
  // Marginalizing theta ~ Normal(mu0, tau0_sq) keeps the discrepancy normal.
  const auto aff = detail::normal_posterior_mean_rule(*nn);
  const double mean = aff.a + (aff.b - 1.0) * nn->mu0;
  const double variance = (aff.b - 1.0) * (aff.b - 1.0) * nn->tau0_sq +
                          aff.b * aff.b * nn->sigma_sq / nn->n_obs +
                          nn->sigma_sq / nn->n_pred;
  return RiskEstimate::exact(
      loss.scale() * detail::normal_discrepancy_base_loss(loss, mean, variance));
}

// ---------------------------------------------------------------------------
// Monte Carlo estimators
// ---------------------------------------------------------------------------

namespace detail {

class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / n_;
    m2_ += d * (x - mean_);
  }
  double mean() const { return mean_; }
  double standard_error() const {
    return n_ > 1 ? std::sqrt(m2_ / (n_ - 1) / n_) : 0.0;
  }
  std::size_t count() const { return n_; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// One joint draw (y_obs_summary, y_pred_summary) given theta.
inline std::pair<double, double> draw_summaries(const ConjugateModel& m, double theta,
                                                Rng& rng) {
  if (const auto* bb = m.as<BetaBernoulli>())
    return {static_cast<double>(rng.binomial(bb->n_obs, theta)),
            static_cast<double>(rng.binomial(bb->n_pred, theta))};
  if (const auto* gp = m.as<GammaPoisson>())
    return {static_cast<double>(rng.poisson(gp->n_obs * theta)),
            static_cast<double>(rng.poisson(gp->n_pred * theta))};
  const auto* nn = m.as<NormalKnownVar>();
  return {rng.normal(theta, nn->sigma_sq / nn->n_obs),
          rng.normal(theta, nn->sigma_sq / nn->n_pred)};
}

inline double draw_theta(const ConjugateModel& m, Rng& rng) {
  if (const auto* bb = m.as<BetaBernoulli>()) return rng.beta(bb->alpha, bb->beta);
  if (const auto* gp = m.as<GammaPoisson>()) return rng.gamma(gp->shape, gp->rate);
  const auto* nn = m.as<NormalKnownVar>();
  return rng.normal(nn->mu0, nn->tau0_sq);
}

template <typename DrawTheta>
RiskEstimate conjugate_mc_risk(const ConjugateModel& m, const PredictionRule& rule,
                               const LossSpec& loss, std::size_t samples,
                               std::uint64_t seed, DrawTheta&& draw) {
  if (samples < 1)
    throw std::invalid_argument("monte carlo risk: samples must be >= 1");
  Rng rng(seed);
  RunningMoments acc;
  // Rule outputs repeat across draws of the same count summary.
  std::unordered_map<double, Point> cache;
  const bool continuous_obs = m.as<NormalKnownVar>() != nullptr;
  for (std::size_t i = 0; i < samples; ++i) {
    const double theta = draw(rng);
    const auto [obs, pred] = draw_summaries(m, theta, rng);
    if (continuous_obs) {
      acc.add(loss.base_evaluate(apply_rule(m, rule, obs), Point{pred}));
      continue;
    }
    auto it = cache.find(obs);
    if (it == cache.end()) it = cache.emplace(obs, apply_rule(m, rule, obs)).first;
    acc.add(loss.base_evaluate(it->second, Point{pred}));
  }
  return RiskEstimate::monte_carlo(loss.scale() * acc.mean(),
                                   loss.scale() * acc.standard_error(), acc.count());
}

}  // namespace detail

/// Monte Carlo frequentist prediction risk (theta fixed), reported with its
/// sample standard error.
inline RiskEstimate frequentist_prediction_risk_mc(const ConjugateModel& m,
                                                   const PredictionRule& rule,
                                                   double theta, const LossSpec& loss,
                                                   std::size_t samples,
                                                   std::uint64_t seed) {
  if (!m.parameter_space().contains(Point{theta}))
    throw std::invalid_argument("theta " + std::to_string(theta) +
                                " is outside the parameter space");
  return detail::conjugate_mc_risk(m, rule, loss, samples, seed,
                                   [&](Rng&) { return theta; });
}

/// Monte Carlo Bayes prediction risk: draws (theta, y_obs, y_pred) from the
/// full joint and averages the loss.
inline RiskEstimate bayes_prediction_risk_mc(const ConjugateModel& m,
                                             const PredictionRule& rule,
                                             const LossSpec& loss,
                                             std::size_t samples,
                                             std::uint64_t seed) {
  return detail::conjugate_mc_risk(m, rule, loss, samples, seed,
                                   [&](Rng& rng) { return detail::draw_theta(m, rng); });
}

/// Monte Carlo expected loss under a predictive (cross-check estimator).
inline RiskEstimate expected_loss_mc(const PosteriorPredictive& pp, const Point& y_hat,
                                     const LossSpec& loss, std::size_t samples,
                                     std::uint64_t seed) {
  const auto draws = sample_predictive(pp, samples, seed);
  detail::RunningMoments acc;
  for (const auto& y : draws) acc.add(loss.base_evaluate(y_hat, y));
  return RiskEstimate::monte_carlo(loss.scale() * acc.mean(),
                                   loss.scale() * acc.standard_error(), acc.count());
}

// ---------------------------------------------------------------------------
// Risk curves
// ---------------------------------------------------------------------------

/// Frequentist risk per grid point, in grid order.
inline std::vector<std::pair<Point, RiskEstimate>> risk_curve(
    const FiniteModel& m, const PredictionRule& rule, const LossSpec& loss,
    const std::vector<Point>& theta_grid) {
  std::vector<std::pair<Point, RiskEstimate>> curve;
  curve.reserve(theta_grid.size());
  for (const auto& theta : theta_grid)
    curve.emplace_back(theta, frequentist_prediction_risk(m, rule, theta, loss));
  return curve;
}

inline std::vector<std::pair<Point, RiskEstimate>> risk_curve(
    const FiniteModel& m, const PredictionRule& rule, const LossSpec& loss) {
  return risk_curve(m, rule, loss, m.parameter_space().points());
}

inline std::vector<std::pair<double, RiskEstimate>> risk_curve(
    const ConjugateModel& m, const PredictionRule& rule, const LossSpec& loss,
    const std::vector<double>& theta_grid) {
  std::vector<std::pair<double, RiskEstimate>> curve;
  curve.reserve(theta_grid.size());
  for (double theta : theta_grid)
    curve.emplace_back(theta, frequentist_prediction_risk(m, rule, theta, loss));
  return curve;
}

}  // namespace predrisk
