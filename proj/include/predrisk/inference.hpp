#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <variant>
#include <vector>

#include "predrisk/errors.hpp"
#include "predrisk/model.hpp"
#include "predrisk/numeric.hpp"

namespace predrisk {

// ---------------------------------------------------------------------------
// Distribution carriers
// ---------------------------------------------------------------------------

/// A probability vector over an ordered finite support. Carries both finite
/// posteriors over theta and finite posterior predictives.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<Point> support, std::vector<double> probs)
      : support_(std::move(support)), probs_(std::move(probs)) {
    if (support_.empty() || support_.size() != probs_.size())
      throw std::invalid_argument("DiscreteDistribution: support/probs size mismatch");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= -1e-15))
        throw std::invalid_argument("DiscreteDistribution: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("DiscreteDistribution: probabilities sum to " +
                                  std::to_string(sum));
  }

  std::size_t size() const { return probs_.size(); }
  const std::vector<Point>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  const Point& point(std::size_t i) const { return support_[i]; }
  double prob(std::size_t i) const { return probs_[i]; }

  std::size_t dimension() const { return support_.front().size(); }

  Point mean() const {
    Point m(dimension(), 0.0);
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t d = 0; d < m.size(); ++d) m[d] += probs_[i] * support_[i][d];
    return m;
  }

  /// Smallest support value whose CDF reaches 1/2 (1-D supports).
  double median1d() const {
    require_1d("median");
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return support_[a][0] < support_[b][0];
    });
    double cdf = 0.0;
    for (std::size_t i : order) {
      cdf += probs_[i];
      if (cdf >= 0.5) return support_[i][0];
    }
    return support_[order.back()][0];
  }

  /// Highest-probability index; ties within 1e-12 break to the lowest index.
  std::size_t mode_index() const {
    const double top = *std::max_element(probs_.begin(), probs_.end());
    for (std::size_t i = 0; i < size(); ++i)
      if (probs_[i] >= top - 1e-12) return i;
    return 0;
  }

  /// Value-ordered quantile (1-D supports).
  double quantile1d(double q) const {
    require_1d("quantile");
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return support_[a][0] < support_[b][0];
    });
    double cdf = 0.0;
    for (std::size_t i : order) {
      cdf += probs_[i];
      if (cdf >= q) return support_[i][0];
    }
    return support_[order.back()][0];
  }

 private:
  void require_1d(const char* op) const {
    if (dimension() != 1)
      throw std::invalid_argument(std::string(op) + ": requires a 1-D support");
  }

  std::vector<Point> support_;
  std::vector<double> probs_;
};

/// Beta-Binomial(n, alpha, beta) over counts {0, ..., n}.
struct BetaBinomialPredictive {
  double alpha;
  double beta;
  int n;

  double pmf(int t) const {
    if (t < 0 || t > n) return 0.0;
    return std::exp(log_binomial(n, t) + log_beta(alpha + t, beta + n - t) -
                    log_beta(alpha, beta));
  }
  double mean() const { return n * alpha / (alpha + beta); }
  double variance() const {
    const double s = alpha + beta;
    return n * alpha * beta * (s + n) / (s * s * (s + 1.0));
  }
};

/// Normal(mean, variance) over the reals.
struct NormalPredictive {
  double mean;
  double variance;

  double pdf(double y) const { return normal_pdf(y, mean, variance); }
};

/// Negative-Binomial(shape, prob) over counts {0, 1, ...}; prob is the
/// success probability, so pmf(t) = C(t+shape-1, t) prob^shape (1-prob)^t.
struct NegativeBinomialPredictive {
  double shape;
  double prob;

  double pmf(int t) const {
    if (t < 0) return 0.0;
    return std::exp(std::lgamma(shape + t) - std::lgamma(shape) -
                    std::lgamma(t + 1.0) + shape * std::log(prob) +
                    t * std::log1p(-prob));
  }
  double mean() const { return shape * (1.0 - prob) / prob; }
  double variance() const { return shape * (1.0 - prob) / (prob * prob); }
};

/// Closed-form carrier for a conjugate posterior predictive.
class ClosedFormPredictive {
 public:
  using Family = std::variant<BetaBinomialPredictive, NormalPredictive,
                              NegativeBinomialPredictive>;

  explicit ClosedFormPredictive(Family f) : family_(std::move(f)) { check(); }

  const Family& family() const { return family_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&family_);
  }

  double mean() const {
    if (const auto* b = as<BetaBinomialPredictive>()) return b->mean();
    if (const auto* n = as<NormalPredictive>()) return n->mean;
    return as<NegativeBinomialPredictive>()->mean();
  }

  double variance() const {
    if (const auto* b = as<BetaBinomialPredictive>()) return b->variance();
    if (const auto* n = as<NormalPredictive>()) return n->variance;
    return as<NegativeBinomialPredictive>()->variance();
  }

  /// Smallest m with CDF(m) >= 1/2; the mean for the normal family.
  double median() const {
    if (const auto* n = as<NormalPredictive>()) return n->mean;
    return quantile(0.5);
  }

  /// Highest-probability point (count scan; the mean for the normal family).
  double mode() const {
    if (const auto* n = as<NormalPredictive>()) return n->mean;
    if (const auto* b = as<BetaBinomialPredictive>()) {
      double best = -1.0;
      int arg = 0;
      for (int t = 0; t <= b->n; ++t) {
        const double p = b->pmf(t);
        if (p > best + 1e-12) {
          best = p;
          arg = t;
        }
      }
      return arg;
    }
    const auto* nb = as<NegativeBinomialPredictive>();
    if (nb->shape <= 1.0) return 0.0;
    return std::floor((nb->shape - 1.0) * (1.0 - nb->prob) / nb->prob);
  }

  /// For count families: smallest t with CDF(t) >= q. Normal: exact quantile.
  double quantile(double q) const {
    if (!(q > 0.0 && q < 1.0))
      throw std::invalid_argument("quantile: q must lie in (0, 1)");
    if (const auto* n = as<NormalPredictive>())
      return n->mean + std::sqrt(n->variance) * normal_quantile(q);
    if (const auto* b = as<BetaBinomialPredictive>()) {
      double cdf = 0.0;
      for (int t = 0; t <= b->n; ++t) {
        cdf += b->pmf(t);
        if (cdf >= q) return t;
      }
      return b->n;
    }
    const auto* nb = as<NegativeBinomialPredictive>();
    double cdf = 0.0;
    for (int t = 0; t < kCountScanCap; ++t) {
      cdf += nb->pmf(t);
      if (cdf >= q) return t;
    }
    throw std::runtime_error("quantile: negative-binomial scan cap exceeded");
  }

  /// Count families have discrete support; the upper end is the smallest T
  /// with tail mass below tail_bound (used for truncated summations).
  int count_support_hi(double tail_bound = 1e-13) const {
    if (const auto* b = as<BetaBinomialPredictive>()) return b->n;
    const auto* nb = as<NegativeBinomialPredictive>();
    if (!nb) throw std::logic_error("count_support_hi: not a count family");
    double cdf = 0.0;
    for (int t = 0; t < kCountScanCap; ++t) {
      cdf += nb->pmf(t);
      if (1.0 - cdf < tail_bound) return t;
    }
    throw std::runtime_error("count_support_hi: scan cap exceeded");
  }

  bool is_discrete() const { return as<NormalPredictive>() == nullptr; }

  static constexpr int kCountScanCap = 10'000'000;

 private:
  void check() const {
    if (const auto* b = as<BetaBinomialPredictive>()) {
      if (!(b->alpha > 0.0 && b->beta > 0.0 && b->n >= 0))
        throw std::invalid_argument("BetaBinomialPredictive: illegal parameters");
    } else if (const auto* n = as<NormalPredictive>()) {
      if (!(n->variance > 0.0) || !std::isfinite(n->mean))
        throw std::invalid_argument("NormalPredictive: illegal parameters");
    } else if (const auto* nb = as<NegativeBinomialPredictive>()) {
      if (!(nb->shape > 0.0 && nb->prob > 0.0 && nb->prob < 1.0))
        throw std::invalid_argument("NegativeBinomialPredictive: illegal parameters");
    }
  }

  Family family_;
};

/// The conditional distribution of Y_pred given y_obs, in whichever carrier
/// the model admits.
using PosteriorPredictive = std::variant<DiscreteDistribution, ClosedFormPredictive>;

// Updated hyperparameters returned by posterior() on conjugate models.
struct BetaPosterior {
  double alpha;
  double beta;
};
struct NormalPosterior {
  double mean;
  double variance;
};
struct GammaPosterior {
  double shape;
  double rate;
};
using ConjugatePosterior = std::variant<BetaPosterior, NormalPosterior, GammaPosterior>;

// ---------------------------------------------------------------------------
// Observation handling
// ---------------------------------------------------------------------------

namespace detail {

/// Observation summaries for conjugate families are scalars: a success count
/// (Beta-Bernoulli), a total count (Gamma-Poisson), or a sample mean
/// (Normal). Throws ConditioningError when the value cannot be conditioned on.
inline double check_obs_summary(const ConjugateModel& m, double y_obs) {
  if (!std::isfinite(y_obs))
    throw ConditioningError("observation must be finite");
  if (const auto* bb = m.as<BetaBernoulli>()) {
    if (y_obs != std::floor(y_obs) || y_obs < 0.0 || y_obs > bb->n_obs)
      throw ConditioningError("observation must be an integer success count in [0, " +
                              std::to_string(bb->n_obs) + "]");
  } else if (m.as<GammaPoisson>()) {
    if (y_obs != std::floor(y_obs) || y_obs < 0.0)
      throw ConditioningError("observation must be a nonnegative integer total count");
  }
  return y_obs;
}

inline std::size_t conditionable_obs_index(const FiniteModel& m, const Point& y_obs) {
  const auto k = m.obs_index(y_obs);
  if (!k)
    throw ConditioningError("observation " + point_to_string(y_obs) +
                            " is not in the observation space");
  return *k;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Posterior, evidence, predictive
// ---------------------------------------------------------------------------

/// p(y_obs): prior-mixed marginal probability (finite) or prior predictive
/// pmf/density of the observation summary (conjugate).
inline double marginal_evidence(const FiniteModel& m, const Point& y_obs) {
  const std::size_t k = detail::conditionable_obs_index(m, y_obs);
  double p = 0.0;
  for (std::size_t i = 0; i < m.n_theta(); ++i) {
    double col = 0.0;
    for (std::size_t j = 0; j < m.n_pred(); ++j) col += m.joint(i, j, k);
    p += m.prior_weight(i) * col;
  }
  return p;
}

inline double marginal_evidence(const ConjugateModel& m, double y_obs) {
  const double s = detail::check_obs_summary(m, y_obs);
  if (const auto* bb = m.as<BetaBernoulli>()) {
    const BetaBinomialPredictive prior_pred{bb->alpha, bb->beta, bb->n_obs};
    return prior_pred.pmf(static_cast<int>(s));
  }
  if (const auto* gp = m.as<GammaPoisson>()) {
    const double p0 = gp->rate / (gp->rate + gp->n_obs);
    const NegativeBinomialPredictive prior_pred{gp->shape, p0};
    return prior_pred.pmf(static_cast<int>(s));
  }
  const auto* nn = m.as<NormalKnownVar>();
  return normal_pdf(s, nn->mu0, nn->tau0_sq + nn->sigma_sq / nn->n_obs);
}

/// Posterior over the parameter grid given y_obs.
inline DiscreteDistribution posterior(const FiniteModel& m, const Point& y_obs) {
  const std::size_t k = detail::conditionable_obs_index(m, y_obs);
  std::vector<double> w(m.n_theta(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < m.n_theta(); ++i) {
    double col = 0.0;
    for (std::size_t j = 0; j < m.n_pred(); ++j) col += m.joint(i, j, k);
    w[i] = m.prior_weight(i) * col;
    total += w[i];
  }
  if (!(total > 0.0))
    throw ConditioningError("observation " + point_to_string(y_obs) +
                            " has zero marginal probability");
  for (double& x : w) x /= total;
  return DiscreteDistribution(m.parameter_space().points(), std::move(w));
}

/// Updated hyperparameters given the observation summary.
inline ConjugatePosterior posterior(const ConjugateModel& m, double y_obs) {
  const double s = detail::check_obs_summary(m, y_obs);
  if (const auto* bb = m.as<BetaBernoulli>())
    return BetaPosterior{bb->alpha + s, bb->beta + bb->n_obs - s};
  if (const auto* gp = m.as<GammaPoisson>())
    return GammaPosterior{gp->shape + s, gp->rate + gp->n_obs};
  const auto* nn = m.as<NormalKnownVar>();
  const double prior_precision = 1.0 / nn->tau0_sq;
  const double data_precision = nn->n_obs / nn->sigma_sq;
  const double post_var = 1.0 / (prior_precision + data_precision);
  const double post_mean = post_var * (prior_precision * nn->mu0 + data_precision * s);
  return NormalPosterior{post_mean, post_var};
}

/// p(y_pred | y_obs) over the prediction space.
inline PosteriorPredictive posterior_predictive(const FiniteModel& m,
                                                const Point& y_obs) {
  const std::size_t k = detail::conditionable_obs_index(m, y_obs);
  std::vector<double> probs(m.n_pred(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < m.n_pred(); ++j) {
    double p = 0.0;
    for (std::size_t i = 0; i < m.n_theta(); ++i)
      p += m.prior_weight(i) * m.joint(i, j, k);
    probs[j] = p;
    total += p;
  }
  if (!(total > 0.0))
    throw ConditioningError("observation " + point_to_string(y_obs) +
                            " has zero marginal probability");
  for (double& p : probs) p /= total;
  return DiscreteDistribution(m.pred_space(), std::move(probs));
}

inline PosteriorPredictive posterior_predictive(const ConjugateModel& m,
                                                double y_obs) {
  const auto post = posterior(m, y_obs);
  if (const auto* bp = std::get_if<BetaPosterior>(&post)) {
    const auto* bb = m.as<BetaBernoulli>();
    return ClosedFormPredictive(BetaBinomialPredictive{bp->alpha, bp->beta, bb->n_pred});
  }
  if (const auto* gp = std::get_if<GammaPosterior>(&post)) {
    const auto* g = m.as<GammaPoisson>();
    const double prob = gp->rate / (gp->rate + g->n_pred);
    return ClosedFormPredictive(NegativeBinomialPredictive{gp->shape, prob});
  }
  const auto& np = std::get<NormalPosterior>(post);
  const auto* nn = m.as<NormalKnownVar>();
  return ClosedFormPredictive(
      NormalPredictive{np.mean, np.variance + nn->sigma_sq / nn->n_pred});
}

// ---------------------------------------------------------------------------
// Predictive statistics and sampling
// ---------------------------------------------------------------------------

inline Point predictive_mean(const PosteriorPredictive& pp) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&pp)) return d->mean();
  return {std::get<ClosedFormPredictive>(pp).mean()};
}

inline Point predictive_median(const PosteriorPredictive& pp) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&pp)) return {d->median1d()};
  return {std::get<ClosedFormPredictive>(pp).median()};
}

inline Point predictive_mode(const PosteriorPredictive& pp) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&pp))
    return d->point(d->mode_index());
  return {std::get<ClosedFormPredictive>(pp).mode()};
}

inline Point predictive_statistic(const PosteriorPredictive& pp,
                                  PredictionRule::Tag tag) {
  switch (tag) {
    case PredictionRule::Tag::PredictiveMean: return predictive_mean(pp);
    case PredictionRule::Tag::PredictiveMedian: return predictive_median(pp);
    case PredictionRule::Tag::PredictiveMode: return predictive_mode(pp);
  }
  throw std::logic_error("predictive_statistic: unreachable");
}

/// i.i.d. draws from the predictive; identical (seed, count) pairs yield
/// identical sequences.
inline std::vector<Point> sample_predictive(const PosteriorPredictive& pp,
                                            std::size_t count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_predictive: count must be >= 1");
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(count);

  if (const auto* d = std::get_if<DiscreteDistribution>(&pp)) {
    std::vector<double> cdf(d->size());
    double run = 0.0;
    for (std::size_t i = 0; i < d->size(); ++i) {
      run += d->prob(i);
      cdf[i] = run;
    }
    cdf.back() = std::max(cdf.back(), 1.0);
    for (std::size_t n = 0; n < count; ++n) {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const std::size_t idx =
          std::min<std::size_t>(it - cdf.begin(), d->size() - 1);
      out.push_back(d->point(idx));
    }
    return out;
  }

  const auto& cf = std::get<ClosedFormPredictive>(pp);
  if (const auto* n = cf.as<NormalPredictive>()) {
    for (std::size_t i = 0; i < count; ++i)
      out.push_back({rng.normal(n->mean, n->variance)});
    return out;
  }
  if (const auto* b = cf.as<BetaBinomialPredictive>()) {
    std::vector<double> cdf(static_cast<std::size_t>(b->n) + 1);
    double run = 0.0;
    for (int t = 0; t <= b->n; ++t) {
      run += b->pmf(t);
      cdf[t] = run;
    }
    cdf.back() = std::max(cdf.back(), 1.0);
    for (std::size_t i = 0; i < count; ++i) {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      out.push_back({static_cast<double>(
          std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1))});
    }
    return out;
  }
  const auto* nb = cf.as<NegativeBinomialPredictive>();
  for (std::size_t i = 0; i < count; ++i) {
    // Sequential inverse CDF via the pmf recurrence.
    const double u = rng.uniform();
    double pmf = std::pow(nb->prob, nb->shape);
    double cdf = pmf;
    int t = 0;
    while (cdf <= u && t < ClosedFormPredictive::kCountScanCap) {
      pmf *= (1.0 - nb->prob) * (nb->shape + t) / (t + 1);
      ++t;
      cdf += pmf;
    }
    out.push_back({static_cast<double>(t)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rule application
// ---------------------------------------------------------------------------

/// Evaluates a prediction rule at one observation.
inline Point apply_rule(const FiniteModel& m, const PredictionRule& rule,
                        const Point& y_obs) {
  switch (rule.kind()) {
    case PredictionRule::Kind::IndexTable: {
      if (!rule.total_over(m.n_obs()))
        throw RuleMismatchError("rule table does not cover the observation space");
      const std::size_t k = detail::conditionable_obs_index(m, y_obs);
      const std::size_t p = rule.indices()[k];
      if (p >= m.n_pred())
        throw RuleMismatchError("rule prediction index out of range");
      return m.pred_space()[p];
    }
    case PredictionRule::Kind::ValueTable: {
      if (!rule.total_over(m.n_obs()))
        throw RuleMismatchError("rule table does not cover the observation space");
      return rule.values()[detail::conditionable_obs_index(m, y_obs)];
    }
    case PredictionRule::Kind::ClosedForm:
      return predictive_statistic(posterior_predictive(m, y_obs), rule.tag());
  }
  throw std::logic_error("apply_rule: unreachable");
}

inline Point apply_rule(const ConjugateModel& m, const PredictionRule& rule,
                        double y_obs) {
  switch (rule.kind()) {
    case PredictionRule::Kind::IndexTable:
      throw RuleMismatchError(
          "index-table rules require a finite model prediction space");
    case PredictionRule::Kind::ValueTable: {
      if (!m.finite_obs_summaries())
        throw RuleMismatchError(
            "table rules require a finite observation space; this family's "
            "observation summaries are unbounded");
      const double s = detail::check_obs_summary(m, y_obs);
      if (!rule.total_over(static_cast<std::size_t>(m.n_obs()) + 1))
        throw RuleMismatchError("rule table does not cover the observation summaries");
      return rule.values()[static_cast<std::size_t>(s)];
    }
    case PredictionRule::Kind::ClosedForm:
      return predictive_statistic(posterior_predictive(m, y_obs), rule.tag());
  }
  throw std::logic_error("apply_rule: unreachable");
}

}  // namespace predrisk
