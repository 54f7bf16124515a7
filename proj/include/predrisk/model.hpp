#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "predrisk/errors.hpp"
#include "predrisk/numeric.hpp"

namespace predrisk {

/// A point in an observation or prediction space (M- or N-dimensional).
using Point = std::vector<double>;

inline std::optional<std::size_t> find_point(const std::vector<Point>& space,
                                             const Point& p) {
  for (std::size_t i = 0; i < space.size(); ++i)
    if (space[i] == p) return i;
  return std::nullopt;
}

inline std::string point_to_string(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Parameter space and prior
// ---------------------------------------------------------------------------

struct Interval {
  double lower;
  double upper;
};

/// The set of parameter values a model ranges over: either an explicit finite
/// grid of k-vectors or a product of per-dimension open intervals.
class ParameterSpace {
 public:
  enum class Kind { FiniteGrid, ContinuousInterval };

  static ParameterSpace finite_grid(std::vector<Point> points) {
    if (points.empty())
      throw std::invalid_argument("ParameterSpace: finite grid needs >= 1 point");
    const std::size_t dim = points.front().size();
    if (dim == 0) throw std::invalid_argument("ParameterSpace: zero-dim point");
    for (const auto& p : points)
      if (p.size() != dim)
        throw std::invalid_argument("ParameterSpace: inconsistent point dims");
    ParameterSpace s;
    s.kind_ = Kind::FiniteGrid;
    s.points_ = std::move(points);
    return s;
  }

  static ParameterSpace continuous(std::vector<Interval> bounds) {
    if (bounds.empty())
      throw std::invalid_argument("ParameterSpace: needs >= 1 dimension");
    for (const auto& iv : bounds)
      if (!(iv.lower < iv.upper))
        throw std::invalid_argument("ParameterSpace: requires lower < upper");
    ParameterSpace s;
    s.kind_ = Kind::ContinuousInterval;
    s.bounds_ = std::move(bounds);
    return s;
  }

  static ParameterSpace continuous(double lower, double upper) {
    return continuous(std::vector<Interval>{{lower, upper}});
  }

  Kind kind() const { return kind_; }
  std::size_t dimension() const {
    return kind_ == Kind::FiniteGrid ? points_.front().size() : bounds_.size();
  }
  std::size_t size() const { return points_.size(); }  // finite grids only
  const std::vector<Point>& points() const { return points_; }
  const std::vector<Interval>& bounds() const { return bounds_; }

  bool contains(const Point& theta) const {
    if (theta.size() != dimension()) return false;
    if (kind_ == Kind::FiniteGrid) return find_point(points_, theta).has_value();
    for (std::size_t d = 0; d < bounds_.size(); ++d)
      if (!(theta[d] > bounds_[d].lower && theta[d] < bounds_[d].upper))
        return false;
    return true;
  }

 private:
  ParameterSpace() = default;
  Kind kind_ = Kind::FiniteGrid;
  std::vector<Point> points_;     // FiniteGrid
  std::vector<Interval> bounds_;  // ContinuousInterval
};

/// Named 1-D density family used for priors over continuous parameter spaces.
struct DensityFamily {
  enum class Name { Uniform, Beta, Gamma, Normal };
  Name name;
  double p1;  // lower / alpha / shape / mean
  double p2;  // upper / beta  / rate  / variance

  double operator()(double theta) const {
    switch (name) {
      case Name::Uniform:
        return (theta >= p1 && theta <= p2) ? 1.0 / (p2 - p1) : 0.0;
      case Name::Beta:
        if (theta <= 0.0 || theta >= 1.0) return 0.0;
        return std::exp((p1 - 1.0) * std::log(theta) +
                        (p2 - 1.0) * std::log1p(-theta) - log_beta(p1, p2));
      case Name::Gamma:
        if (theta <= 0.0) return 0.0;
        return std::exp(p1 * std::log(p2) + (p1 - 1.0) * std::log(theta) -
                        p2 * theta - std::lgamma(p1));
      case Name::Normal:
        return normal_pdf(theta, p1, p2);
    }
    return 0.0;
  }
};

/// Prior over the parameter space: one strictly positive weight per grid
/// point, or a named proper density for continuous intervals.
class Prior {
 public:
  enum class Kind { Weights, Density };

  static Prior weights(std::vector<double> w) {
    if (w.empty()) throw std::invalid_argument("Prior: empty weight vector");
    Prior p;
    p.kind_ = Kind::Weights;
    p.weights_ = std::move(w);
    return p;
  }

  static Prior density(DensityFamily f) {
    Prior p;
    p.kind_ = Kind::Density;
    p.family_ = f;
    return p;
  }

  Kind kind() const { return kind_; }
  const std::vector<double>& weight_values() const { return weights_; }
  double weight(std::size_t i) const { return weights_.at(i); }
  const DensityFamily& family() const { return family_; }
  double density_at(double theta) const { return family_(theta); }

 private:
  Prior() = default;
  Kind kind_ = Kind::Weights;
  std::vector<double> weights_;
  DensityFamily family_{DensityFamily::Name::Uniform, 0.0, 1.0};
};

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

/// Fully tabulated joint model: a finite parameter grid, a weight prior, and
/// a 3-index conditional table t[theta][y_pred][y_obs]. Each theta-slice is a
/// conditional pmf over (y_pred, y_obs) pairs.
///
/// Construction enforces shape consistency only; probabilistic invariants
/// (slice normalization, prior positivity, ...) are the job of
/// validate_model, so invalid states can be built and inspected.
class FiniteModel {
 public:
  FiniteModel(ParameterSpace theta, Prior prior, std::vector<Point> obs_space,
              std::vector<Point> pred_space, std::vector<double> joint)
      : theta_(std::move(theta)),
        prior_(std::move(prior)),
        obs_space_(std::move(obs_space)),
        pred_space_(std::move(pred_space)),
        joint_(std::move(joint)) {
    if (theta_.kind() != ParameterSpace::Kind::FiniteGrid)
      throw std::invalid_argument("FiniteModel: parameter space must be a finite grid");
    if (prior_.kind() != Prior::Kind::Weights)
      throw std::invalid_argument("FiniteModel: prior must be a weight vector");
    if (prior_.weight_values().size() != theta_.size())
      throw std::invalid_argument("FiniteModel: one prior weight per grid point");
    if (obs_space_.empty() || pred_space_.empty())
      throw std::invalid_argument("FiniteModel: empty observation or prediction space");
    check_dims(obs_space_, "observation");
    check_dims(pred_space_, "prediction");
    if (joint_.size() != theta_.size() * pred_space_.size() * obs_space_.size())
      throw std::invalid_argument("FiniteModel: joint table size mismatch");
  }

  std::size_t n_theta() const { return theta_.size(); }
  std::size_t n_pred() const { return pred_space_.size(); }
  std::size_t n_obs() const { return obs_space_.size(); }

  const ParameterSpace& parameter_space() const { return theta_; }
  const Prior& prior() const { return prior_; }
  const std::vector<Point>& obs_space() const { return obs_space_; }
  const std::vector<Point>& pred_space() const { return pred_space_; }

  const Point& theta_point(std::size_t i) const { return theta_.points()[i]; }
  double prior_weight(std::size_t i) const { return prior_.weight_values()[i]; }

  /// t[theta_i][pred_j][obs_k]
  double joint(std::size_t i, std::size_t j, std::size_t k) const {
    return joint_[(i * n_pred() + j) * n_obs() + k];
  }
  const std::vector<double>& joint_table() const { return joint_; }

  std::optional<std::size_t> obs_index(const Point& y) const {
    return find_point(obs_space_, y);
  }
  std::optional<std::size_t> pred_index(const Point& y) const {
    return find_point(pred_space_, y);
  }
  std::optional<std::size_t> theta_index(const Point& t) const {
    return find_point(theta_.points(), t);
  }

 private:
  static void check_dims(const std::vector<Point>& pts, const char* what) {
    const std::size_t dim = pts.front().size();
    if (dim == 0)
      throw std::invalid_argument(std::string("FiniteModel: zero-dim ") + what + " point");
    for (const auto& p : pts)
      if (p.size() != dim)
        throw std::invalid_argument(std::string("FiniteModel: inconsistent ") + what +
                                    " dimensions");
  }

  ParameterSpace theta_;
  Prior prior_;
  std::vector<Point> obs_space_;
  std::vector<Point> pred_space_;
  std::vector<double> joint_;  // [theta][pred][obs], flattened
};

/// Beta prior on the success probability of i.i.d. Bernoulli trials.
/// Observations enter as the success count over n_obs trials; predictions
/// target the success count over n_pred future trials.
struct BetaBernoulli {
  double alpha;
  double beta;
  int n_obs;
  int n_pred;
};

/// Normal prior on the mean of i.i.d. Normal draws with known variance.
/// Observations enter as the mean of n_obs draws; predictions target the
/// mean of n_pred future draws.
struct NormalKnownVar {
  double mu0;
  double tau0_sq;   // prior variance
  double sigma_sq;  // known sampling variance
  int n_obs;
  int n_pred;
};

/// Gamma prior on the rate of i.i.d. Poisson counts. Observations enter as
/// the total count over n_obs periods; predictions target the total count
/// over n_pred future periods.
struct GammaPoisson {
  double shape;
  double rate;
  int n_obs;
  int n_pred;
};

/// Closed-form conjugate family wrapper. Y_pred and Y_obs are conditionally
/// independent given theta within every family.
class ConjugateModel {
 public:
  using Family = std::variant<BetaBernoulli, NormalKnownVar, GammaPoisson>;

  explicit ConjugateModel(Family f) : family_(std::move(f)) {}

  const Family& family() const { return family_; }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&family_);
  }

  int n_obs() const {
    return std::visit([](const auto& f) { return f.n_obs; }, family_);
  }
  int n_pred() const {
    return std::visit([](const auto& f) { return f.n_pred; }, family_);
  }

  ParameterSpace parameter_space() const {
    if (as<BetaBernoulli>()) return ParameterSpace::continuous(0.0, 1.0);
    if (as<GammaPoisson>())
      return ParameterSpace::continuous(0.0, std::numeric_limits<double>::infinity());
    return ParameterSpace::continuous(-std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity());
  }

  Prior prior() const {
    if (const auto* bb = as<BetaBernoulli>())
      return Prior::density({DensityFamily::Name::Beta, bb->alpha, bb->beta});
    if (const auto* gp = as<GammaPoisson>())
      return Prior::density({DensityFamily::Name::Gamma, gp->shape, gp->rate});
    const auto* nn = as<NormalKnownVar>();
    return Prior::density({DensityFamily::Name::Normal, nn->mu0, nn->tau0_sq});
  }

  /// True when the observation summary ranges over a finite set (so that
  /// table rules are expressible).
  bool finite_obs_summaries() const { return as<BetaBernoulli>() != nullptr; }

  /// The finite observation summary values (Beta-Bernoulli only).
  std::vector<double> obs_summary_values() const {
    const auto* bb = as<BetaBernoulli>();
    if (!bb)
      throw std::logic_error("obs_summary_values: observation summaries are unbounded");
    std::vector<double> v(static_cast<std::size_t>(bb->n_obs) + 1);
    for (std::size_t s = 0; s < v.size(); ++s) v[s] = static_cast<double>(s);
    return v;
  }

 private:
  Family family_;
};

/// Either concrete model representation.
using Model = std::variant<FiniteModel, ConjugateModel>;

// ---------------------------------------------------------------------------
// Loss
// ---------------------------------------------------------------------------

/// Loss specification. The squared/absolute/zero-one forms are coordinate
/// formulas on R^N; the table form is a matrix over a finite prediction
/// domain, indexed [y_hat][y_pred].
///
/// A positive scale multiplier is kept separate from the base form so that
/// scaling a loss scales every risk functional by exactly that factor and
/// leaves argmin-based rule derivation bit-identical.
class LossSpec {
 public:
  enum class Form { Squared, Absolute, ZeroOne, Table };

  static LossSpec squared() { return LossSpec(Form::Squared); }
  static LossSpec absolute() { return LossSpec(Form::Absolute); }

  /// Zero-one loss with a tolerance band half-width (0 = exact match).
  static LossSpec zero_one(double band = 0.0) {
    if (band < 0.0) throw std::invalid_argument("LossSpec: band must be >= 0");
    LossSpec l(Form::ZeroOne);
    l.band_ = band;
    return l;
  }

  static LossSpec table(std::vector<std::vector<double>> matrix,
                        std::vector<Point> domain) {
    if (domain.empty()) throw std::invalid_argument("LossSpec: empty table domain");
    if (matrix.size() != domain.size())
      throw std::invalid_argument("LossSpec: matrix rows must match domain size");
    for (const auto& row : matrix) {
      if (row.size() != domain.size())
        throw std::invalid_argument("LossSpec: matrix must be square over the domain");
      for (double v : row)
        if (!(v >= 0.0)) throw std::invalid_argument("LossSpec: losses must be >= 0");
    }
    LossSpec l(Form::Table);
    l.matrix_ = std::move(matrix);
    l.domain_ = std::move(domain);
    return l;
  }

  Form form() const { return form_; }
  double band() const { return band_; }
  double scale() const { return scale_; }
  const std::vector<std::vector<double>>& matrix() const { return matrix_; }
  const std::vector<Point>& domain() const { return domain_; }

  /// The same loss multiplied by c > 0.
  LossSpec scaled_by(double c) const {
    if (!(c > 0.0)) throw std::invalid_argument("LossSpec: scale must be > 0");
    LossSpec l(*this);
    l.scale_ *= c;
    return l;
  }

  /// Loss before the scale multiplier. Risk functionals accumulate base
  /// values and apply the scale once, keeping homogeneity exact.
  double base_evaluate(const Point& y_hat, const Point& y_pred) const {
    if (y_hat.size() != y_pred.size())
      throw std::invalid_argument("evaluate_loss: dimension mismatch");
    switch (form_) {
      case Form::Squared: {
        double s = 0.0;
        for (std::size_t d = 0; d < y_hat.size(); ++d) {
          const double diff = y_hat[d] - y_pred[d];
          s += diff * diff;
        }
        return s;
      }
      case Form::Absolute: {
        double s = 0.0;
        for (std::size_t d = 0; d < y_hat.size(); ++d)
          s += std::abs(y_hat[d] - y_pred[d]);
        return s;
      }
      case Form::ZeroOne: {
        for (std::size_t d = 0; d < y_hat.size(); ++d)
          if (std::abs(y_hat[d] - y_pred[d]) > band_) return 1.0;
        return 0.0;
      }
      case Form::Table: {
        const auto i = find_point(domain_, y_hat);
        if (!i)
          throw std::invalid_argument("evaluate_loss: y_hat " + point_to_string(y_hat) +
                                      " outside the table loss domain");
        const auto j = find_point(domain_, y_pred);
        if (!j)
          throw std::invalid_argument("evaluate_loss: y_pred " + point_to_string(y_pred) +
                                      " outside the table loss domain");
        return matrix_[*i][*j];
      }
    }
    return 0.0;
  }

 private:
  explicit LossSpec(Form f) : form_(f) {}

  Form form_;
  double band_ = 0.0;
  double scale_ = 1.0;
  std::vector<std::vector<double>> matrix_;
  std::vector<Point> domain_;
};

/// L(y_hat, y_pred), nonnegative for every form.
inline double evaluate_loss(const LossSpec& loss, const Point& y_hat,
                            const Point& y_pred) {
  return loss.scale() * loss.base_evaluate(y_hat, y_pred);
}

inline double evaluate_loss(const LossSpec& loss, double y_hat, double y_pred) {
  return evaluate_loss(loss, Point{y_hat}, Point{y_pred});
}

// ---------------------------------------------------------------------------
// Prediction rules
// ---------------------------------------------------------------------------

/// A deterministic map from observed data to one predicted value, in one of
/// three representations:
///   - IndexTable: prediction-space index per observation-space point,
///   - ValueTable: arbitrary point per observation-space point (the
///     materialized output of a per-observation optimizer),
///   - ClosedForm: a statistic of the posterior predictive, evaluated
///     lazily against whatever model the rule is applied to.
class PredictionRule {
 public:
  enum class Kind { IndexTable, ValueTable, ClosedForm };
  enum class Tag { PredictiveMean, PredictiveMedian, PredictiveMode };

  static PredictionRule index_table(std::vector<std::size_t> pred_indices) {
    PredictionRule r;
    r.kind_ = Kind::IndexTable;
    r.indices_ = std::move(pred_indices);
    return r;
  }

  static PredictionRule value_table(std::vector<Point> outputs) {
    PredictionRule r;
    r.kind_ = Kind::ValueTable;
    r.values_ = std::move(outputs);
    return r;
  }

  static PredictionRule closed_form(Tag t) {
    PredictionRule r;
    r.kind_ = Kind::ClosedForm;
    r.tag_ = t;
    return r;
  }

  Kind kind() const { return kind_; }
  Tag tag() const { return tag_; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  const std::vector<Point>& values() const { return values_; }

  /// True when a table representation covers exactly n_obs observations
  /// (closed-form rules are total by construction).
  bool total_over(std::size_t n_obs) const {
    switch (kind_) {
      case Kind::IndexTable: return indices_.size() == n_obs;
      case Kind::ValueTable: return values_.size() == n_obs;
      case Kind::ClosedForm: return true;
    }
    return false;
  }

  friend bool operator==(const PredictionRule& a, const PredictionRule& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::IndexTable: return a.indices_ == b.indices_;
      case Kind::ValueTable: return a.values_ == b.values_;
      case Kind::ClosedForm: return a.tag_ == b.tag_;
    }
    return false;
  }

 private:
  PredictionRule() = default;
  Kind kind_ = Kind::ClosedForm;
  Tag tag_ = Tag::PredictiveMean;
  std::vector<std::size_t> indices_;
  std::vector<Point> values_;
};

// ---------------------------------------------------------------------------
// Risk estimates
// ---------------------------------------------------------------------------

/// A risk value tagged with how it was computed and how wrong it can be:
/// exact sums carry error 0, truncated/quadrature evaluations carry an
/// absolute residual bound, Monte Carlo carries the standard error and the
/// sample count.
struct RiskEstimate {
  enum class Method { Exact, Quadrature, MonteCarlo };

  double value = 0.0;
  Method method = Method::Exact;
  double error = 0.0;
  std::size_t samples = 0;

  static RiskEstimate exact(double v) { return {v, Method::Exact, 0.0, 0}; }
  static RiskEstimate quadrature(double v, double err) {
    return {v, Method::Quadrature, err, 0};
  }
  static RiskEstimate monte_carlo(double v, double se, std::size_t n) {
    return {v, Method::MonteCarlo, se, n};
  }
};

inline const char* method_name(RiskEstimate::Method m) {
  switch (m) {
    case RiskEstimate::Method::Exact: return "exact";
    case RiskEstimate::Method::Quadrature: return "quadrature";
    case RiskEstimate::Method::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationIssue {
  std::string path;     // e.g. "joint[theta=1]" or "prior_weights[2]"
  std::string message;  // the violated constraint
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }

  std::string to_string() const {
    std::ostringstream os;
    for (const auto& v : issues) os << v.path << ": " << v.message << "\n";
    return os.str();
  }
};

namespace detail {

inline void check_no_duplicates(const std::vector<Point>& pts, const char* what,
                                ValidationReport& rep) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j])
        rep.issues.push_back({std::string(what) + "[" + std::to_string(j) + "]",
                              "duplicate of " + std::string(what) + "[" +
                                  std::to_string(i) + "]"});
}

inline void require_positive(double v, const std::string& path,
                             ValidationReport& rep) {
  if (!(v > 0.0) || !std::isfinite(v))
    rep.issues.push_back({path, "must be strictly positive and finite"});
}

}  // namespace detail

/// Confirms every type invariant of a finite model; violations become report
/// entries (with indices), never exceptions.
inline ValidationReport validate_model(const FiniteModel& m) {
  ValidationReport rep;
  constexpr double kTol = 1e-12;

  detail::check_no_duplicates(m.parameter_space().points(), "theta_points", rep);
  detail::check_no_duplicates(m.obs_space(), "obs_space", rep);
  detail::check_no_duplicates(m.pred_space(), "pred_space", rep);

  double wsum = 0.0;
  for (std::size_t i = 0; i < m.n_theta(); ++i) {
    const double w = m.prior_weight(i);
    if (!(w > 0.0))
      rep.issues.push_back({"prior_weights[" + std::to_string(i) + "]",
                            "prior weight must be strictly positive"});
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kTol)
    rep.issues.push_back(
        {"prior_weights", "weights sum to " + std::to_string(wsum) + ", expected 1"});

  for (std::size_t i = 0; i < m.n_theta(); ++i) {
    double slice = 0.0;
    for (std::size_t j = 0; j < m.n_pred(); ++j)
      for (std::size_t k = 0; k < m.n_obs(); ++k) {
        const double t = m.joint(i, j, k);
        if (!(t >= 0.0))
          rep.issues.push_back({"joint[theta=" + std::to_string(i) +
                                    "][pred=" + std::to_string(j) +
                                    "][obs=" + std::to_string(k) + "]",
                                "probability must be nonnegative"});
        slice += t;
      }
    if (std::abs(slice - 1.0) > kTol)
      rep.issues.push_back({"joint[theta=" + std::to_string(i) + "]",
                            "slice sums to " + std::to_string(slice) + ", expected 1"});
  }
  return rep;
}

/// Confirms hyperparameter legality for a conjugate family.
inline ValidationReport validate_model(const ConjugateModel& m) {
  ValidationReport rep;
  if (const auto* bb = m.as<BetaBernoulli>()) {
    detail::require_positive(bb->alpha, "alpha", rep);
    detail::require_positive(bb->beta, "beta", rep);
  } else if (const auto* nn = m.as<NormalKnownVar>()) {
    if (!std::isfinite(nn->mu0))
      rep.issues.push_back({"mu0", "must be finite"});
    detail::require_positive(nn->tau0_sq, "tau0_sq", rep);
    detail::require_positive(nn->sigma_sq, "sigma_sq", rep);
  } else if (const auto* gp = m.as<GammaPoisson>()) {
    detail::require_positive(gp->shape, "shape", rep);
    detail::require_positive(gp->rate, "rate", rep);
  }
  if (m.n_obs() < 1) rep.issues.push_back({"n_obs", "must be >= 1"});
  if (m.n_pred() < 1) rep.issues.push_back({"n_pred", "must be >= 1"});
  return rep;
}

inline ValidationReport validate_model(const Model& m) {
  return std::visit([](const auto& mm) { return validate_model(mm); }, m);
}

/// Properness and positivity check for a prior against its parameter space.
/// Weight priors must be strictly positive and sum to 1; density priors must
/// be strictly positive on the space and integrate to 1 over it (composite
/// Simpson, 1-D spaces only).
inline ValidationReport validate_prior(const ParameterSpace& space, const Prior& prior,
                                       double properness_tol = 1e-6) {
  ValidationReport rep;
  if (space.kind() == ParameterSpace::Kind::FiniteGrid) {
    if (prior.kind() != Prior::Kind::Weights) {
      rep.issues.push_back({"prior", "finite grid requires a weight prior"});
      return rep;
    }
    if (prior.weight_values().size() != space.size()) {
      rep.issues.push_back({"prior", "one weight per grid point required"});
      return rep;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (!(prior.weight(i) > 0.0))
        rep.issues.push_back({"prior_weights[" + std::to_string(i) + "]",
                              "prior weight must be strictly positive"});
      sum += prior.weight(i);
    }
    if (std::abs(sum - 1.0) > 1e-12)
      rep.issues.push_back(
          {"prior_weights", "weights sum to " + std::to_string(sum) + ", expected 1"});
    return rep;
  }

  if (prior.kind() != Prior::Kind::Density) {
    rep.issues.push_back({"prior", "continuous interval requires a density prior"});
    return rep;
  }
  if (space.dimension() != 1) {
    rep.issues.push_back({"prior", "density properness check supports 1-D spaces only"});
    return rep;
  }
  const auto [lo, hi] = space.bounds()[0];
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    // Named families are proper on their natural (unbounded) support by
    // construction; nothing to integrate.
    return rep;
  }
  const int probes = 257;
  for (int i = 0; i < probes; ++i) {
    const double t = lo + (hi - lo) * (i + 0.5) / probes;
    if (!(prior.density_at(t) > 0.0)) {
      rep.issues.push_back({"prior", "density is not strictly positive at theta=" +
                                         std::to_string(t)});
      break;
    }
  }
  const auto q = integrate_simpson([&](double t) { return prior.density_at(t); },
                                   lo, hi, 1e-10);
  if (std::abs(q.value - 1.0) > properness_tol)
    rep.issues.push_back({"prior", "density integrates to " + std::to_string(q.value) +
                                       " over the space, expected 1"});
  return rep;
}

}  // namespace predrisk
