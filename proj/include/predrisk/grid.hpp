#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "predrisk/inference.hpp"
#include "predrisk/model.hpp"
#include "predrisk/numeric.hpp"

namespace predrisk {

/// Midpoint discretization of a conjugate prior onto a uniform theta grid.
/// The window covers all but a negligible sliver of prior mass; weights are
/// cell-midpoint densities, renormalized.
struct ThetaGrid {
  std::vector<double> thetas;
  std::vector<double> weights;
};

namespace detail {

inline ThetaGrid midpoint_grid(double lo, double hi, std::size_t cells,
                               const Prior& prior) {
  ThetaGrid g;
  g.thetas.resize(cells);
  g.weights.resize(cells);
  const double h = (hi - lo) / cells;
  double total = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    g.thetas[i] = lo + (i + 0.5) * h;
    g.weights[i] = prior.density_at(g.thetas[i]);
    total += g.weights[i];
  }
  for (double& w : g.weights) w /= total;
  return g;
}

inline int poisson_window_hi(double lambda, double tail = 1e-13) {
  double cdf = 0.0;
  for (int t = 0; t < ClosedFormPredictive::kCountScanCap; ++t) {
    cdf += poisson_pmf(lambda, t);
    if (1.0 - cdf < tail && t > lambda) return t;
  }
  throw std::runtime_error("poisson_window_hi: scan cap exceeded");
}

inline std::vector<Point> count_points(int hi) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(hi) + 1);
  for (int t = 0; t <= hi; ++t) pts.push_back({static_cast<double>(t)});
  return pts;
}

}  // namespace detail

inline ThetaGrid theta_grid(const ConjugateModel& m, std::size_t cells) {
  if (cells < 1) throw std::invalid_argument("theta_grid: cells must be >= 1");
  if (m.as<BetaBernoulli>())
    return detail::midpoint_grid(0.0, 1.0, cells, m.prior());
  if (const auto* gp = m.as<GammaPoisson>()) {
    // Mean + 12 sd + slack keeps the clipped gamma tail far below 1e-10.
    const double hi = (gp->shape + 12.0 * std::sqrt(gp->shape) + 12.0) / gp->rate;
    return detail::midpoint_grid(0.0, hi, cells, m.prior());
  }
  const auto* nn = m.as<NormalKnownVar>();
  const double half = 10.0 * std::sqrt(nn->tau0_sq);
  return detail::midpoint_grid(nn->mu0 - half, nn->mu0 + half, cells, m.prior());
}

/// Tabulates a Beta-Bernoulli model on a theta grid. Observation and
/// prediction spaces are the exact count summaries, so only theta is
/// discretized.
inline FiniteModel discretize(const BetaBernoulli& bb, std::size_t theta_cells) {
  const ConjugateModel cm{ConjugateModel::Family{bb}};
  const auto grid = theta_grid(cm, theta_cells);
  std::vector<Point> theta_pts;
  theta_pts.reserve(grid.thetas.size());
  for (double t : grid.thetas) theta_pts.push_back({t});

  const auto obs = detail::count_points(bb.n_obs);
  const auto pred = detail::count_points(bb.n_pred);
  std::vector<double> joint;
  joint.reserve(grid.thetas.size() * pred.size() * obs.size());
  for (double t : grid.thetas)
    for (int j = 0; j <= bb.n_pred; ++j)
      for (int k = 0; k <= bb.n_obs; ++k)
        joint.push_back(binomial_pmf(bb.n_pred, t, j) * binomial_pmf(bb.n_obs, t, k));

  return FiniteModel(ParameterSpace::finite_grid(std::move(theta_pts)),
                     Prior::weights(grid.weights), obs, pred, std::move(joint));
}

/// Tabulates a Gamma-Poisson model on a theta grid, truncating the count
/// spaces at a window that holds all but ~1e-13 of the mass for every grid
/// point.
inline FiniteModel discretize(const GammaPoisson& gp, std::size_t theta_cells) {
  const ConjugateModel cm{ConjugateModel::Family{gp}};
  const auto grid = theta_grid(cm, theta_cells);
  std::vector<Point> theta_pts;
  theta_pts.reserve(grid.thetas.size());
  for (double t : grid.thetas) theta_pts.push_back({t});

  const double theta_max = grid.thetas.back();
  const int obs_hi = detail::poisson_window_hi(gp.n_obs * theta_max);
  const int pred_hi = detail::poisson_window_hi(gp.n_pred * theta_max);
  const auto obs = detail::count_points(obs_hi);
  const auto pred = detail::count_points(pred_hi);

  std::vector<double> joint;
  joint.reserve(grid.thetas.size() * pred.size() * obs.size());
  for (double t : grid.thetas) {
    std::vector<double> ppmf(pred.size()), opmf(obs.size());
    for (int j = 0; j <= pred_hi; ++j) ppmf[j] = poisson_pmf(gp.n_pred * t, j);
    for (int k = 0; k <= obs_hi; ++k) opmf[k] = poisson_pmf(gp.n_obs * t, k);
    for (int j = 0; j <= pred_hi; ++j)
      for (int k = 0; k <= obs_hi; ++k) joint.push_back(ppmf[j] * opmf[k]);
  }

  return FiniteModel(ParameterSpace::finite_grid(std::move(theta_pts)),
                     Prior::weights(grid.weights), obs, pred, std::move(joint));
}

/// Posterior over a theta grid given the observation summary, computed with
/// the conjugate likelihood of the summary. This is the theta-only
/// discretization used for families with continuous data.
inline DiscreteDistribution grid_posterior(const ConjugateModel& m,
                                           const ThetaGrid& grid, double y_obs) {
  std::vector<double> w(grid.thetas.size());
  double total = 0.0;
  for (std::size_t i = 0; i < grid.thetas.size(); ++i) {
    double like;
    const double t = grid.thetas[i];
    if (const auto* bb = m.as<BetaBernoulli>())
      like = binomial_pmf(bb->n_obs, t, static_cast<int>(y_obs));
    else if (const auto* gp = m.as<GammaPoisson>())
      like = poisson_pmf(gp->n_obs * t, static_cast<int>(y_obs));
    else {
      const auto* nn = m.as<NormalKnownVar>();
      like = normal_pdf(y_obs, t, nn->sigma_sq / nn->n_obs);
    }
    w[i] = grid.weights[i] * like;
    total += w[i];
  }
  if (!(total > 0.0))
    throw ConditioningError("observation has zero marginal probability on the grid");
  std::vector<Point> support;
  support.reserve(grid.thetas.size());
  for (double t : grid.thetas) support.push_back({t});
  for (double& x : w) x /= total;
  return DiscreteDistribution(std::move(support), std::move(w));
}

}  // namespace predrisk
