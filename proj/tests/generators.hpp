#pragma once

// Seeded random instances for the property suites. Joint tables are drawn
// from a uniform simplex per theta slice; priors are kept strictly positive
// by mixing with the uniform weight vector.

#include <cstdint>
#include <random>
#include <vector>

#include "predrisk/model.hpp"

namespace generators {

inline std::vector<double> uniform_simplex(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> exp1(1.0);
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    x = exp1(rng);
    sum += x;
  }
  for (double& x : v) x /= sum;
  return v;
}

inline std::vector<predrisk::Point> index_points(std::size_t n) {
  std::vector<predrisk::Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = {static_cast<double>(i)};
  return pts;
}

/// Random finite model with |Theta|, |obs|, |pred| drawn from {1, ..., max_size}.
inline predrisk::FiniteModel random_finite_model(std::mt19937_64& rng,
                                                 std::size_t max_size = 3) {
  std::uniform_int_distribution<std::size_t> size_dist(1, max_size);
  const std::size_t n_theta = size_dist(rng);
  const std::size_t n_obs = size_dist(rng);
  const std::size_t n_pred = size_dist(rng);

  auto dirichlet = uniform_simplex(rng, n_theta);
  std::vector<double> prior(n_theta);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_theta; ++i) {
    prior[i] = 0.9 * dirichlet[i] + 0.1 / n_theta;
    sum += prior[i];
  }
  for (double& w : prior) w /= sum;

  std::vector<double> joint;
  joint.reserve(n_theta * n_pred * n_obs);
  for (std::size_t i = 0; i < n_theta; ++i) {
    const auto slice = uniform_simplex(rng, n_pred * n_obs);
    joint.insert(joint.end(), slice.begin(), slice.end());
  }

  return predrisk::FiniteModel(
      predrisk::ParameterSpace::finite_grid(index_points(n_theta)),
      predrisk::Prior::weights(std::move(prior)), index_points(n_obs),
      index_points(n_pred), std::move(joint));
}

/// Rotates through the four loss forms; table entries are random nonnegative.
inline predrisk::LossSpec random_loss(std::mt19937_64& rng,
                                      const predrisk::FiniteModel& m,
                                      std::size_t which) {
  switch (which % 4) {
    case 0: return predrisk::LossSpec::squared();
    case 1: return predrisk::LossSpec::absolute();
    case 2: return predrisk::LossSpec::zero_one(0.5);
    default: {
      std::uniform_real_distribution<double> u(0.0, 2.0);
      std::vector<std::vector<double>> matrix(m.n_pred(),
                                              std::vector<double>(m.n_pred()));
      for (std::size_t r = 0; r < m.n_pred(); ++r)
        for (std::size_t c = 0; c < m.n_pred(); ++c)
          matrix[r][c] = r == c ? 0.0 : u(rng);
      return predrisk::LossSpec::table(std::move(matrix), m.pred_space());
    }
  }
}

}  // namespace generators
