#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "predrisk/grid.hpp"
#include "predrisk/inference.hpp"

using namespace predrisk;

namespace {

FiniteModel uniform_2x2x2() {
  std::vector<double> joint(8, 0.25);
  return FiniteModel(ParameterSpace::finite_grid({{0.0}, {1.0}}),
                     Prior::weights({0.5, 0.5}), {{0.0}, {1.0}}, {{0.0}, {1.0}},
                     std::move(joint));
}

}  // namespace

TEST_CASE("oracle quadrature sanity") {
  CHECK(oracles::integrate([](double t) { return 3.0 * t * t; }, 0.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("posterior is uniform when the likelihood cannot discriminate") {
  const auto post = posterior(uniform_2x2x2(), {0.0});
  CHECK(post.prob(0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(post.prob(1) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("posterior of two observed successes matches the quadrature oracle") {
  // Oracle: quadrature posterior mean/second moment over theta in (0, 1) for
  // a flat prior and two successes -> Beta(3, 1) moments 3/4 and 3/5.
  const double oracle_mean = oracles::beta_bernoulli_posterior_moment(1, 1, 2, 2, 1);
  const double oracle_m2 = oracles::beta_bernoulli_posterior_moment(1, 1, 2, 2, 2);
  CHECK(oracle_mean == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(oracle_m2 == doctest::Approx(0.6).epsilon(1e-9));

  const ConjugateModel m(BetaBernoulli{1.0, 1.0, 2, 1});
  const auto post = posterior(m, 2.0);
  const auto* bp = std::get_if<BetaPosterior>(&post);
  REQUIRE(bp != nullptr);
  CHECK(bp->alpha == 3.0);
  CHECK(bp->beta == 1.0);
  CHECK(bp->alpha / (bp->alpha + bp->beta) == doctest::Approx(oracle_mean).epsilon(1e-9));
}

TEST_CASE("single-point parameter space forces a point-mass posterior") {
  std::vector<double> joint{0.5, 0.5};  // one theta, one pred, two obs
  const FiniteModel m(ParameterSpace::finite_grid({{2.5}}), Prior::weights({1.0}),
                      {{0.0}, {1.0}}, {{0.0}}, std::move(joint));
  for (const auto& y : m.obs_space()) {
    const auto post = posterior(m, y);
    CHECK(post.size() == 1);
    CHECK(post.prob(0) == 1.0);
  }
}

TEST_CASE("marginal evidence of a uniform joint is uniform") {
  const auto m = uniform_2x2x2();
  CHECK(marginal_evidence(m, {0.0}) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(marginal_evidence(m, {1.0}) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("Beta-Bernoulli evidence of one success in two trials is 1/3") {
  const double oracle = oracles::beta_bernoulli_evidence(1, 1, 2, 1);
  CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  const ConjugateModel m(BetaBernoulli{1.0, 1.0, 2, 1});
  CHECK(marginal_evidence(m, 1.0) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("marginal evidence sums to one over the observation space") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = generators::random_finite_model(rng);
    double total = 0.0;
    for (const auto& y : m.obs_space()) total += marginal_evidence(m, y);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Conjugate form: summing the Beta-Binomial evidence over all counts.
  const ConjugateModel bb(BetaBernoulli{2.0, 3.0, 4, 1});
  double total = 0.0;
  for (int s = 0; s <= 4; ++s) total += marginal_evidence(bb, s);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("posterior predictive of the flat-prior coin") {
  const ConjugateModel m(BetaBernoulli{1.0, 1.0, 2, 1});

  // One success in two trials: symmetric posterior, P(next = 1) = 1/2.
  const auto pp1 = posterior_predictive(m, 1.0);
  const auto* cf1 = std::get_if<ClosedFormPredictive>(&pp1);
  REQUIRE(cf1 != nullptr);
  CHECK(cf1->as<BetaBinomialPredictive>()->pmf(1) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Two successes: P(next = 1) = mean of Beta(3, 1) = 3/4 by the oracle.
  const double oracle = oracles::beta_bernoulli_posterior_moment(1, 1, 2, 2, 1);
  const auto pp2 = posterior_predictive(m, 2.0);
  CHECK(predictive_mean(pp2)[0] == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(std::get<ClosedFormPredictive>(pp2).as<BetaBinomialPredictive>()->pmf(1) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("no learning is possible from a single-point parameter space") {
  // Y_pred independent of Y_obs given theta, |Theta| = 1: the predictive
  // must equal f(y_pred | theta0) exactly.
  const std::vector<double> fpred{0.3, 0.7};
  std::vector<double> joint;
  for (double p : fpred)
    for (double q : {0.6, 0.4}) joint.push_back(p * q);
  const FiniteModel m(ParameterSpace::finite_grid({{0.0}}), Prior::weights({1.0}),
                      {{0.0}, {1.0}}, {{0.0}, {1.0}}, std::move(joint));
  for (const auto& y : m.obs_space()) {
    const auto pp = posterior_predictive(m, y);
    const auto& d = std::get<DiscreteDistribution>(pp);
    CHECK(d.prob(0) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(d.prob(1) == doctest::Approx(0.7).epsilon(1e-13));
  }
}

TEST_CASE("two-path consistency: condition the joint once or compose") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = generators::random_finite_model(rng);
    for (std::size_t k = 0; k < m.n_obs(); ++k) {
      const auto& y = m.obs_space()[k];
      const auto direct = std::get<DiscreteDistribution>(posterior_predictive(m, y));
      const auto post = posterior(m, y);
      for (std::size_t j = 0; j < m.n_pred(); ++j) {
        double composed = 0.0;
        for (std::size_t i = 0; i < m.n_theta(); ++i) {
          double col = 0.0;
          for (std::size_t jj = 0; jj < m.n_pred(); ++jj) col += m.joint(i, jj, k);
          if (col > 0.0) composed += post.prob(i) * m.joint(i, j, k) / col;
        }
        CHECK(direct.prob(j) == doctest::Approx(composed).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("evidence-weighted predictives recover the prior-mixed marginal") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 60; ++trial) {
    const auto m = generators::random_finite_model(rng);
    for (std::size_t j = 0; j < m.n_pred(); ++j) {
      double mixed = 0.0;
      for (std::size_t k = 0; k < m.n_obs(); ++k) {
        const auto& y = m.obs_space()[k];
        const auto pp = std::get<DiscreteDistribution>(posterior_predictive(m, y));
        mixed += marginal_evidence(m, y) * pp.prob(j);
      }
      double direct = 0.0;
      for (std::size_t i = 0; i < m.n_theta(); ++i)
        for (std::size_t k = 0; k < m.n_obs(); ++k)
          direct += m.prior_weight(i) * m.joint(i, j, k);
      CHECK(mixed == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("conditioning on an impossible observation is an error") {
  // Observation column 1 carries no mass under any theta.
  std::vector<double> joint{0.5, 0.0, 0.5, 0.0};
  const FiniteModel m(ParameterSpace::finite_grid({{0.0}}), Prior::weights({1.0}),
                      {{0.0}, {1.0}}, {{0.0}, {1.0}}, std::move(joint));
  CHECK_THROWS_AS(posterior(m, {1.0}), ConditioningError);
  CHECK_THROWS_AS(posterior_predictive(m, {1.0}), ConditioningError);
  CHECK_THROWS_AS(posterior(m, {7.0}), ConditioningError);  // not in obs space

  const ConjugateModel bb(BetaBernoulli{1.0, 1.0, 2, 1});
  CHECK_THROWS_AS(posterior(bb, 3.0), ConditioningError);
  CHECK_THROWS_AS(posterior(bb, 0.5), ConditioningError);
}

TEST_CASE("point-mass predictive sampling is constant") {
  const DiscreteDistribution d({{4.0}}, {1.0});
  const auto draws = sample_predictive(PosteriorPredictive(d), 100, 9);
  for (const auto& x : draws) CHECK(x == Point{4.0});
}

TEST_CASE("sampling is reproducible for identical seed and count") {
  const ConjugateModel m(BetaBernoulli{2.0, 1.0, 3, 2});
  const auto pp = posterior_predictive(m, 2.0);
  const auto a = sample_predictive(pp, 1000, 1234);
  const auto b = sample_predictive(pp, 1000, 1234);
  CHECK(a == b);
  const auto c = sample_predictive(pp, 1000, 1235);
  CHECK(a != c);

  const auto n1 = sample_predictive(
      PosteriorPredictive(ClosedFormPredictive(NormalPredictive{1.0, 2.0})), 50, 77);
  const auto n2 = sample_predictive(
      PosteriorPredictive(ClosedFormPredictive(NormalPredictive{1.0, 2.0})), 50, 77);
  CHECK(n1 == n2);
}

TEST_CASE("empirical frequencies stay within four binomial standard errors") {
  const ConjugateModel m(BetaBernoulli{1.0, 1.0, 2, 2});
  const auto pp = posterior_predictive(m, 1.0);
  const auto& cf = std::get<ClosedFormPredictive>(pp);
  const std::size_t n = 100'000;
  const auto draws = sample_predictive(pp, n, 42);
  std::map<int, std::size_t> counts;
  for (const auto& x : draws) ++counts[static_cast<int>(x[0])];
  for (int t = 0; t <= 2; ++t) {
    const double p = cf.as<BetaBinomialPredictive>()->pmf(t);
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(counts[t]) / n - p) <= 4.0 * se);
  }
}

TEST_CASE("closed-form predictive statistics") {
  const ClosedFormPredictive nb(NegativeBinomialPredictive{3.0, 0.5});
  CHECK(nb.mean() == doctest::Approx(3.0));
  CHECK(nb.variance() == doctest::Approx(6.0));
  double mass = 0.0;
  for (int t = 0; t < 200; ++t) mass += nb.as<NegativeBinomialPredictive>()->pmf(t);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(nb.quantile(0.5) == nb.median());

  const ClosedFormPredictive bb(BetaBinomialPredictive{2.0, 2.0, 4});
  CHECK(bb.mean() == doctest::Approx(2.0));
  CHECK(bb.mode() == 2.0);

  const ClosedFormPredictive norm(NormalPredictive{1.5, 4.0});
  CHECK(norm.median() == 1.5);
  CHECK(norm.quantile(0.5) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("fine theta grid reproduces Beta-Bernoulli predictives") {
  const BetaBernoulli bb{2.0, 3.0, 4, 3};
  const ConjugateModel cm(bb);
  const auto gridded = discretize(bb, 2001);
  REQUIRE(validate_model(gridded).ok());
  for (int s = 0; s <= bb.n_obs; ++s) {
    const auto exact = std::get<ClosedFormPredictive>(
        posterior_predictive(cm, static_cast<double>(s)));
    const auto grid = std::get<DiscreteDistribution>(
        posterior_predictive(gridded, {static_cast<double>(s)}));
    for (int t = 0; t <= bb.n_pred; ++t)
      CHECK(grid.prob(t) ==
            doctest::Approx(exact.as<BetaBinomialPredictive>()->pmf(t)).epsilon(1e-6));
  }
}
