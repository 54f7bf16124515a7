#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "predrisk/ruleopt.hpp"

using namespace predrisk;

TEST_CASE("squared-loss bayes rule of the flat-prior coin is the predictive mean") {
  const ConjugateModel m(BetaBernoulli{1.0, 1.0, 2, 1});
  const auto rule = bayes_prediction_rule(m, LossSpec::squared());
  REQUIRE(rule.kind() == PredictionRule::Kind::ClosedForm);
  CHECK(rule.tag() == PredictionRule::Tag::PredictiveMean);

  // Oracle value for two successes: posterior mean 3/4 by quadrature.
  const double oracle = oracles::beta_bernoulli_posterior_moment(1, 1, 2, 2, 1);
  CHECK(apply_rule(m, rule, 2.0)[0] == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("zero-one loss maps every observation to the predictive mode") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = generators::random_finite_model(rng);
    const auto rule = bayes_prediction_rule(m, LossSpec::zero_one());
    for (std::size_t k = 0; k < m.n_obs(); ++k) {
      const auto pp = posterior_predictive(m, m.obs_space()[k]);
      const auto& d = std::get<DiscreteDistribution>(pp);
      // Lowest-index tie-break within 1e-12 of the max probability.
      double maxp = 0.0;
      for (std::size_t j = 0; j < d.size(); ++j) maxp = std::max(maxp, d.prob(j));
      std::size_t expected = 0;
      for (std::size_t j = 0; j < d.size(); ++j)
        if (d.prob(j) >= maxp - 1e-12) {
          expected = j;
          break;
        }
      CHECK(rule.indices()[k] == expected);
    }
  }
}

TEST_CASE("symmetric two-point predictive pulls the continuous minimizer to 1/2") {
  const DiscreteDistribution d({{0.0}, {1.0}}, {0.5, 0.5});
  const PosteriorPredictive pp(d);
  CHECK(closed_form_predictor(pp, LossSpec::Form::Squared)[0] == 0.5);
  const double argmin = minimize_posterior_predictive_risk(pp, LossSpec::squared());
  CHECK(argmin == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("closed-form predictors on stated examples") {
  const PosteriorPredictive normal(ClosedFormPredictive(NormalPredictive{2.5, 1.0}));
  CHECK(closed_form_predictor(normal, LossSpec::Form::Squared)[0] == 2.5);
  CHECK(closed_form_predictor(normal, LossSpec::Form::Absolute)[0] == 2.5);

  // Absolute loss: exhaustive expected-loss scan certifies the median.
  const DiscreteDistribution d({{0.0}, {1.0}, {2.0}}, {0.2, 0.5, 0.3});
  const PosteriorPredictive pp(d);
  double best = 1e300;
  double best_point = -1.0;
  for (const auto& cand : d.support()) {
    const double v =
        oracles::discrete_expected_loss(d.support(), d.probs(), cand, LossSpec::absolute());
    if (v < best - 1e-12) {
      best = v;
      best_point = cand[0];
    }
  }
  CHECK(best_point == 1.0);
  CHECK(closed_form_predictor(pp, LossSpec::Form::Absolute)[0] == best_point);

  // Zero-one tie-break: equal probabilities resolve to the lowest index.
  const DiscreteDistribution tie({{0.0}, {1.0}}, {0.5, 0.5});
  CHECK(closed_form_predictor(PosteriorPredictive(tie), LossSpec::Form::ZeroOne)[0] ==
        0.0);

  CHECK_THROWS_AS(closed_form_predictor(pp, LossSpec::Form::Table),
                  std::invalid_argument);
}

TEST_CASE("rule enumeration counts and order") {
  RuleEnumeration e22(2, 2, 1'000'000);
  CHECK(e22.size() == 4);
  std::vector<std::vector<std::size_t>> all;
  for (const auto& a : e22) all.push_back(a);
  REQUIRE(all.size() == 4);
  CHECK(all[0] == std::vector<std::size_t>{0, 0});
  CHECK(all[1] == std::vector<std::size_t>{0, 1});
  CHECK(all[2] == std::vector<std::size_t>{1, 0});
  CHECK(all[3] == std::vector<std::size_t>{1, 1});

  RuleEnumeration e33(3, 3, 1'000'000);
  CHECK(e33.size() == 27);
  std::size_t n = 0;
  std::vector<std::size_t> first;
  for (const auto& a : e33) {
    if (n == 0) first = a;
    ++n;
  }
  CHECK(n == 27);
  CHECK(first == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("enumeration cap errors name the rule count") {
  try {
    RuleEnumeration(3, 3, 10);
    FAIL("expected EnumerationCapError");
  } catch (const EnumerationCapError& e) {
    CHECK(e.count() == 27);
    CHECK_FALSE(e.lower_bound());
    CHECK(std::string(e.what()).find("27") != std::string::npos);
  }
  // Astronomically large spaces saturate and flag the count as a lower bound.
  try {
    RuleEnumeration(64, 1024, 1'000'000);
    FAIL("expected EnumerationCapError");
  } catch (const EnumerationCapError& e) {
    CHECK(e.lower_bound());
  }
}

TEST_CASE("optimality: no enumerated rule beats the bayes rule") {
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = generators::random_finite_model(rng);
    const auto loss = generators::random_loss(rng, m, trial);
    const auto bayes = bayes_prediction_rule(m, loss);
    const double bayes_risk = bayes_prediction_risk(m, bayes, loss).value;
    for (const auto& assignment : enumerate_all_rules(m)) {
      const double risk =
          bayes_prediction_risk(m, PredictionRule::index_table(assignment), loss).value;
      CHECK(bayes_risk <= risk + 1e-12);
    }
  }
}

TEST_CASE("per-observation optimality of the derived rule") {
  std::mt19937_64 rng(1002);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = generators::random_finite_model(rng);
    const auto loss = generators::random_loss(rng, m, trial);
    const auto bayes = bayes_prediction_rule(m, loss);
    for (std::size_t k = 0; k < m.n_obs(); ++k) {
      const auto& y = m.obs_space()[k];
      const double chosen =
          posterior_predictive_risk(m, y, m.pred_space()[bayes.indices()[k]], loss)
              .value;
      for (const auto& cand : m.pred_space())
        CHECK(chosen <= posterior_predictive_risk(m, y, cand, loss).value + 1e-12);
    }
  }
}

TEST_CASE("golden-section minimization agrees with the closed-form mean") {
  const ConjugateModel bb(BetaBernoulli{2.0, 3.0, 4, 3});
  const ConjugateModel gp(GammaPoisson{3.0, 2.0, 2, 2});
  const ConjugateModel nn(NormalKnownVar{1.0, 4.0, 9.0, 5, 2});
  const std::vector<std::pair<const ConjugateModel*, double>> cases{
      {&bb, 3.0}, {&gp, 4.0}, {&nn, 0.7}};
  for (const auto& [model, y_obs] : cases) {
    const auto pp = posterior_predictive(*model, y_obs);
    const double mean = closed_form_predictor(pp, LossSpec::Form::Squared)[0];
    const double argmin = minimize_posterior_predictive_risk(pp, LossSpec::squared());
    CHECK(std::abs(argmin - mean) < 1e-8);
  }
}

TEST_CASE("loss scaling never changes the derived rule table") {
  std::mt19937_64 rng(1003);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = generators::random_finite_model(rng);
    const auto loss = generators::random_loss(rng, m, trial);
    const auto base = bayes_prediction_rule(m, loss);
    for (double c : {3.0, 0.5, 1e6}) {
      const auto scaled = bayes_prediction_rule(m, loss.scaled_by(c));
      CHECK(base == scaled);
    }
  }
}

TEST_CASE("conjugate rule derivation per loss form") {
  const ConjugateModel bb(BetaBernoulli{2.0, 1.0, 2, 1});
  CHECK(bayes_prediction_rule(bb, LossSpec::absolute()).tag() ==
        PredictionRule::Tag::PredictiveMedian);
  CHECK(bayes_prediction_rule(bb, LossSpec::zero_one()).tag() ==
        PredictionRule::Tag::PredictiveMode);

  // Table loss over the finite prediction summaries: exhaustive argmin,
  // materialized per observation summary.
  const std::vector<Point> domain{{0.0}, {1.0}};
  const auto table = LossSpec::table({{0.0, 1.0}, {4.0, 0.0}}, domain);
  const auto rule = bayes_prediction_rule(bb, table);
  REQUIRE(rule.kind() == PredictionRule::Kind::ValueTable);
  REQUIRE(rule.values().size() == 3);
  for (int s = 0; s <= 2; ++s) {
    const auto pp = posterior_predictive(bb, s);
    const double chosen =
        detail::expected_loss_base(pp, rule.values()[s], table).value;
    for (const auto& cand : domain)
      CHECK(chosen <= detail::expected_loss_base(pp, cand, table).value + 1e-12);
  }

  const ConjugateModel gp(GammaPoisson{1.0, 1.0, 1, 1});
  CHECK_THROWS_AS(bayes_prediction_rule(gp, table), std::invalid_argument);
}

TEST_CASE("rule derivation propagates conditioning failures") {
  // Observation column 1 is impossible; the bayes rule cannot be derived.
  std::vector<double> joint{0.5, 0.0, 0.5, 0.0};
  const FiniteModel m(ParameterSpace::finite_grid({{0.0}}), Prior::weights({1.0}),
                      {{0.0}, {1.0}}, {{0.0}, {1.0}}, std::move(joint));
  CHECK_THROWS_AS(bayes_prediction_rule(m, LossSpec::squared()), ConditioningError);
}
