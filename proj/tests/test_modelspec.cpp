#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "predrisk/modelspec.hpp"

using namespace predrisk;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> fixture_files(const char* subdir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(fs::path(PREDRISK_FIXTURE_DIR) / subdir))
    if (e.is_regular_file()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  REQUIRE_FALSE(out.empty());
  return out;
}

constexpr const char* kMinimalFinite = R"(format_version = 1

[model]
kind = "finite"
theta_points = [[0.0], [1.0]]
prior_weights = [0.5, 0.5]
obs_space = [[0.0], [1.0]]
pred_space = [[0.0], [1.0]]
joint = [[[0.25, 0.25], [0.25, 0.25]], [[0.25, 0.25], [0.25, 0.25]]]

[loss]
form = "squared"
)";

}  // namespace

TEST_CASE("minimal finite document parses into the expected fields") {
  const auto doc = parse_spec(kMinimalFinite);
  const auto* fm = std::get_if<FiniteModel>(&doc.model);
  REQUIRE(fm != nullptr);
  CHECK(fm->n_theta() == 2);
  CHECK(fm->n_obs() == 2);
  CHECK(fm->n_pred() == 2);
  CHECK(fm->joint(0, 0, 0) == 0.25);
  CHECK(fm->prior_weight(1) == 0.5);
  CHECK(doc.loss.form() == LossSpec::Form::Squared);
  CHECK(doc.experiment.empty());
}

TEST_CASE("a denormalized slice is schema-valid but model-invalid") {
  std::string text(kMinimalFinite);
  const auto pos = text.rfind("0.25");
  text.replace(pos, 4, "0.15");
  try {
    parse_spec(text);
    FAIL("expected ModelInvalidError");
  } catch (const ModelInvalidError& e) {
    CHECK(std::string(e.what()).find("joint[theta=1]") != std::string::npos);
  }
}

TEST_CASE("duplicate model stanza is a schema error") {
  std::string text(kMinimalFinite);
  text += "\n[model]\nkind = \"beta_bernoulli\"\n";
  try {
    parse_spec(text);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("exactly one") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_spec("format_version = 1\n\n[model\nkind = \"finite\"\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() >= 1);
  }
}

TEST_CASE("every valid fixture parses and round-trips") {
  for (const auto& path : fixture_files("valid")) {
    CAPTURE(path.string());
    const auto doc = parse_spec(slurp(path));
    const std::string canonical = serialize_spec(doc);
    const auto reparsed = parse_spec(canonical);
    CHECK(structurally_equal(doc, reparsed));
    // Canonical form is a fixed point of parse-then-serialize.
    CHECK(serialize_spec(reparsed) == canonical);
  }
}

TEST_CASE("every malformed fixture is rejected with a diagnostic") {
  for (const auto& path : fixture_files("malformed")) {
    CAPTURE(path.string());
    const std::string text = slurp(path);
    bool rejected = false;
    std::string message;
    try {
      parse_spec(text);
    } catch (const SpecError& e) {
      rejected = true;
      message = e.what();
    }
    CHECK(rejected);
    CHECK_FALSE(message.empty());
  }
}

TEST_CASE("serialization preserves conjugate hyperparameters exactly") {
  const char* text = R"(format_version = 1

[model]
kind = "normal_known_var"
mu0 = 0.1
tau0_sq = 0.30000000000000004
sigma_sq = 9.5
n_obs = 7
n_pred = 3

[loss]
form = "zero_one"
band = 0.25

[experiment]
seed = 99
tol = 1e-9
)";
  const auto doc = parse_spec(text);
  const auto doc2 = parse_spec(serialize_spec(doc));
  const auto* nn = std::get_if<ConjugateModel>(&doc2.model)->as<NormalKnownVar>();
  REQUIRE(nn != nullptr);
  CHECK(nn->mu0 == 0.1);
  CHECK(nn->tau0_sq == 0.30000000000000004);
  CHECK(nn->sigma_sq == 9.5);
  CHECK(doc2.loss.band() == 0.25);
  CHECK(doc2.experiment.seed == 99);
  CHECK(doc2.experiment.tol == 1e-9);
}

TEST_CASE("serialization is deterministic") {
  const auto doc = parse_spec(kMinimalFinite);
  CHECK(serialize_spec(doc) == serialize_spec(doc));
}

TEST_CASE("specific diagnostics name the offending key") {
  auto expect_schema_key = [](const std::string& text, const std::string& key) {
    try {
      parse_spec(text);
      FAIL_CHECK("expected SchemaError for " << key);
    } catch (const SchemaError& e) {
      CHECK(e.key() == key);
    } catch (const SpecError& e) {
      FAIL_CHECK("wrong error type: " << e.what());
    }
  };
  expect_schema_key(
      "format_version = 1\n[model]\nkind = \"beta_bernoulli\"\nalpha = 1\nbeta = "
      "1\nn_obs = 2\nn_pred = 1\nflavor = 3\n[loss]\nform = \"squared\"\n",
      "model.flavor");
  expect_schema_key(
      "format_version = 1\n[model]\nkind = \"beta_bernoulli\"\nalpha = \"x\"\nbeta "
      "= 1\nn_obs = 2\nn_pred = 1\n[loss]\nform = \"squared\"\n",
      "model.alpha");
  expect_schema_key("format_version = 1\n[loss]\nform = \"squared\"\n", "model");
}

TEST_CASE("rule files resolve against the model") {
  const auto doc = parse_spec(kMinimalFinite);

  const auto idx = parse_rule_file(
      "format_version = 1\n[rule]\npred_indices = [1, 0]\n", doc.model);
  CHECK(idx.indices() == std::vector<std::size_t>{1, 0});

  const auto by_value = parse_rule_file(
      "format_version = 1\n[rule]\noutputs = [[1.0], [0.0]]\n", doc.model);
  CHECK(by_value.indices() == std::vector<std::size_t>{1, 0});

  const auto tag = parse_rule_file(
      "format_version = 1\n[rule]\ntag = \"predictive_mode\"\n", doc.model);
  CHECK(tag.tag() == PredictionRule::Tag::PredictiveMode);

  CHECK_THROWS_AS(parse_rule_file(
                      "format_version = 1\n[rule]\npred_indices = [0, 1, 0]\n",
                      doc.model),
                  RuleMismatchError);
  CHECK_THROWS_AS(parse_rule_file(
                      "format_version = 1\n[rule]\npred_indices = [0, 7]\n",
                      doc.model),
                  RuleMismatchError);
  CHECK_THROWS_AS(parse_rule_file(
                      "format_version = 1\n[rule]\noutputs = [[0.5], [0.0]]\n",
                      doc.model),
                  RuleMismatchError);
  CHECK_THROWS_AS(
      parse_rule_file("format_version = 1\n[rule]\ntag = \"oracle\"\n", doc.model),
      SchemaError);
  CHECK_THROWS_AS(parse_rule_file("format_version = 1\n", doc.model), SchemaError);

  // Unbounded observation summaries cannot carry table rules.
  const Model gp{ConjugateModel(GammaPoisson{1.0, 1.0, 1, 1})};
  CHECK_THROWS_AS(parse_rule_file(
                      "format_version = 1\n[rule]\noutputs = [[0.5], [1.0]]\n", gp),
                  RuleMismatchError);

  // Beta-Bernoulli: one output per observation summary 0..n_obs.
  const Model bb{ConjugateModel(BetaBernoulli{1.0, 1.0, 2, 1})};
  const auto vt = parse_rule_file(
      "format_version = 1\n[rule]\noutputs = [0.2, 0.5, 0.8]\n", bb);
  REQUIRE(vt.kind() == PredictionRule::Kind::ValueTable);
  CHECK(vt.values().size() == 3);
}

TEST_CASE("comments, whitespace, and multiline arrays are tolerated") {
  const char* text = R"(# leading comment
format_version = 1

[model]  # trailing comment
kind = "finite"
theta_points = [
  [0.0],
  [1.0],
]
prior_weights = [0.5, 0.5]
obs_space = [[0.0], [1.0]]
pred_space = [[0.0], [1.0]]
joint = [[[0.25, 0.25], [0.25, 0.25]],
         [[0.25, 0.25], [0.25, 0.25]]]

[loss]
form = "squared"
)";
  const auto doc = parse_spec(text);
  CHECK(std::get_if<FiniteModel>(&doc.model) != nullptr);
}
