#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "predrisk/predrisk.hpp"

// Command-line front end:
//   predrisk predict        <spec> --y-obs ...
//   predrisk risk           <spec> [--functional ...] [--rule bayes|file]
//   predrisk admissibility  <spec>
//
// Standard output carries only data (CSV or JSON Lines); diagnostics go to
// standard error. Exit codes: 0 success, 2 spec problems, 3
// conditioning-undefined, 4 rule-file mismatch, 5 enumeration cap exceeded.

namespace predrisk::cli {

using ordered_json = nlohmann::ordered_json;

struct Settings {
  double tol = kDefaultDominanceTol;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 100'000;
  std::uint64_t cap = kDefaultEnumerationCap;
  std::string format;  // "csv" or "json-lines"
};

namespace detail {

inline std::string fmt(double v) { return specfmt::format_double(v); }

inline std::string join(const Point& p, const char* sep = ";") {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += sep;
    out += fmt(p[i]);
  }
  return out;
}

inline std::string join_indices(const std::vector<std::size_t>& idx,
                                const char* sep = ";") {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(idx[i]);
  }
  return out;
}

inline const char* loss_name(const LossSpec& loss) {
  switch (loss.form()) {
    case LossSpec::Form::Squared: return "squared";
    case LossSpec::Form::Absolute: return "absolute";
    case LossSpec::Form::ZeroOne: return "zero_one";
    case LossSpec::Form::Table: return "table";
  }
  return "?";
}

inline std::string provenance_comment(const std::string& command,
                                      const std::string& extras, const Settings& st) {
  std::string line = "# predrisk " + command;
  if (!extras.empty()) line += " " + extras;
  line += " format_version=1 tol=" + fmt(st.tol) + " seed=" + std::to_string(st.seed) +
          " mc_samples=" + std::to_string(st.mc_samples) +
          " cap=" + std::to_string(st.cap);
  return line;
}

inline ordered_json provenance_json(const Settings& st) {
  ordered_json j;
  j["format_version"] = 1;
  j["tol"] = st.tol;
  j["seed"] = st.seed;
  j["mc_samples"] = st.mc_samples;
  j["cap"] = st.cap;
  return j;
}

inline ordered_json risk_json(const RiskEstimate& r) {
  ordered_json j;
  j["value"] = r.value;
  j["method"] = method_name(r.method);
  j["error"] = r.error;
  if (r.method == RiskEstimate::Method::MonteCarlo) j["samples"] = r.samples;
  return j;
}

inline ordered_json predictive_json(const PosteriorPredictive& pp) {
  ordered_json j;
  if (const auto* d = std::get_if<DiscreteDistribution>(&pp)) {
    j["kind"] = "discrete";
    j["support"] = d->support();
    j["probs"] = d->probs();
    return j;
  }
  const auto& cf = std::get<ClosedFormPredictive>(pp);
  if (const auto* b = cf.as<BetaBinomialPredictive>()) {
    j["kind"] = "beta_binomial";
    j["alpha"] = b->alpha;
    j["beta"] = b->beta;
    j["n_pred"] = b->n;
  } else if (const auto* n = cf.as<NormalPredictive>()) {
    j["kind"] = "normal";
    j["mean"] = n->mean;
    j["variance"] = n->variance;
  } else {
    const auto* nb = cf.as<NegativeBinomialPredictive>();
    j["kind"] = "negative_binomial";
    j["shape"] = nb->shape;
    j["prob"] = nb->prob;
  }
  return j;
}

inline Point parse_y_obs(const std::string& text) {
  Point p;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      p.push_back(std::stod(tok, &used));
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
        ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConditioningError("cannot parse observation component `" + tok + "`");
    }
  }
  if (p.empty()) throw ConditioningError("empty observation");
  return p;
}

inline double conjugate_obs(const ConjugateModel&, const Point& y) {
  if (y.size() != 1)
    throw ConditioningError(
        "this model conditions on a scalar observation summary, got " +
        std::to_string(y.size()) + " components");
  return y[0];
}

}  // namespace detail

// ---------------------------------------------------------------------------
// predict
// ---------------------------------------------------------------------------

inline int cmd_predict(const SpecDocument& doc, const Point& y_obs,
                       const Settings& st, std::ostream& out) {
  using detail::fmt;
  const auto pp = std::visit(
      [&](const auto& m) -> PosteriorPredictive {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, FiniteModel>)
          return posterior_predictive(m, y_obs);
        else
          return posterior_predictive(m, detail::conjugate_obs(m, y_obs));
      },
      doc.model);
  const auto rule = bayes_prediction_rule(doc.model, doc.loss);
  const Point prediction = std::visit(
      [&](const auto& m) {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, FiniteModel>)
          return apply_rule(m, rule, y_obs);
        else
          return apply_rule(m, rule, y_obs[0]);
      },
      doc.model);
  const RiskEstimate attained = expected_loss(pp, prediction, doc.loss);

  if (st.format == "csv") {
    out << detail::provenance_comment("predict",
                                      "y_obs=" + detail::join(y_obs) +
                                          " loss=" + detail::loss_name(doc.loss),
                                      st)
        << "\n";
    out << "y_pred,probability\n";
    if (const auto* d = std::get_if<DiscreteDistribution>(&pp)) {
      for (std::size_t i = 0; i < d->size(); ++i)
        out << detail::join(d->point(i)) << "," << fmt(d->prob(i)) << "\n";
    } else {
      const auto& cf = std::get<ClosedFormPredictive>(pp);
      if (const auto* n = cf.as<NormalPredictive>()) {
        out << "# predictive = normal mean=" << fmt(n->mean)
            << " variance=" << fmt(n->variance) << "\n";
      } else {
        const int hi = cf.count_support_hi(1e-12);
        auto pmf = [&](int t) {
          if (const auto* b = cf.as<BetaBinomialPredictive>()) return b->pmf(t);
          return cf.as<NegativeBinomialPredictive>()->pmf(t);
        };
        for (int t = 0; t <= hi; ++t) out << t << "," << fmt(pmf(t)) << "\n";
      }
    }
    out << "# prediction = " << detail::join(prediction) << "\n";
    out << "# posterior_predictive_risk = " << fmt(attained.value)
        << " method=" << method_name(attained.method)
        << " error=" << fmt(attained.error) << "\n";
    return 0;
  }

  ordered_json rec;
  rec["record"] = "predict";
  rec["y_obs"] = y_obs;
  rec["loss"] = detail::loss_name(doc.loss);
  rec["predictive"] = detail::predictive_json(pp);
  rec["prediction"] = prediction;
  rec["posterior_predictive_risk"] = detail::risk_json(attained);
  rec["provenance"] = detail::provenance_json(st);
  out << rec.dump() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// risk
// ---------------------------------------------------------------------------

namespace detail {

struct RiskRow {
  std::string key;        // theta (or y_obs, or "bayes") for the CSV column
  ordered_json key_json;  // the same, structured
  RiskEstimate estimate;
};

inline void emit_risk_rows(const std::vector<RiskRow>& rows, const std::string& extras,
                           const Settings& st, std::ostream& out) {
  if (st.format == "csv") {
    out << provenance_comment("risk", extras, st) << "\n";
    out << "theta,risk,method,error\n";
    for (const auto& r : rows)
      out << r.key << "," << fmt(r.estimate.value) << ","
          << method_name(r.estimate.method) << "," << fmt(r.estimate.error) << "\n";
    return;
  }
  ordered_json prov;
  prov["record"] = "provenance";
  prov["command"] = "risk";
  prov.update(provenance_json(st));
  out << prov.dump() << "\n";
  for (const auto& r : rows) {
    ordered_json rec;
    rec["theta"] = r.key_json;
    rec["risk"] = r.estimate.value;
    rec["method"] = method_name(r.estimate.method);
    rec["error"] = r.estimate.error;
    if (r.estimate.method == RiskEstimate::Method::MonteCarlo)
      rec["samples"] = r.estimate.samples;
    out << rec.dump() << "\n";
  }
}

}  // namespace detail

inline int cmd_risk(const SpecDocument& doc, const std::string& functional,
                    const PredictionRule& rule, const std::string& rule_label,
                    const std::optional<Point>& y_obs_opt, const Settings& st,
                    std::ostream& out) {
  std::vector<detail::RiskRow> rows;

  if (functional == "bayes") {
    const RiskEstimate r = std::visit(
        [&](const auto& m) { return bayes_prediction_risk(m, rule, doc.loss); },
        doc.model);
    rows.push_back({"bayes", "bayes", r});
  } else if (functional == "frequentist") {
    if (const auto* fm = std::get_if<FiniteModel>(&doc.model)) {
      for (const auto& [theta, r] : risk_curve(*fm, rule, doc.loss))
        rows.push_back({detail::join(theta), theta, r});
    } else {
      const auto& cm = std::get<ConjugateModel>(doc.model);
      if (!doc.experiment.theta_grid)
        throw SpecError(
            "frequentist risk on a conjugate model needs experiment.theta_grid");
      for (const auto& [theta, r] :
           risk_curve(cm, rule, doc.loss, *doc.experiment.theta_grid))
        rows.push_back({detail::fmt(theta), theta, r});
    }
  } else {  // posterior-predictive
    auto row_for = [&](const Point& y) -> detail::RiskRow {
      const RiskEstimate r = std::visit(
          [&](const auto& m) {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, FiniteModel>)
              return expected_loss(posterior_predictive(m, y), apply_rule(m, rule, y),
                                   doc.loss);
            else {
              const double s = detail::conjugate_obs(m, y);
              return expected_loss(posterior_predictive(m, s), apply_rule(m, rule, s),
                                   doc.loss);
            }
          },
          doc.model);
      return {detail::join(y), y, r};
    };
    if (y_obs_opt) {
      rows.push_back(row_for(*y_obs_opt));
    } else if (const auto* fm = std::get_if<FiniteModel>(&doc.model)) {
      for (const auto& y : fm->obs_space()) rows.push_back(row_for(y));
    } else {
      const auto& cm = std::get<ConjugateModel>(doc.model);
      if (!cm.finite_obs_summaries())
        throw SpecError(
            "posterior-predictive risk over unbounded observations needs --y-obs");
      for (double s : cm.obs_summary_values()) rows.push_back(row_for(Point{s}));
    }
  }

  detail::emit_risk_rows(rows, "functional=" + functional + " rule=" + rule_label,
                         st, out);
  return 0;
}

// ---------------------------------------------------------------------------
// admissibility
// ---------------------------------------------------------------------------

inline int cmd_admissibility(const SpecDocument& doc, const Settings& st,
                             std::ostream& out) {
  const auto* fm = std::get_if<FiniteModel>(&doc.model);
  if (!fm)
    throw SpecError("admissibility certification requires a finite model");
  const auto report = admissibility_report(*fm, doc.loss, st.tol, st.cap);

  if (st.format == "csv") {
    out << detail::provenance_comment("admissibility",
                                      "loss=" + std::string(detail::loss_name(doc.loss)),
                                      st)
        << "\n";
    out << "rule,assignment,status,dominated_by,witness_theta,is_bayes\n";
    for (std::size_t r = 0; r < report.rules.size(); ++r) {
      const auto& rec = report.rules[r];
      out << r << "," << detail::join_indices(rec.assignment) << ","
          << (rec.admissible ? "admissible" : "inadmissible") << ",";
      if (rec.dominated_by) out << *rec.dominated_by;
      out << ",";
      if (rec.witness_theta) out << *rec.witness_theta;
      out << "," << (r == report.bayes_index ? "true" : "false") << "\n";
    }
    return 0;
  }

  ordered_json prov;
  prov["record"] = "provenance";
  prov["command"] = "admissibility";
  prov.update(detail::provenance_json(st));
  out << prov.dump() << "\n";
  for (std::size_t r = 0; r < report.rules.size(); ++r) {
    const auto& rec = report.rules[r];
    ordered_json j;
    j["rule"] = r;
    j["assignment"] = rec.assignment;
    j["status"] = rec.admissible ? "admissible" : "inadmissible";
    j["dominated_by"] =
        rec.dominated_by ? ordered_json(*rec.dominated_by) : ordered_json(nullptr);
    j["witness_theta"] =
        rec.witness_theta ? ordered_json(*rec.witness_theta) : ordered_json(nullptr);
    j["is_bayes"] = (r == report.bayes_index);
    j["risks"] = rec.risks;
    out << j.dump() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Bayes prediction rules, prediction risk, and admissibility "
               "certificates for declarative models"};
  app.name("predrisk");
  app.require_subcommand(1);

  std::string spec_path;
  std::string y_obs_str;
  std::string functional = "bayes";
  std::string rule_source = "bayes";
  Settings st;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("spec", spec_path, "model document (.predrisk)")->required();
    sub->add_option("--format", st.format, "output format: csv or json-lines")
        ->check(CLI::IsMember({"csv", "json-lines"}));
    sub->add_option("--tol", st.tol, "dominance strictness tolerance");
    sub->add_option("--seed", st.seed, "seed for randomized sub-searches");
    sub->add_option("--mc-samples", st.mc_samples, "Monte Carlo sample count");
    sub->add_option("--cap", st.cap, "rule enumeration cap");
  };

  CLI::App* predict = app.add_subcommand(
      "predict", "posterior predictive and Bayes point prediction");
  add_common(predict);
  predict
      ->add_option("--y-obs", y_obs_str,
                   "observed value (comma-separated components)")
      ->required();

  CLI::App* risk = app.add_subcommand("risk", "risk functionals of a rule");
  add_common(risk);
  risk->add_option("--functional", functional,
                   "frequentist | bayes | posterior-predictive")
      ->check(CLI::IsMember({"frequentist", "bayes", "posterior-predictive"}));
  risk->add_option("--rule", rule_source, "`bayes` or a rule file path");
  risk->add_option("--y-obs", y_obs_str,
                   "condition posterior-predictive risk on one observation");

  CLI::App* admissibility = app.add_subcommand(
      "admissibility", "admissible/inadmissible partition of all rules");
  add_common(admissibility);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  CLI::App* active = app.got_subcommand(predict)
                         ? predict
                         : (app.got_subcommand(risk) ? risk : admissibility);
  if (st.format.empty()) st.format = active == predict ? "json-lines" : "csv";

  try {
    std::ifstream in(spec_path);
    if (!in) {
      err << "error: cannot read spec file `" << spec_path << "`\n";
      return 2;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const SpecDocument doc = parse_spec(buffer.str());

    // Experiment stanza supplies defaults; explicit flags win.
    if (doc.experiment.tol && active->count("--tol") == 0)
      st.tol = *doc.experiment.tol;
    if (doc.experiment.seed && active->count("--seed") == 0)
      st.seed = *doc.experiment.seed;
    if (doc.experiment.mc_samples && active->count("--mc-samples") == 0)
      st.mc_samples = *doc.experiment.mc_samples;
    if (doc.experiment.cap && active->count("--cap") == 0)
      st.cap = *doc.experiment.cap;

    if (app.got_subcommand(predict))
      return cmd_predict(doc, detail::parse_y_obs(y_obs_str), st, out);

    if (app.got_subcommand(risk)) {
      PredictionRule rule = bayes_prediction_rule(doc.model, doc.loss);
      std::string rule_label = "bayes";
      if (rule_source != "bayes") {
        try {
          std::ifstream rf(rule_source);
          if (!rf)
            throw RuleMismatchError("cannot read rule file `" + rule_source + "`");
          std::stringstream rbuf;
          rbuf << rf.rdbuf();
          rule = parse_rule_file(rbuf.str(), doc.model);
          rule_label = "file";
        } catch (const RuleMismatchError&) {
          throw;
        } catch (const std::exception& e) {
          throw RuleMismatchError(e.what());
        }
      }
      std::optional<Point> y_obs;
      if (!y_obs_str.empty()) y_obs = detail::parse_y_obs(y_obs_str);
      return cmd_risk(doc, functional, rule, rule_label, y_obs, st, out);
    }

    return cmd_admissibility(doc, st, out);
  } catch (const ConditioningError& e) {
    err << "error: conditioning undefined: " << e.what() << "\n";
    return 3;
  } catch (const RuleMismatchError& e) {
    err << "error: rule mismatch: " << e.what() << "\n";
    return 4;
  } catch (const EnumerationCapError& e) {
    err << "error: " << e.what() << "\n";
    return 5;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace predrisk::cli
