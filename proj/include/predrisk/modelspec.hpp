#pragma once

// Declarative model/loss/experiment documents (.predrisk).
//
// The concrete syntax is a small key-value tree:
//   - top level:   format_version = 1
//   - stanzas:     [model] / [loss] / [experiment] headers, each at most once
//   - entries:     key = value, one per line; # starts a comment
//   - values:      numbers, "strings", true/false, and [a, b, ...] arrays
//                  (nestable; newlines allowed inside brackets)
//
// Model kinds: "finite" (theta_points, prior_weights, obs_space, pred_space,
// joint indexed [theta][y_pred][y_obs]) and the conjugate stanzas
// "beta_bernoulli" | "normal_known_var" | "gamma_poisson" with named
// hyperparameter keys. The parser never renormalizes probabilities;
// normalization problems surface as validation errors naming the index.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "predrisk/errors.hpp"
#include "predrisk/model.hpp"

namespace predrisk {

struct ExperimentConfig {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> mc_samples;
  std::optional<double> tol;
  std::optional<std::uint64_t> cap;
  std::optional<std::vector<double>> theta_grid;

  bool empty() const {
    return !seed && !mc_samples && !tol && !cap && !theta_grid;
  }
};

/// A parsed and validated document: exactly one model, one loss, and an
/// optional experiment stanza.
struct SpecDocument {
  int format_version = 1;
  Model model = ConjugateModel(BetaBernoulli{1.0, 1.0, 1, 1});
  LossSpec loss = LossSpec::squared();
  ExperimentConfig experiment;
};

// ---------------------------------------------------------------------------
// Low-level document parsing
// ---------------------------------------------------------------------------

namespace specfmt {

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<double, std::string, bool, Array> data;
  bool is_int = false;  // numeric literal without '.' or exponent
  int line = 0;
  int col = 0;
};

struct Entry {
  std::string key;
  Value value;
};

struct Section {
  std::string name;  // "" for the top level
  std::vector<Entry> entries;

  const Value* find(const std::string& key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e.value;
    return nullptr;
  }
};

struct Document {
  std::vector<Section> sections;  // first is the unnamed top level

  const Section* find(const std::string& name) const {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Document parse() {
    Document doc;
    doc.sections.push_back(Section{"", {}});
    Section* current = &doc.sections.front();

    skip_blank();
    while (!eof()) {
      if (peek() == '[') {
        advance();
        const std::string name = parse_bare_key();
        if (eof() || peek() != ']') fail("expected ] to close the stanza header");
        advance();
        end_of_line();
        for (const auto& s : doc.sections)
          if (s.name == name)
            throw SchemaError(name, "exactly one [" + name + "] stanza allowed");
        doc.sections.push_back(Section{name, {}});
        current = &doc.sections.back();
      } else {
        Entry e;
        e.key = parse_bare_key();
        skip_inline_ws();
        if (eof() || peek() != '=') fail("expected = after key `" + e.key + "`");
        advance();
        skip_inline_ws();
        e.value = parse_value(false);
        end_of_line();
        if (current->find(e.key))
          throw SchemaError(section_key(current->name, e.key), "duplicate key");
        current->entries.push_back(std::move(e));
      }
      skip_blank();
    }
    return doc;
  }

  static std::string section_key(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::pair<int, int> mark() const { return {line_, col_}; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line_, col_, msg);
  }

  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) advance();
  }

  void skip_comment() {
    while (!eof() && peek() != '\n') advance();
  }

  /// Whitespace, newlines, and comments (between top-level statements and
  /// inside arrays).
  void skip_blank() {
    while (!eof()) {
      const char ch = peek();
      if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r')
        advance();
      else if (ch == '#')
        skip_comment();
      else
        break;
    }
  }

  /// After a statement: optional spaces/comment, then newline or EOF.
  void end_of_line() {
    skip_inline_ws();
    if (!eof() && peek() == '#') skip_comment();
    if (!eof() && peek() == '\r') advance();
    if (eof()) return;
    if (peek() != '\n') fail("expected end of line");
    advance();
  }

  std::string parse_bare_key() {
    skip_inline_ws();
    std::string key;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      key.push_back(text_[pos_]), advance();
    if (key.empty()) fail("expected a key");
    return key;
  }

  Value parse_value(bool in_array) {
    if (in_array) skip_blank();
    if (eof()) fail("expected a value");
    const auto [l, c] = mark();
    const char ch = peek();

    if (ch == '"') return parse_string(l, c);
    if (ch == '[') return parse_array(l, c);
    if (ch == 't' || ch == 'f') return parse_bool(l, c);
    if (ch == '-' || ch == '+' || std::isdigit(static_cast<unsigned char>(ch)) ||
        ch == '.')
      return parse_number(l, c);
    fail("expected a value");
  }

  Value parse_string(int l, int c) {
    advance();  // opening quote
    std::string out;
    while (!eof() && peek() != '"') {
      char ch = peek();
      if (ch == '\n') fail("unterminated string");
      if (ch == '\\') {
        advance();
        if (eof()) fail("unterminated string escape");
        const char esc = peek();
        if (esc == '"' || esc == '\\')
          ch = esc;
        else
          fail("unsupported string escape");
      }
      out.push_back(ch);
      advance();
    }
    if (eof()) fail("unterminated string");
    advance();  // closing quote
    Value v;
    v.data = std::move(out);
    v.line = l;
    v.col = c;
    return v;
  }

  Value parse_bool(int l, int c) {
    std::string word;
    while (!eof() && std::isalpha(static_cast<unsigned char>(peek())))
      word.push_back(text_[pos_]), advance();
    Value v;
    v.line = l;
    v.col = c;
    if (word == "true")
      v.data = true;
    else if (word == "false")
      v.data = false;
    else
      fail("expected a value, got `" + word + "`");
    return v;
  }

  Value parse_number(int l, int c) {
    std::string token;
    bool has_dot_or_exp = false;
    while (!eof()) {
      const char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '+' || ch == '-') {
        token.push_back(ch);
      } else if (ch == '.' || ch == 'e' || ch == 'E') {
        token.push_back(ch);
        has_dot_or_exp = true;
      } else {
        break;
      }
      advance();
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      fail("malformed number `" + token + "`");
    }
    if (used != token.size()) fail("malformed number `" + token + "`");
    if (!std::isfinite(value)) fail("number `" + token + "` is not finite");
    Value v;
    v.data = value;
    v.is_int = !has_dot_or_exp;
    v.line = l;
    v.col = c;
    return v;
  }

  Value parse_array(int l, int c) {
    advance();  // '['
    Array items;
    skip_blank();
    while (!eof() && peek() != ']') {
      items.push_back(parse_value(true));
      skip_blank();
      if (!eof() && peek() == ',') {
        advance();
        skip_blank();
      } else {
        break;
      }
    }
    if (eof() || peek() != ']') fail("expected , or ] in array");
    advance();
    Value v;
    v.data = std::move(items);
    v.line = l;
    v.col = c;
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// --- typed access helpers ---------------------------------------------------

inline double as_number(const Value& v, const std::string& key) {
  if (const auto* d = std::get_if<double>(&v.data)) return *d;
  throw SchemaError(key, "expected a number");
}

inline std::int64_t as_integer(const Value& v, const std::string& key) {
  if (const auto* d = std::get_if<double>(&v.data)) {
    if (v.is_int && *d == std::floor(*d) && std::abs(*d) < 9.2e18)
      return static_cast<std::int64_t>(*d);
  }
  throw SchemaError(key, "expected an integer");
}

inline const std::string& as_string(const Value& v, const std::string& key) {
  if (const auto* s = std::get_if<std::string>(&v.data)) return *s;
  throw SchemaError(key, "expected a string");
}

inline const Array& as_array(const Value& v, const std::string& key) {
  if (const auto* a = std::get_if<Array>(&v.data)) return *a;
  throw SchemaError(key, "expected an array");
}

inline std::vector<double> as_number_vector(const Value& v, const std::string& key) {
  const auto& arr = as_array(v, key);
  std::vector<double> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(as_number(arr[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

/// A point is an array of numbers; a bare number is accepted as 1-D shorthand.
inline Point as_point(const Value& v, const std::string& key) {
  if (std::get_if<double>(&v.data)) return {as_number(v, key)};
  const auto& arr = as_array(v, key);
  if (arr.empty()) throw SchemaError(key, "point must have >= 1 coordinate");
  Point p;
  p.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    p.push_back(as_number(arr[i], key + "[" + std::to_string(i) + "]"));
  return p;
}

inline std::vector<Point> as_point_list(const Value& v, const std::string& key) {
  const auto& arr = as_array(v, key);
  if (arr.empty()) throw SchemaError(key, "expected a nonempty array of points");
  std::vector<Point> pts;
  pts.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    pts.push_back(as_point(arr[i], key + "[" + std::to_string(i) + "]"));
  const std::size_t dim = pts.front().size();
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].size() != dim)
      throw SchemaError(key + "[" + std::to_string(i) + "]",
                        "inconsistent point dimension");
  return pts;
}

inline void reject_unknown_keys(const Section& s,
                                std::initializer_list<const char*> allowed) {
  for (const auto& e : s.entries) {
    bool ok = false;
    for (const char* k : allowed)
      if (e.key == k) ok = true;
    if (!ok)
      throw SchemaError(Parser::section_key(s.name, e.key), "unknown key");
  }
}

inline const Value& require(const Section& s, const char* key) {
  const Value* v = s.find(key);
  if (!v)
    throw SchemaError(Parser::section_key(s.name, key), "missing required key");
  return *v;
}

}  // namespace specfmt

// ---------------------------------------------------------------------------
// Schema: document -> SpecDocument
// ---------------------------------------------------------------------------

namespace specfmt {

inline Model build_model(const Section& s) {
  const std::string& kind = as_string(require(s, "kind"), "model.kind");

  if (kind == "finite") {
    reject_unknown_keys(s, {"kind", "theta_points", "prior_weights", "obs_space",
                            "pred_space", "joint"});
    auto theta = as_point_list(require(s, "theta_points"), "model.theta_points");
    auto weights = as_number_vector(require(s, "prior_weights"), "model.prior_weights");
    auto obs = as_point_list(require(s, "obs_space"), "model.obs_space");
    auto pred = as_point_list(require(s, "pred_space"), "model.pred_space");
    if (weights.size() != theta.size())
      throw SchemaError("model.prior_weights",
                        "expected one weight per theta point (" +
                            std::to_string(theta.size()) + "), got " +
                            std::to_string(weights.size()));

    const auto& joint_arr = as_array(require(s, "joint"), "model.joint");
    if (joint_arr.size() != theta.size())
      throw SchemaError("model.joint", "expected " + std::to_string(theta.size()) +
                                           " theta slices, got " +
                                           std::to_string(joint_arr.size()));
    std::vector<double> joint;
    joint.reserve(theta.size() * pred.size() * obs.size());
    for (std::size_t i = 0; i < joint_arr.size(); ++i) {
      const std::string ikey = "model.joint[" + std::to_string(i) + "]";
      const auto& slice = as_array(joint_arr[i], ikey);
      if (slice.size() != pred.size())
        throw SchemaError(ikey, "expected " + std::to_string(pred.size()) +
                                    " prediction rows, got " +
                                    std::to_string(slice.size()));
      for (std::size_t j = 0; j < slice.size(); ++j) {
        const std::string jkey = ikey + "[" + std::to_string(j) + "]";
        const auto row = as_number_vector(slice[j], jkey);
        if (row.size() != obs.size())
          throw SchemaError(jkey, "expected " + std::to_string(obs.size()) +
                                      " observation entries, got " +
                                      std::to_string(row.size()));
        joint.insert(joint.end(), row.begin(), row.end());
      }
    }
    return FiniteModel(ParameterSpace::finite_grid(std::move(theta)),
                       Prior::weights(std::move(weights)), std::move(obs),
                       std::move(pred), std::move(joint));
  }

  auto int_field = [&](const char* key) {
    const auto v = as_integer(require(s, key), std::string("model.") + key);
    if (v < 1 || v > 1'000'000'000)
      throw SchemaError(std::string("model.") + key, "expected an integer >= 1");
    return static_cast<int>(v);
  };
  auto num_field = [&](const char* key) {
    return as_number(require(s, key), std::string("model.") + key);
  };

  if (kind == "beta_bernoulli") {
    reject_unknown_keys(s, {"kind", "alpha", "beta", "n_obs", "n_pred"});
    return ConjugateModel(BetaBernoulli{num_field("alpha"), num_field("beta"),
                                        int_field("n_obs"), int_field("n_pred")});
  }
  if (kind == "normal_known_var") {
    reject_unknown_keys(s, {"kind", "mu0", "tau0_sq", "sigma_sq", "n_obs", "n_pred"});
    return ConjugateModel(NormalKnownVar{num_field("mu0"), num_field("tau0_sq"),
                                         num_field("sigma_sq"), int_field("n_obs"),
                                         int_field("n_pred")});
  }
  if (kind == "gamma_poisson") {
    reject_unknown_keys(s, {"kind", "shape", "rate", "n_obs", "n_pred"});
    return ConjugateModel(GammaPoisson{num_field("shape"), num_field("rate"),
                                       int_field("n_obs"), int_field("n_pred")});
  }
  throw SchemaError("model.kind", "unknown model kind `" + kind + "`");
}

inline LossSpec build_loss(const Section& s, const Model& model) {
  const std::string& form = as_string(require(s, "form"), "loss.form");

  if (form == "squared" || form == "absolute") {
    reject_unknown_keys(s, {"form"});
    return form == "squared" ? LossSpec::squared() : LossSpec::absolute();
  }
  if (form == "zero_one") {
    reject_unknown_keys(s, {"form", "band"});
    double band = 0.0;
    if (const Value* b = s.find("band")) {
      band = as_number(*b, "loss.band");
      if (band < 0.0) throw SchemaError("loss.band", "band must be >= 0");
    }
    return LossSpec::zero_one(band);
  }
  if (form == "table") {
    reject_unknown_keys(s, {"form", "matrix"});
    const auto* fm = std::get_if<FiniteModel>(&model);
    if (!fm)
      throw SchemaError("loss.form",
                        "table losses require a finite model prediction space");
    const auto& rows = as_array(require(s, "matrix"), "loss.matrix");
    if (rows.size() != fm->n_pred())
      throw SchemaError("loss.matrix",
                        "expected " + std::to_string(fm->n_pred()) + " rows, got " +
                            std::to_string(rows.size()));
    std::vector<std::vector<double>> matrix;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string rkey = "loss.matrix[" + std::to_string(r) + "]";
      auto row = as_number_vector(rows[r], rkey);
      if (row.size() != fm->n_pred())
        throw SchemaError(rkey, "expected " + std::to_string(fm->n_pred()) +
                                    " columns, got " + std::to_string(row.size()));
      for (std::size_t c = 0; c < row.size(); ++c)
        if (!(row[c] >= 0.0))
          throw SchemaError(rkey + "[" + std::to_string(c) + "]",
                            "losses must be >= 0");
      matrix.push_back(std::move(row));
    }
    return LossSpec::table(std::move(matrix), fm->pred_space());
  }
  throw SchemaError("loss.form", "unknown loss form `" + form + "`");
}

inline ExperimentConfig build_experiment(const Section& s) {
  reject_unknown_keys(s, {"seed", "mc_samples", "tol", "cap", "theta_grid"});
  ExperimentConfig cfg;
  if (const Value* v = s.find("seed")) {
    const auto x = as_integer(*v, "experiment.seed");
    if (x < 0) throw SchemaError("experiment.seed", "expected an integer >= 0");
    cfg.seed = static_cast<std::uint64_t>(x);
  }
  if (const Value* v = s.find("mc_samples")) {
    const auto x = as_integer(*v, "experiment.mc_samples");
    if (x < 1) throw SchemaError("experiment.mc_samples", "expected an integer >= 1");
    cfg.mc_samples = static_cast<std::size_t>(x);
  }
  if (const Value* v = s.find("tol")) {
    const double x = as_number(*v, "experiment.tol");
    if (!(x > 0.0)) throw SchemaError("experiment.tol", "expected a number > 0");
    cfg.tol = x;
  }
  if (const Value* v = s.find("cap")) {
    const auto x = as_integer(*v, "experiment.cap");
    if (x < 1) throw SchemaError("experiment.cap", "expected an integer >= 1");
    cfg.cap = static_cast<std::uint64_t>(x);
  }
  if (const Value* v = s.find("theta_grid"))
    cfg.theta_grid = as_number_vector(*v, "experiment.theta_grid");
  return cfg;
}

}  // namespace specfmt

/// Parses a document, checks it against the schema, and validates the model.
/// Throws ParseError / SchemaError / ModelInvalidError.
inline SpecDocument parse_spec(std::string_view text) {
  specfmt::Parser parser(text);
  const specfmt::Document doc = parser.parse();

  for (const auto& s : doc.sections) {
    if (s.name.empty()) {
      specfmt::reject_unknown_keys(s, {"format_version"});
    } else if (s.name != "model" && s.name != "loss" && s.name != "experiment") {
      throw SchemaError(s.name, "unknown stanza");
    }
  }

  const auto& top = doc.sections.front();
  const auto version =
      specfmt::as_integer(specfmt::require(top, "format_version"), "format_version");
  if (version != 1)
    throw SchemaError("format_version",
                      "unsupported format version " + std::to_string(version));

  const specfmt::Section* model_s = doc.find("model");
  if (!model_s) throw SchemaError("model", "missing [model] stanza");
  const specfmt::Section* loss_s = doc.find("loss");
  if (!loss_s) throw SchemaError("loss", "missing [loss] stanza");

  SpecDocument out;
  out.format_version = static_cast<int>(version);
  out.model = specfmt::build_model(*model_s);
  out.loss = specfmt::build_loss(*loss_s, out.model);
  if (const specfmt::Section* exp_s = doc.find("experiment"))
    out.experiment = specfmt::build_experiment(*exp_s);

  const ValidationReport report = validate_model(out.model);
  if (!report.ok())
    throw ModelInvalidError("model fails validation:\n" + report.to_string());
  return out;
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

namespace specfmt {

/// Shortest-faithful decimal: 17 significant digits round-trip doubles
/// exactly, and %g drops trailing zeros deterministically.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_point(const Point& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += format_double(p[i]);
  }
  return out + "]";
}

inline std::string format_point_list(const std::vector<Point>& pts) {
  std::string out = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ", ";
    out += format_point(pts[i]);
  }
  return out + "]";
}

inline std::string format_number_list(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out + "]";
}

}  // namespace specfmt

/// Canonical text form: stanzas and keys in schema order, numbers printed
/// with 17 significant digits so parse-serialize round-trips are bit-faithful.
inline std::string serialize_spec(const SpecDocument& doc) {
  using specfmt::format_double;
  if (doc.loss.scale() != 1.0)
    throw std::invalid_argument(
        "serialize_spec: scaled losses have no document representation");

  std::string out = "format_version = " + std::to_string(doc.format_version) + "\n\n";

  out += "[model]\n";
  if (const auto* fm = std::get_if<FiniteModel>(&doc.model)) {
    out += "kind = \"finite\"\n";
    out += "theta_points = " +
           specfmt::format_point_list(fm->parameter_space().points()) + "\n";
    out += "prior_weights = " +
           specfmt::format_number_list(fm->prior().weight_values()) + "\n";
    out += "obs_space = " + specfmt::format_point_list(fm->obs_space()) + "\n";
    out += "pred_space = " + specfmt::format_point_list(fm->pred_space()) + "\n";
    out += "joint = [";
    for (std::size_t i = 0; i < fm->n_theta(); ++i) {
      if (i) out += ", ";
      out += "[";
      for (std::size_t j = 0; j < fm->n_pred(); ++j) {
        if (j) out += ", ";
        out += "[";
        for (std::size_t k = 0; k < fm->n_obs(); ++k) {
          if (k) out += ", ";
          out += format_double(fm->joint(i, j, k));
        }
        out += "]";
      }
      out += "]";
    }
    out += "]\n";
  } else {
    const auto& cm = std::get<ConjugateModel>(doc.model);
    if (const auto* bb = cm.as<BetaBernoulli>()) {
      out += "kind = \"beta_bernoulli\"\n";
      out += "alpha = " + format_double(bb->alpha) + "\n";
      out += "beta = " + format_double(bb->beta) + "\n";
      out += "n_obs = " + std::to_string(bb->n_obs) + "\n";
      out += "n_pred = " + std::to_string(bb->n_pred) + "\n";
    } else if (const auto* nn = cm.as<NormalKnownVar>()) {
      out += "kind = \"normal_known_var\"\n";
      out += "mu0 = " + format_double(nn->mu0) + "\n";
      out += "tau0_sq = " + format_double(nn->tau0_sq) + "\n";
      out += "sigma_sq = " + format_double(nn->sigma_sq) + "\n";
      out += "n_obs = " + std::to_string(nn->n_obs) + "\n";
      out += "n_pred = " + std::to_string(nn->n_pred) + "\n";
    } else {
      const auto* gp = cm.as<GammaPoisson>();
      out += "kind = \"gamma_poisson\"\n";
      out += "shape = " + format_double(gp->shape) + "\n";
      out += "rate = " + format_double(gp->rate) + "\n";
      out += "n_obs = " + std::to_string(gp->n_obs) + "\n";
      out += "n_pred = " + std::to_string(gp->n_pred) + "\n";
    }
  }

  out += "\n[loss]\n";
  switch (doc.loss.form()) {
    case LossSpec::Form::Squared: out += "form = \"squared\"\n"; break;
    case LossSpec::Form::Absolute: out += "form = \"absolute\"\n"; break;
    case LossSpec::Form::ZeroOne:
      out += "form = \"zero_one\"\n";
      out += "band = " + format_double(doc.loss.band()) + "\n";
      break;
    case LossSpec::Form::Table: {
      out += "form = \"table\"\n";
      out += "matrix = [";
      for (std::size_t r = 0; r < doc.loss.matrix().size(); ++r) {
        if (r) out += ", ";
        out += specfmt::format_number_list(doc.loss.matrix()[r]);
      }
      out += "]\n";
      break;
    }
  }

  if (!doc.experiment.empty()) {
    out += "\n[experiment]\n";
    const auto& e = doc.experiment;
    if (e.seed) out += "seed = " + std::to_string(*e.seed) + "\n";
    if (e.mc_samples) out += "mc_samples = " + std::to_string(*e.mc_samples) + "\n";
    if (e.tol) out += "tol = " + format_double(*e.tol) + "\n";
    if (e.cap) out += "cap = " + std::to_string(*e.cap) + "\n";
    if (e.theta_grid)
      out += "theta_grid = " + specfmt::format_number_list(*e.theta_grid) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural equality (round-trip law)
// ---------------------------------------------------------------------------

inline bool structurally_equal(const LossSpec& a, const LossSpec& b) {
  return a.form() == b.form() && a.band() == b.band() && a.scale() == b.scale() &&
         a.matrix() == b.matrix() && a.domain() == b.domain();
}

inline bool structurally_equal(const Model& a, const Model& b) {
  if (const auto* fa = std::get_if<FiniteModel>(&a)) {
    const auto* fb = std::get_if<FiniteModel>(&b);
    if (!fb) return false;
    return fa->parameter_space().points() == fb->parameter_space().points() &&
           fa->prior().weight_values() == fb->prior().weight_values() &&
           fa->obs_space() == fb->obs_space() && fa->pred_space() == fb->pred_space() &&
           fa->joint_table() == fb->joint_table();
  }
  const auto& ca = std::get<ConjugateModel>(a);
  const auto* cb = std::get_if<ConjugateModel>(&b);
  if (!cb) return false;
  if (const auto* x = ca.as<BetaBernoulli>()) {
    const auto* y = cb->as<BetaBernoulli>();
    return y && x->alpha == y->alpha && x->beta == y->beta && x->n_obs == y->n_obs &&
           x->n_pred == y->n_pred;
  }
  if (const auto* x = ca.as<NormalKnownVar>()) {
    const auto* y = cb->as<NormalKnownVar>();
    return y && x->mu0 == y->mu0 && x->tau0_sq == y->tau0_sq &&
           x->sigma_sq == y->sigma_sq && x->n_obs == y->n_obs && x->n_pred == y->n_pred;
  }
  const auto* x = ca.as<GammaPoisson>();
  const auto* y = cb->as<GammaPoisson>();
  return y && x->shape == y->shape && x->rate == y->rate && x->n_obs == y->n_obs &&
         x->n_pred == y->n_pred;
}

inline bool structurally_equal(const SpecDocument& a, const SpecDocument& b) {
  return a.format_version == b.format_version && structurally_equal(a.model, b.model) &&
         structurally_equal(a.loss, b.loss) && a.experiment.seed == b.experiment.seed &&
         a.experiment.mc_samples == b.experiment.mc_samples &&
         a.experiment.tol == b.experiment.tol && a.experiment.cap == b.experiment.cap &&
         a.experiment.theta_grid == b.experiment.theta_grid;
}

// ---------------------------------------------------------------------------
// Rule files
// ---------------------------------------------------------------------------

/// Parses a rule document against a model. The [rule] stanza carries exactly
/// one of:
///   pred_indices = [..]   prediction-space index per observation (finite)
///   outputs      = [..]   one predicted point per observation
///   tag          = "predictive_mean" | "predictive_median" | "predictive_mode"
/// Shape problems throw RuleMismatchError.
inline PredictionRule parse_rule_file(std::string_view text, const Model& model) {
  specfmt::Parser parser(text);
  const specfmt::Document doc = parser.parse();
  const specfmt::Section* rule_s = doc.find("rule");
  if (!rule_s) throw SchemaError("rule", "missing [rule] stanza");
  for (const auto& s : doc.sections)
    if (!s.name.empty() && s.name != "rule") throw SchemaError(s.name, "unknown stanza");
  specfmt::reject_unknown_keys(doc.sections.front(), {"format_version"});
  specfmt::reject_unknown_keys(*rule_s, {"pred_indices", "outputs", "tag"});

  const specfmt::Value* idx = rule_s->find("pred_indices");
  const specfmt::Value* outs = rule_s->find("outputs");
  const specfmt::Value* tag = rule_s->find("tag");
  if ((idx != nullptr) + (outs != nullptr) + (tag != nullptr) != 1)
    throw SchemaError("rule",
                      "exactly one of pred_indices, outputs, tag is required");

  if (tag) {
    const std::string& t = specfmt::as_string(*tag, "rule.tag");
    if (t == "predictive_mean")
      return PredictionRule::closed_form(PredictionRule::Tag::PredictiveMean);
    if (t == "predictive_median")
      return PredictionRule::closed_form(PredictionRule::Tag::PredictiveMedian);
    if (t == "predictive_mode")
      return PredictionRule::closed_form(PredictionRule::Tag::PredictiveMode);
    throw SchemaError("rule.tag", "unknown tag `" + t + "`");
  }

  const auto* fm = std::get_if<FiniteModel>(&model);

  if (idx) {
    if (!fm)
      throw RuleMismatchError(
          "pred_indices rules require a finite model prediction space");
    const auto& arr = specfmt::as_array(*idx, "rule.pred_indices");
    if (arr.size() != fm->n_obs())
      throw RuleMismatchError("rule covers " + std::to_string(arr.size()) +
                              " observations, model has " +
                              std::to_string(fm->n_obs()));
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto v = specfmt::as_integer(arr[i],
                                         "rule.pred_indices[" + std::to_string(i) + "]");
      if (v < 0 || static_cast<std::size_t>(v) >= fm->n_pred())
        throw RuleMismatchError("prediction index " + std::to_string(v) +
                                " out of range at observation " + std::to_string(i));
      indices.push_back(static_cast<std::size_t>(v));
    }
    return PredictionRule::index_table(std::move(indices));
  }

  const auto points = specfmt::as_point_list(*outs, "rule.outputs");
  if (fm) {
    if (points.size() != fm->n_obs())
      throw RuleMismatchError("rule covers " + std::to_string(points.size()) +
                              " observations, model has " +
                              std::to_string(fm->n_obs()));
    std::vector<std::size_t> indices;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto p = fm->pred_index(points[i]);
      if (!p)
        throw RuleMismatchError("output " + point_to_string(points[i]) +
                                " at observation " + std::to_string(i) +
                                " is not in the prediction space");
      indices.push_back(*p);
    }
    return PredictionRule::index_table(std::move(indices));
  }

  const auto& cm = std::get<ConjugateModel>(model);
  if (!cm.finite_obs_summaries())
    throw RuleMismatchError(
        "table rules cannot be total over this family's unbounded observations");
  const std::size_t expected = static_cast<std::size_t>(cm.n_obs()) + 1;
  if (points.size() != expected)
    throw RuleMismatchError("rule covers " + std::to_string(points.size()) +
                            " observation summaries, expected " +
                            std::to_string(expected));
  for (const auto& p : points)
    if (p.size() != 1)
      throw RuleMismatchError("conjugate rule outputs must be scalars");
  return PredictionRule::value_table(points);
}

}  // namespace predrisk
