// Copyright 2026 The Patrol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "patrol/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "patrol/error.hpp"
#include "patrol/io.hpp"

namespace patrol {

void SvmHyper::validate() const {
  if (!(C > 0) || !std::isfinite(C)) throw ValidationError("C must be a positive finite number");
  if (!(tolerance > 0)) throw ValidationError("tolerance must be positive");
  if (max_epochs < 1) throw ValidationError("max_epochs must be at least 1");
  if (!(bias_term >= 0) || !std::isfinite(bias_term)) throw ValidationError("bias_term must be non-negative");
}

namespace {

double primal_objective(const std::vector<double>& w, double wb, const std::vector<FeatureVector>& xs,
                        const std::vector<int>& ys, const SvmHyper& h) {
  double reg = wb * wb;
  for (double v : w) reg += v * v;
  double loss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    loss += std::max(0.0, 1.0 - ys[i] * (xs[i].dot(w) + wb * h.bias_term));
  }
  return 0.5 * reg + h.C * loss;
}

}  // namespace

LinearSvm train_linear_svm(const std::vector<FeatureVector>& xs, const std::vector<int>& labels, std::size_t dim,
                           const SvmHyper& hyper) {
  hyper.validate();
  if (xs.size() != labels.size()) throw ValidationError("vectors and labels differ in length");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y == 1) pos = true;
    else if (y == -1) neg = true;
    else throw ValidationError("labels must be +1 or -1");
  }
  if (!pos || !neg) throw ValidationError("training data needs both classes");
  for (const auto& x : xs) {
    for (const auto& [i, v] : x.items) {
      if (i >= dim) throw ValidationError("feature index out of range");
      if (!std::isfinite(v)) throw ValidationError("non-finite feature value");
    }
  }

  const std::size_t n = xs.size();
  const double bt = hyper.bias_term;
  std::vector<double> w(dim, 0.0);
  double wb = 0.0;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qii(n);
  for (std::size_t i = 0; i < n; ++i) qii[i] = xs[i].squared_norm() + bt * bt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(hyper.seed);

  const auto dual = [&] {
    double norm = wb * wb;
    for (double v : w) norm += v * v;
    return std::accumulate(alpha.begin(), alpha.end(), 0.0) - 0.5 * norm;
  };

  LinearSvm out;
  out.hyper = hyper;
  double previous = 0.0;
  for (int epoch = 1; epoch <= hyper.max_epochs; ++epoch) {
    stable_shuffle(order, rng);
    for (std::size_t i : order) {
      const double y = labels[i];
      const double g = y * (xs[i].dot(w) + wb * bt) - 1.0;
      double next;
      if (qii[i] > 0) {
        next = std::clamp(alpha[i] - g / qii[i], 0.0, hyper.C);
      } else {
        next = g < 0 ? hyper.C : alpha[i];
      }
      const double delta = next - alpha[i];
      if (delta == 0.0) continue;
      alpha[i] = next;
      for (const auto& [j, v] : xs[i].items) w[j] += delta * y * v;
      wb += delta * y * bt;
    }
    const double current = dual();
    out.meta.epochs = epoch;
    if (current - previous < hyper.tolerance) {
      out.meta.converged = true;
      previous = current;
      break;
    }
    previous = current;
  }
  out.meta.dual_objective = previous;
  out.meta.objective = primal_objective(w, wb, xs, labels, hyper);
  out.weights = std::move(w);
  out.bias = wb * bt;
  return out;
}

SvmModel train_svm(const std::vector<std::vector<Token>>& entries, const std::vector<bool>& harmful,
                   const FeatureConfig& features, const SvmHyper& hyper) {
  if (entries.size() != harmful.size()) throw ValidationError("entries and labels differ in length");
  SvmModel m;
  m.features = features;
  m.vocab = build_vocabulary(entries, features);
  std::vector<FeatureVector> xs;
  std::vector<int> ys;
  xs.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    xs.push_back(vectorize(entries[i], m.vocab, features));
    ys.push_back(harmful[i] ? 1 : -1);
  }
  m.svm = train_linear_svm(xs, ys, m.vocab.size(), hyper);
  return m;
}

SvmModel train_svm(const Dataset& dataset, const Pipeline& pipeline, const FeatureConfig& features,
                   const SvmHyper& hyper, bool doubtful_is_harmful) {
  std::vector<std::vector<Token>> docs;
  std::vector<bool> ys;
  for (const auto& e : dataset.entries()) {
    if (!e.gold_label) continue;
    docs.push_back(pipeline.tokenize(e.text));
    ys.push_back(is_harmful(*e.gold_label, doubtful_is_harmful));
  }
  if (docs.empty()) throw ValidationError("dataset has no labeled entries");
  SvmModel m = train_svm(docs, ys, features, hyper);
  m.doubtful_is_harmful = doubtful_is_harmful;
  return m;
}

Prediction predict(const SvmModel& model, const FeatureVector& x) {
  const double s = model.svm.decision(x);
  return {s, s > 0.0};
}

Prediction predict(const SvmModel& model, const std::vector<Token>& tokens) {
  return predict(model, vectorize(tokens, model.vocab, model.features));
}

nlohmann::json model_to_json(const SvmModel& model) {
  const auto& h = model.svm.hyper;
  const auto& meta = model.svm.meta;
  return {{"format", "patrol-svm"},
          {"version", kModelFormatVersion},
          {"features", to_json(model.features)},
          {"doubtful_is_harmful", model.doubtful_is_harmful},
          {"hyper",
           {{"C", h.C}, {"tolerance", h.tolerance}, {"max_epochs", h.max_epochs}, {"bias_term", h.bias_term},
            {"seed", h.seed}}},
          {"training",
           {{"objective", meta.objective},
            {"dual_objective", meta.dual_objective},
            {"epochs", meta.epochs},
            {"converged", meta.converged}}},
          {"vocabulary", model.vocab.to_json()},
          {"weights", model.svm.weights},
          {"bias", model.svm.bias}};
}

SvmModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "patrol-svm") throw ValidationError("not a patrol model file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw ValidationError("unsupported model format version " + std::to_string(version));
    }
    SvmModel m;
    m.features = feature_config_from_json(j.at("features"));
    m.doubtful_is_harmful = j.value("doubtful_is_harmful", true);
    const auto& h = j.at("hyper");
    m.svm.hyper.C = h.at("C").get<double>();
    m.svm.hyper.tolerance = h.at("tolerance").get<double>();
    m.svm.hyper.max_epochs = h.at("max_epochs").get<int>();
    m.svm.hyper.bias_term = h.at("bias_term").get<double>();
    m.svm.hyper.seed = h.at("seed").get<std::uint64_t>();
    const auto& t = j.at("training");
    m.svm.meta.objective = t.at("objective").get<double>();
    m.svm.meta.dual_objective = t.at("dual_objective").get<double>();
    m.svm.meta.epochs = t.at("epochs").get<int>();
    m.svm.meta.converged = t.at("converged").get<bool>();
    m.vocab = Vocabulary::from_json(j.at("vocabulary"));
    m.svm.weights = j.at("weights").get<std::vector<double>>();
    m.svm.bias = j.at("bias").get<double>();
    if (m.svm.weights.size() != m.vocab.size()) throw ValidationError("weight count does not match vocabulary");
    for (double w : m.svm.weights) {
      if (!std::isfinite(w)) throw ValidationError("non-finite weight");
    }
    return m;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("malformed model: ") + ex.what());
  }
}

void save_model(const SvmModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, model_to_json(model).dump() + "\n");
}

SvmModel load_model(const std::filesystem::path& path) {
  const std::string text = read_file(path, "model");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw ParseError(std::string("model is not valid JSON: ") + ex.what());
  }
  return model_from_json(j);
}

// ---- rules ----

std::string_view rule_family_name(RuleFamily f) {
  switch (f) {
    case RuleFamily::PersonName: return "person_name";
    case RuleFamily::Initials: return "initials";
    case RuleFamily::Institution: return "institution";
    case RuleFamily::AddressPhone: return "address_phone";
    case RuleFamily::PrivateQuestion: return "private_question";
    case RuleFamily::InfoReveal: return "info_reveal";
    case RuleFamily::Quarrel: return "quarrel";
    case RuleFamily::Vulgarity: return "vulgarity";
  }
  return "person_name";
}

RuleFamily parse_rule_family(std::string_view name) {
  for (auto f : {RuleFamily::PersonName, RuleFamily::Initials, RuleFamily::Institution, RuleFamily::AddressPhone,
                 RuleFamily::PrivateQuestion, RuleFamily::InfoReveal, RuleFamily::Quarrel, RuleFamily::Vulgarity}) {
    if (rule_family_name(f) == name) return f;
  }
  throw ValidationError("unknown rule family '" + std::string(name) + "'");
}

void RulePatternSet::add(RulePattern p) {
  if (p.id.empty()) throw ValidationError("rule id must be non-empty");
  if (p.target != TriLabel::Harmful && p.target != TriLabel::Doubtful) {
    throw ValidationError("rule '" + p.id + "' must target H or D");
  }
  for (const auto& q : patterns_) {
    if (q.id == p.id) throw ConflictError("duplicate rule id '" + p.id + "'");
  }
  try {
    auto flags = std::regex::ECMAScript;
    if (p.ignore_case) flags |= std::regex::icase;
    p.regex = std::regex(p.pattern, flags);
  } catch (const std::regex_error& ex) {
    throw ValidationError("rule '" + p.id + "': bad pattern: " + ex.what());
  }
  patterns_.push_back(std::move(p));
}

RulePatternSet RulePatternSet::parse(std::string_view tsv, std::string_view origin) {
  RulePatternSet set;
  std::size_t line_no = 0;
  for (const auto& raw : split(tsv, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    const auto cols = split(line, '\t');
    const auto where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
    if (cols.size() < 4 || cols.size() > 5) throw ValidationError(where + "expected 4 or 5 columns");
    try {
      RulePattern p;
      p.id = std::string(trim(cols[0]));
      p.family = parse_rule_family(trim(cols[1]));
      p.pattern = cols[2];
      p.target = parse_label(trim(cols[3]));
      if (cols.size() == 5) {
        const auto flags = trim(cols[4]);
        if (flags == "i") p.ignore_case = true;
        else if (!flags.empty()) throw ValidationError("unknown flags '" + std::string(flags) + "'");
      }
      set.add(std::move(p));
    } catch (const ConflictError& ex) {
      throw ConflictError(where + ex.what());
    } catch (const Error& ex) {
      throw ValidationError(where + ex.what());
    }
  }
  return set;
}

RulePatternSet RulePatternSet::load(const std::filesystem::path& path) {
  return parse(read_file(path, "rule file"), path.filename().string());
}

RuleScreenResult rule_screen(std::string_view text, const std::vector<Token>& tokens, const RulePatternSet& patterns,
                             const Pipeline& pipeline) {
  RuleScreenResult r;
  const std::string s(text);
  for (const auto& p : patterns.patterns()) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), p.regex); it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      if (m.length(0) == 0) continue;
      const auto start = static_cast<std::size_t>(m.position(0));
      r.triggers.push_back({p.id, {start, start + static_cast<std::size_t>(m.length(0))}});
      r.label = max_severity(r.label, p.target);
    }
  }
  for (const auto& v : pipeline.vulgarities(tokens)) {
    r.triggers.push_back({std::string(kVulgarityRuleId), v.span});
    r.label = max_severity(r.label, TriLabel::Doubtful);
  }
  std::sort(r.triggers.begin(), r.triggers.end(), [](const RuleTrigger& a, const RuleTrigger& b) {
    return std::tie(a.span.start, a.span.end, a.rule_id) < std::tie(b.span.start, b.span.end, b.rule_id);
  });
  return r;
}

RuleScreenResult rule_screen(const Entry& entry, const RulePatternSet& patterns, const Pipeline& pipeline) {
  return rule_screen(entry.text, pipeline.tokenize(entry.text), patterns, pipeline);
}

FusionMatrix FusionMatrix::standard() {
  FusionMatrix f;
  f.set(TriLabel::Normal, false, TriLabel::Normal);
  f.set(TriLabel::Normal, true, TriLabel::Doubtful);
  f.set(TriLabel::Doubtful, false, TriLabel::Doubtful);
  f.set(TriLabel::Doubtful, true, TriLabel::Harmful);
  f.set(TriLabel::Harmful, false, TriLabel::Harmful);
  f.set(TriLabel::Harmful, true, TriLabel::Harmful);
  return f;
}

nlohmann::json FusionMatrix::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (auto l : {TriLabel::Normal, TriLabel::Doubtful, TriLabel::Harmful}) {
    j[std::string(label_code(l))] = {label_code(fuse(l, false)), label_code(fuse(l, true))};
  }
  return j;
}

FusionMatrix FusionMatrix::from_json(const nlohmann::json& j) {
  FusionMatrix f = standard();
  if (!j.is_object()) throw ValidationError("fusion matrix must be an object");
  for (const auto& [key, row] : j.items()) {
    const TriLabel rules = parse_label(key);
    if (!row.is_array() || row.size() != 2 || !row[0].is_string() || !row[1].is_string()) {
      throw ValidationError("fusion row '" + key + "' must be [label, label]");
    }
    f.set(rules, false, parse_label(row[0].get<std::string>()));
    f.set(rules, true, parse_label(row[1].get<std::string>()));
  }
  return f;
}

Classification classify_tokens(std::string_view text, const std::vector<Token>& tokens, const SvmModel& model,
                               const RulePatternSet& patterns, const Pipeline& pipeline, const FusionMatrix& fusion) {
  Classification c;
  c.svm = predict(model, tokens);
  c.rules = rule_screen(text, tokens, patterns, pipeline);
  c.final = fusion.fuse(c.rules.label, c.svm.harmful);
  return c;
}

Classification classify_entry(const Entry& entry, const SvmModel& model, const RulePatternSet& patterns,
                              const Pipeline& pipeline, const FusionMatrix& fusion) {
  return classify_tokens(entry.text, pipeline.tokenize(entry.text), model, patterns, pipeline, fusion);
}

}  // namespace patrol
