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

#include "patrol/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <memory>

#include "patrol/affect.hpp"
#include "patrol/error.hpp"
#include "patrol/evalkit.hpp"
#include "patrol/http.hpp"
#include "patrol/io.hpp"
#include "patrol/triage.hpp"

#ifndef PATROL_DATA_DIR
#define PATROL_DATA_DIR "data"
#endif

namespace patrol {

using nlohmann::json;

CliConfig CliConfig::defaults() {
  CliConfig c;
  c.lexicons = std::filesystem::path(PATROL_DATA_DIR) / "lexicons";
  return c;
}

std::filesystem::path CliConfig::rules_path() const { return rules.empty() ? lexicons / "rules.tsv" : rules; }

json CliConfig::to_json() const {
  return {{"lexicons", lexicons.string()},
          {"rules", rules.string()},
          {"model", model.string()},
          {"data_dir", data_dir.string()},
          {"corpus", corpus.string()},
          {"threshold", normalizer.threshold},
          {"strip_prolongations", normalizer.strip_prolongations},
          {"anchor_first_letter", normalizer.anchor_first_letter},
          {"length_scaled", normalizer.length_scaled},
          {"max_threshold", normalizer.max_threshold},
          {"main", main_feature_name(features.main)},
          {"weighting", weighting_name(features.weighting)},
          {"raw_tf", features.raw_tf},
          {"l2_normalize", features.l2_normalize},
          {"C", hyper.C},
          {"tolerance", hyper.tolerance},
          {"max_epochs", hyper.max_epochs},
          {"bias_term", hyper.bias_term},
          {"fusion", fusion.to_json()},
          {"dedup", dedup_mode_name(dedup)},
          {"doubtful_is_harmful", doubtful_is_harmful},
          {"k", k},
          {"seed", seed},
          {"stratified", stratified},
          {"pooled", pooled},
          {"host", host},
          {"port", port},
          {"top", top}};
}

void CliConfig::merge(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "lexicons") lexicons = v.get<std::string>();
      else if (key == "rules") rules = v.get<std::string>();
      else if (key == "model") model = v.get<std::string>();
      else if (key == "data_dir") data_dir = v.get<std::string>();
      else if (key == "corpus") corpus = v.get<std::string>();
      else if (key == "threshold") normalizer.threshold = v.get<int>();
      else if (key == "strip_prolongations") normalizer.strip_prolongations = v.get<bool>();
      else if (key == "anchor_first_letter") normalizer.anchor_first_letter = v.get<bool>();
      else if (key == "length_scaled") normalizer.length_scaled = v.get<bool>();
      else if (key == "max_threshold") normalizer.max_threshold = v.get<int>();
      else if (key == "main") features.main = parse_main_feature(v.get<std::string>());
      else if (key == "weighting") features.weighting = parse_weighting(v.get<std::string>());
      else if (key == "raw_tf") features.raw_tf = v.get<bool>();
      else if (key == "l2_normalize") features.l2_normalize = v.get<bool>();
      else if (key == "C") hyper.C = v.get<double>();
      else if (key == "tolerance") hyper.tolerance = v.get<double>();
      else if (key == "max_epochs") hyper.max_epochs = v.get<int>();
      else if (key == "bias_term") hyper.bias_term = v.get<double>();
      else if (key == "fusion") fusion = FusionMatrix::from_json(v);
      else if (key == "dedup") dedup = parse_dedup_mode(v.get<std::string>());
      else if (key == "doubtful_is_harmful") doubtful_is_harmful = v.get<bool>();
      else if (key == "k") k = v.get<int>();
      else if (key == "seed") seed = v.get<std::uint64_t>();
      else if (key == "stratified") stratified = v.get<bool>();
      else if (key == "pooled") pooled = v.get<bool>();
      else if (key == "host") host = v.get<std::string>();
      else if (key == "port") port = v.get<int>();
      else if (key == "top") top = v.get<std::size_t>();
      else throw ValidationError("unknown config key '" + key + "'");
    } catch (const json::exception& ex) {
      throw ValidationError("config key '" + key + "': " + ex.what());
    }
  }
  normalizer.validate();
  hyper.validate();
}

namespace {

json affect_to_json(const std::string& id, const AffectResult& r) {
  json emotemes = json::array();
  for (const auto& e : r.emotemes) {
    emotemes.push_back({{"surface", e.surface},
                        {"class", emoteme_class_name(e.cls)},
                        {"source", emoteme_source_name(e.source)},
                        {"start", e.span.start},
                        {"end", e.span.end}});
  }
  json expressions = json::array();
  for (const auto& x : r.expressions) {
    json j = {{"lemma", x.lemma}, {"emotion", emotion_name(x.emotion)}, {"start", x.span.start},
              {"end", x.span.end}, {"shifted", x.shifted}};
    if (x.shifted) {
      j["original"] = emotion_name(*x.original);
      j["cvs"] = x.cvs_pattern;
    }
    expressions.push_back(j);
  }
  json emoticons = json::array();
  for (const auto& e : r.emoticons) {
    emoticons.push_back({{"raw", e.raw}, {"emotions", format_emotion_list(e.analysis.emotions)},
                         {"start", e.span.start}, {"end", e.span.end}});
  }
  json spans = json::array();
  for (const auto& s : r.spans()) spans.push_back(to_json(s));
  return {{"id", id},
          {"emotive", r.emotive},
          {"emotive_value", r.emotive_value},
          {"emotions", format_emotion_list(r.emotions())},
          {"emotemes", emotemes},
          {"expressions", expressions},
          {"emoticons", emoticons},
          {"spans", spans}};
}

std::vector<std::string> read_words(const std::vector<std::string>& args, std::istream& in) {
  if (!args.empty()) return args;
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto w = trim(line);
    if (!w.empty()) words.emplace_back(w);
  }
  return words;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

struct Options {
  std::string config_path;
  std::optional<std::string> lexicons, model, main, weighting, rules, data_dir, corpus, dedup, host;
  std::optional<int> threshold, k, port;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> top;
  bool pretty = false;
  bool pooled = false;
  std::vector<std::string> inputs;
  std::string text;
};

CliConfig resolve(const Options& o) {
  CliConfig c = CliConfig::defaults();
  if (!o.config_path.empty()) {
    const std::string text = read_file(o.config_path, "config file");
    try {
      c.merge(json::parse(text));
    } catch (const json::parse_error& ex) {
      throw ValidationError(std::string("config file is not valid JSON: ") + ex.what());
    }
  }
  json flags = json::object();
  if (o.lexicons) flags["lexicons"] = *o.lexicons;
  if (o.model) flags["model"] = *o.model;
  if (o.main) flags["main"] = *o.main;
  if (o.weighting) flags["weighting"] = *o.weighting;
  if (o.rules) flags["rules"] = *o.rules;
  if (o.data_dir) flags["data_dir"] = *o.data_dir;
  if (o.corpus) flags["corpus"] = *o.corpus;
  if (o.dedup) flags["dedup"] = *o.dedup;
  if (o.host) flags["host"] = *o.host;
  if (o.threshold) flags["threshold"] = *o.threshold;
  if (o.k) flags["k"] = *o.k;
  if (o.port) flags["port"] = *o.port;
  if (o.seed) flags["seed"] = *o.seed;
  if (o.top) flags["top"] = *o.top;
  if (o.pooled) flags["pooled"] = true;
  c.merge(flags);
  c.hyper.seed = c.seed;
  return c;
}

Pipeline make_pipeline(const CliConfig& c) { return Pipeline(load_lexicons(c.lexicons), c.normalizer); }

Dataset input_dataset(const Options& o) {
  if (o.inputs.size() != 1) throw ValidationError("expected exactly one input file");
  return load_dataset(o.inputs.front());
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const CliConfig c = resolve(o);
  const Pipeline pipeline = make_pipeline(c);
  const Dataset data = input_dataset(o);
  const SvmModel model = train_svm(data, pipeline, c.features, c.hyper, c.doubtful_is_harmful);
  save_model(model, c.model);
  err << "trained " << c.features.name() << " on " << data.size() << " entries: objective "
      << model.svm.meta.objective << " after " << model.svm.meta.epochs << " epochs"
      << (model.svm.meta.converged ? "" : " (not converged)") << "\n";
  out << json{{"model", c.model.string()},
              {"features", c.features.name()},
              {"entries", data.size()},
              {"vocabulary_size", model.vocab.size()},
              {"objective", model.svm.meta.objective},
              {"epochs", model.svm.meta.epochs},
              {"converged", model.svm.meta.converged}}
             .dump()
      << "\n";
  return 0;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
  const CliConfig c = resolve(o);
  const Dataset data = input_dataset(o);
  const Pipeline pipeline = make_pipeline(c);
  const SvmModel model = load_model(c.model);
  const RulePatternSet rules = RulePatternSet::load(c.rules_path());
  for (const auto& e : data.entries()) {
    const Classification r = classify_entry(e, model, rules, pipeline, c.fusion);
    json triggers = json::array();
    for (const auto& t : r.rules.triggers) {
      triggers.push_back({{"rule_id", t.rule_id}, {"start", t.span.start}, {"end", t.span.end}});
    }
    out << json{{"id", e.id},
                {"final", label_code(r.final)},
                {"svm_score", r.svm.score},
                {"svm_harmful", r.svm.harmful},
                {"rules", label_code(r.rules.label)},
                {"triggers", triggers}}
               .dump()
        << "\n";
    if (o.pretty) err << pad(e.id, 12) << " " << label_code(r.final) << "  " << r.svm.score << "\n";
  }
  return 0;
}

int cmd_rank(const Options& o, std::ostream& out, std::ostream& err) {
  const CliConfig c = resolve(o);
  const Dataset data = input_dataset(o);
  const Pipeline pipeline = make_pipeline(c);
  std::vector<std::vector<Token>> background;
  for (const auto& e : data.entries()) background.push_back(pipeline.tokenize(e.text));
  if (!c.corpus.empty()) {
    for (const auto& e : load_dataset(c.corpus).entries()) background.push_back(pipeline.tokenize(e.text));
  }
  const CooccurrenceTable table = build_cooccurrence(background, pipeline, c.dedup);
  const auto reports = rank_entries(data, table, pipeline);
  for (const auto& r : reports) out << to_json(r).dump() << "\n";
  if (o.pretty) {
    err << "rank  entry         total\n";
    for (std::size_t i = 0; i < reports.size() && i < c.top; ++i) {
      char line[96];
      std::snprintf(line, sizeof line, "%4zu  %-12s %8.3f\n", i + 1, reports[i].entry_id.c_str(), reports[i].total);
      err << line;
    }
  }
  return 0;
}

int cmd_affect(const Options& o, std::ostream& out, std::ostream& err) {
  const CliConfig c = resolve(o);
  const Pipeline pipeline = make_pipeline(c);
  std::vector<std::pair<std::string, std::string>> items;
  if (!o.text.empty()) {
    items.emplace_back("text", o.text);
  } else {
    for (const auto& e : input_dataset(o).entries()) items.emplace_back(e.id, e.text);
  }
  for (const auto& [id, text] : items) {
    const AffectResult r = pipeline.affect().analyze(text, pipeline.tokenize(text));
    out << affect_to_json(id, r).dump() << "\n";
    if (o.pretty) {
      err << pad(id, 12) << (r.emotive ? " emotive " : " neutral ") << r.emotive_value << "  "
          << format_emotion_list(r.emotions()) << "\n";
    }
  }
  return 0;
}

int cmd_normalize(const Options& o, std::ostream& out, std::ostream& err) {
  const CliConfig c = resolve(o);
  const LexiconBundle bundle = load_lexicons(c.lexicons);
  const AnalyzerConfig analyzer = AnalyzerConfig::from_bundle(bundle);
  for (const auto& w : read_words(o.inputs, std::cin)) {
    const auto m = match_canonical(w, bundle, c.normalizer, analyzer.roman());
    json j = {{"input", w}};
    if (m) {
      j["canonical"] = m->canonical;
      j["distance"] = m->distance;
      j["rule_trace"] = m->rule_trace;
    } else {
      j["canonical"] = nullptr;
    }
    out << j.dump() << "\n";
    if (o.pretty) err << pad(w, 16) << " -> " << (m ? m->canonical : "-") << "\n";
  }
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const CliConfig c = resolve(o);
  const Dataset data = input_dataset(o);
  const Pipeline pipeline = make_pipeline(c);
  CvOptions cv;
  cv.k = c.k;
  cv.seed = c.seed;
  cv.stratified = c.stratified;
  cv.pooled = c.pooled;
  cv.doubtful_is_harmful = c.doubtful_is_harmful;
  cv.hyper = c.hyper;
  std::vector<FeatureConfig> grid = FeatureConfig::grid();
  for (auto& g : grid) {
    g.raw_tf = c.features.raw_tf;
    g.l2_normalize = c.features.l2_normalize;
  }
  const GridResult result = cross_validate(data, pipeline, grid, cv);
  for (const auto& cell : result.cells) out << to_json(cell).dump() << "\n";
  err << format_grid(result);
  return 0;
}

int cmd_serve(const Options& o, std::ostream& /*out*/, std::ostream& err) {
  const CliConfig c = resolve(o);
  auto pipeline = std::make_shared<const Pipeline>(make_pipeline(c));
  Dataset base = c.corpus.empty() ? Dataset() : load_dataset(c.corpus);
  std::optional<SvmModel> initial;
  if (std::filesystem::exists(c.model)) initial = load_model(c.model);
  ServiceConfig sc;
  sc.data_dir = c.data_dir;
  sc.features = c.features;
  sc.hyper = c.hyper;
  sc.fusion = c.fusion;
  sc.dedup = c.dedup;
  sc.doubtful_is_harmful = c.doubtful_is_harmful;
  TriageService service(pipeline, RulePatternSet::load(c.rules_path()), std::move(base), sc, system_clock_now,
                        std::move(initial));
  HttpServer server(service);
  err << "serving on http://" << c.host << ":" << c.port << " (data in " << c.data_dir.string() << ")\n";
  server.listen(c.host, c.port);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyber-bullying triage toolkit", "patrol"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config_path, "JSON config file");
  app.add_option("--lexicons", o.lexicons, "lexicon directory");
  app.add_option("--model", o.model, "model file");
  app.add_option("--threshold", o.threshold, "edit-distance threshold");
  app.add_option("--main", o.main, "main feature: wordpos|word|pos");
  app.add_option("--weighting", o.weighting, "weighting: occ|rel|idf|tfidf");
  app.add_option("--k", o.k, "cross-validation folds");
  app.add_option("--seed", o.seed, "random seed");
  app.add_flag("--pretty", o.pretty, "human-readable table on stderr");
  app.add_option("--rules", o.rules, "rules.tsv");
  app.add_option("--dedup", o.dedup, "co-occurrence mode: raw|dedup|similarity");
  app.add_option("--corpus", o.corpus, "base corpus (serve) or background corpus (rank)");
  app.add_option("--top", o.top, "rows in the --pretty ranking table");

  int (*handler)(const Options&, std::ostream&, std::ostream&) = nullptr;
  const auto sub = [&](const char* name, const char* desc, auto fn) {
    auto* s = app.add_subcommand(name, desc);
    s->callback([&handler, fn] { handler = fn; });
    return s;
  };
  sub("train", "train a model on a labeled corpus", cmd_train)->add_option("corpus", o.inputs)->required();
  sub("classify", "label entries with a trained model and the rules", cmd_classify)
      ->add_option("entries", o.inputs)
      ->required();
  sub("rank", "rank entries by harmfulness", cmd_rank)->add_option("entries", o.inputs)->required();
  auto* affect = sub("affect", "emotemes, expressions and emotions per entry", cmd_affect);
  affect->add_option("entries", o.inputs);
  affect->add_option("--text", o.text, "analyze one string instead of a file");
  sub("normalize", "map words to canonical vulgarities (stdin if none given)", cmd_normalize)
      ->add_option("words", o.inputs);
  auto* eval = sub("eval", "12-config cross-validation grid", cmd_eval);
  eval->add_option("corpus", o.inputs)->required();
  eval->add_flag("--pooled", o.pooled, "pool counts over folds instead of averaging");
  auto* serve = sub("serve", "run the triage HTTP service", cmd_serve);
  serve->add_option("--data-dir", o.data_dir, "event log and model directory");
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--port", o.port, "port");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n\n" << app.help();
    return 1;
  }
  if (!handler) {
    err << app.help();
    return 1;
  }
  try {
    return handler(o, out, err);
  } catch (const IoError& ex) {
    err << "io error: " << ex.what() << "\n";
    return 2;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace patrol
