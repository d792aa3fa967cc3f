#include "hitex/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hitex/classifier.hpp"
#include "hitex/config.hpp"
#include "hitex/error.hpp"
#include "hitex/evaluation.hpp"
#include "hitex/exercise.hpp"
#include "hitex/features.hpp"
#include "hitex/service.hpp"

namespace hitex {

using nlohmann::json;

namespace {

// Thrown for missing or inconsistent flags; maps to exit code 2.
struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::vector<std::string> corpus;
  std::string kelly, svalex, lmi;
  std::vector<std::string> aux;  // kind=path
  std::string config, profile;
  std::string term, match_kind, pos, level;
  std::string model;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;

  // select
  std::optional<int> top_k;
  bool retain_suboptimal = false;
  std::string terms_file;
  std::string remote;
  std::optional<int> max_candidates;
  // train
  std::string train_file;
  std::optional<int> epochs;
  std::optional<double> lr, l2;
  // exercise
  std::string mode = "worksheet";
  std::string distractors, overrides, answer_key;
  // evaluate
  std::optional<int> items, n_options;
  std::optional<double> p_chance;
  std::vector<std::string> ratings;
  std::string system_levels, responses, item_info, metric = "nominal";
  double threshold = 2.5;
  // serve
  std::string bind;
};

void add_io(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "tsv", "md", "text"}));
  cmd->add_option("--seed", o.seed, "Random seed");
}

void add_resources(CLI::App* cmd, Options& o) {
  cmd->add_option("--corpus", o.corpus, "CoNLL-U corpus files");
  cmd->add_option("--kelly", o.kelly, "KELLY list (TSV)");
  cmd->add_option("--svalex", o.svalex, "SVALex list (TSV)");
  cmd->add_option("--lmi", o.lmi, "LMI collocations (TSV)");
  cmd->add_option("--aux", o.aux, "Auxiliary list as kind=path, repeatable");
  cmd->add_option("--model", o.model, "CEFR model JSON");
}

void add_query(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Selection config JSON file");
  cmd->add_option("--profile", o.profile, "Default profile: paper_eval, dictionary_example, permissive");
  cmd->add_option("--term", o.term, "Search term");
  cmd->add_option("--match-kind", o.match_kind, "wordform, lemma or pos_pattern");
  cmd->add_option("--pos", o.pos, "Restrict matches to this POS tag");
  cmd->add_option("--level", o.level, "Target CEFR level");
}

Lexicons load_lexicons(const Options& o) {
  Lexicons lex;
  if (!o.kelly.empty()) lex.load_kelly(o.kelly);
  if (!o.svalex.empty()) lex.load_svalex(o.svalex);
  if (!o.lmi.empty()) lex.load_lmi(o.lmi);
  for (const auto& spec : o.aux) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) throw UsageError("--aux expects kind=path, got '" + spec + "'");
    auto kind = parse_aux_kind(spec.substr(0, eq));
    if (!kind) throw UsageError("unknown aux list kind '" + spec.substr(0, eq) + "'");
    lex.load_aux(*kind, spec.substr(eq + 1));
  }
  return lex;
}

std::vector<AnnotatedSentence> load_corpus(const Options& o) {
  if (o.corpus.empty()) throw UsageError("--corpus is required");
  std::vector<AnnotatedSentence> all;
  for (const auto& path : o.corpus) {
    auto part = read_conllu_file(path);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::optional<CefrModel> load_model(const Options& o) {
  if (o.model.empty()) return std::nullopt;
  return CefrModel::load(o.model);
}

CefrLevel level_or(const Options& o, CefrLevel fallback) {
  if (o.level.empty()) return fallback;
  auto level = parse_cefr(o.level);
  if (!level) throw UsageError("unknown CEFR level '" + o.level + "'");
  return *level;
}

SelectionConfig build_config(const Options& o) {
  SelectionConfig c;
  if (!o.config.empty()) {
    json doc;
    try {
      doc = json::parse(read_text_file(o.config));
    } catch (const json::parse_error& e) {
      throw ConfigError({o.config + ": " + e.what()});
    }
    if (!o.profile.empty() && doc.is_object() && !doc.contains("profile")) doc["profile"] = o.profile;
    c = validate_config(doc);
  } else {
    c = default_config(o.profile.empty() ? std::string_view("paper_eval") : std::string_view(o.profile));
  }
  if (!o.term.empty()) c.query.term = o.term;
  if (!o.match_kind.empty()) {
    auto kind = parse_match_kind(o.match_kind);
    if (!kind) throw UsageError("unknown match kind '" + o.match_kind + "'");
    c.query.match_kind = *kind;
  }
  if (!o.pos.empty()) c.query.pos = o.pos;
  c.query.target_level = level_or(o, c.query.target_level);
  if (o.max_candidates) c.query.max_candidates = *o.max_candidates;
  if (o.top_k) c.top_k = *o.top_k;
  if (o.retain_suboptimal) c.retain_suboptimal = true;
  return c;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error("cannot write " + o.out);
  f << text;
}

std::string join_ints(const std::vector<int>& v, char sep = ',') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + std::to_string(v[i]);
  return s;
}

std::string tsv_field(std::string s) {
  for (auto& c : s) {
    if (c == '\t' || c == '\n') c = ' ';
  }
  return s;
}

std::string number(double v) { return json(v).dump(); }

// Every JSON field as a column; query and config echo ride along as comments.
std::string select_tsv(const json& j) {
  std::ostringstream out;
  out << "# status\t" << j["status"].get<std::string>() << "\n";
  out << "# query\t" << j["query"].dump() << "\n";
  out << "# config_echo\t" << j["config_echo"].dump() << "\n";
  std::vector<std::string> names;
  auto collect = [&](const json& list) {
    for (const auto& r : list) {
      for (const auto& c : r["criteria"]) {
        auto n = c["id"].get<std::string>();
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
      }
    }
  };
  collect(j["results"]);
  collect(j["rejected"]);
  out << "section\trank\tid\tgoodness\tfiltered_by";
  for (const auto& n : names) out << "\t" << n << ".value\t" << n << ".triggered\t" << n << ".evidence\t" << n << ".subscore";
  out << "\tmatch_spans\tpredicted_level\ttext\n";
  auto rows = [&](const json& list, const char* section) {
    for (const auto& r : list) {
      out << section << "\t" << (r["rank"].is_null() ? "" : r["rank"].dump()) << "\t" << tsv_field(r["id"]) << "\t"
          << r["goodness"].dump() << "\t";
      std::vector<std::string> f = r["filtered_by"].get<std::vector<std::string>>();
      for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
      for (const auto& n : names) {
        const json* c = nullptr;
        for (const auto& x : r["criteria"]) {
          if (x["id"] == n) c = &x;
        }
        if (!c) {
          out << "\t\t\t\t";
          continue;
        }
        out << "\t" << (*c)["value"].dump() << "\t" << ((*c)["triggered"].get<bool>() ? "1" : "0") << "\t"
            << join_ints((*c)["evidence"].get<std::vector<int>>()) << "\t"
            << (r["subscores"].contains(n) ? r["subscores"][n].dump() : "");
      }
      std::string spans;
      for (const auto& s : r["match_spans"]) spans += (spans.empty() ? "" : ",") + s[0].dump() + "-" + s[1].dump();
      out << "\t" << spans << "\t" << r.value("predicted_level", "") << "\t" << tsv_field(r["text"]) << "\n";
    }
  };
  rows(j["results"], "result");
  rows(j["rejected"], "rejected");
  return out.str();
}

std::string md_cell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out += c;
  }
  return out;
}

std::string select_md(const json& j) {
  std::ostringstream out;
  out << "Status: " << j["status"].get<std::string>() << "\n\nQuery: `" << j["query"].dump() << "`\n\nConfig: `"
      << j["config_echo"].dump() << "`\n";
  auto table = [&](const json& list, const char* title) {
    out << "\n### " << title << "\n\n| Rank | Id | G | Subscores | Filtered by | Criteria | Level | Text |\n"
        << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : list) {
      std::string subs, crit;
      for (const auto& [k, v] : r["subscores"].items()) subs += (subs.empty() ? "" : " ") + k + "=" + v.dump();
      for (const auto& c : r["criteria"]) {
        crit += (crit.empty() ? "" : " ") + c["id"].get<std::string>() + "=" + c["value"].dump() +
                (c["triggered"].get<bool>() ? "!" : "");
        auto ev = c["evidence"].get<std::vector<int>>();
        if (!ev.empty()) crit += "[" + join_ints(ev) + "]";
      }
      std::string filtered;
      for (const auto& f : r["filtered_by"]) filtered += (filtered.empty() ? "" : ", ") + f.get<std::string>();
      std::string spans;
      for (const auto& s : r["match_spans"]) spans += " @" + s[0].dump() + "-" + s[1].dump();
      out << "| " << (r["rank"].is_null() ? "" : r["rank"].dump()) << " | " << md_cell(r["id"]) << " | "
          << r["goodness"].dump() << " | " << subs << " | " << filtered << " | " << crit << spans << " | "
          << r.value("predicted_level", "") << " | " << md_cell(r["text"]) << " |\n";
    }
  };
  table(j["results"], "Results");
  table(j["rejected"], "Rejected");
  return out.str();
}

int cmd_select(const Options& o, std::ostream& out) {
  auto config = build_config(o);
  auto lex = load_lexicons(o);
  auto model = load_model(o);
  const CefrModel* m = model ? &*model : nullptr;

  if (!o.terms_file.empty()) {
    std::vector<std::string> terms;
    std::istringstream in(read_text_file(o.terms_file));
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') terms.push_back(line);
    }
    auto corpus = load_corpus(o);
    json list = json::array();
    for (auto& [term, best] : select_best_per_term(corpus, config, terms, lex, m)) {
      list.push_back({{"term", term}, {"best", best ? to_json(*best) : json(nullptr)}});
    }
    emit(o, dump_json({{"config_echo", config_to_json(config)}, {"terms", list}}), out);
    return 0;
  }

  if (config.query.term.empty()) throw UsageError("--term is required (or --terms for batch mode)");
  SelectionOutput result;
  if (!o.remote.empty()) {
    RemoteHttpProvider provider(o.remote);
    result = select(provider.fetch(config.query), config, lex, m);
  } else {
    result = select(load_corpus(o), config, lex, m);
  }
  auto j = to_json(result, config);
  if (o.format == "tsv") emit(o, select_tsv(j), out);
  else if (o.format == "md") emit(o, select_md(j), out);
  else emit(o, dump_json(j), out);
  return 0;
}

int cmd_classify(const Options& o, std::ostream& out) {
  if (o.model.empty()) throw UsageError("--model is required");
  auto corpus = load_corpus(o);
  auto lex = load_lexicons(o);
  auto model = CefrModel::load(o.model);
  auto target = level_or(o, CefrLevel::B1);
  json list = json::array();
  std::ostringstream table;
  if (o.format == "md") {
    table << "| Id | Level |";
    for (auto l : model.labels) table << " " << to_string(l) << " |";
    table << "\n|---|---|";
    for (std::size_t i = 0; i < model.labels.size(); ++i) table << "---|";
    table << "\n";
  } else if (o.format == "tsv") {
    table << "id\tlevel";
    for (auto l : model.labels) table << "\t" << to_string(l);
    table << "\n";
  }
  for (const auto& s : corpus) {
    auto c = classify(model, extract_features(s, target, lex));
    json probs = json::object();
    for (std::size_t i = 0; i < model.labels.size(); ++i) probs[std::string(to_string(model.labels[i]))] = c.probabilities[i];
    list.push_back({{"id", s.id}, {"level", std::string(to_string(c.level))}, {"probabilities", probs}});
    const char* sep = o.format == "md" ? " | " : "\t";
    if (o.format == "md") table << "| ";
    table << (o.format == "md" ? md_cell(s.id) : tsv_field(s.id)) << sep << to_string(c.level);
    for (double p : c.probabilities) table << sep << number(p);
    table << (o.format == "md" ? " |\n" : "\n");
  }
  if (o.format == "md" || o.format == "tsv") emit(o, table.str(), out);
  else emit(o, dump_json({{"sentences", list}}), out);
  return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
  if (o.train_file.empty()) throw UsageError("--train is required");
  auto lex = load_lexicons(o);
  TrainingHyperparams hp;
  if (o.epochs) hp.epochs = *o.epochs;
  if (o.lr) hp.learning_rate = *o.lr;
  if (o.l2) hp.l2 = *o.l2;
  auto data = load_training_file(o.train_file, lex);
  auto model = train(data, hp);
  emit(o, dump_json(model.to_json()), out);
  return 0;
}

int cmd_features(const Options& o, std::ostream& out) {
  auto corpus = load_corpus(o);
  auto lex = load_lexicons(o);
  auto target = level_or(o, CefrLevel::B1);
  const auto& names = feature_names();
  if (o.format == "json") {
    json list = json::array();
    for (const auto& s : corpus) {
      auto fv = extract_features(s, target, lex);
      json f = json::object();
      for (std::size_t i = 0; i < names.size(); ++i) f[std::string(names[i])] = fv[i];
      list.push_back({{"id", s.id}, {"features", f}});
    }
    emit(o, dump_json({{"target_level", std::string(to_string(target))}, {"sentences", list}}), out);
    return 0;
  }
  const bool md = o.format == "md";
  std::ostringstream t;
  t << (md ? "| id |" : "id");
  for (auto n : names) t << (md ? " " : "\t") << n << (md ? " |" : "");
  t << "\n";
  if (md) {
    t << "|---|";
    for (std::size_t i = 0; i < names.size(); ++i) t << "---|";
    t << "\n";
  }
  for (const auto& s : corpus) {
    auto fv = extract_features(s, target, lex);
    t << (md ? "| " + md_cell(s.id) + " |" : tsv_field(s.id));
    for (std::size_t i = 0; i < names.size(); ++i) t << (md ? " " : "\t") << number(fv[i]) << (md ? " |" : "");
    t << "\n";
  }
  emit(o, t.str(), out);
  return 0;
}

int cmd_exercise(const Options& o, std::ostream& out) {
  if (o.terms_file.empty()) throw UsageError("--terms is required (TSV with columns level and term)");
  auto config = build_config(o);
  auto corpus = load_corpus(o);
  auto lex = load_lexicons(o);
  auto model = load_model(o);
  const CefrModel* m = model ? &*model : nullptr;
  auto target = level_or(o, CefrLevel::B1);

  auto table = parse_tsv(read_text_file(o.terms_file));
  auto level_col = table.column("level"), term_col = table.column("term");
  std::map<CefrLevel, std::vector<std::string>> terms;
  for (const auto& row : table.rows) terms[parse_cefr_or_throw(row[level_col])].push_back(row[term_col]);

  DistractorPool pool = o.distractors.empty() ? distractor_pool_from_corpus(corpus, lex, config.tags)
                                              : load_distractor_pool(o.distractors);
  std::map<std::string, std::string> overrides;
  if (!o.overrides.empty()) overrides = parse_distractor_overrides(read_text_file(o.overrides));

  const bool text = o.format == "text" || o.format == "md";
  if (o.mode == "worksheet") {
    std::map<CefrLevel, std::vector<SelectionResult>> per_level;
    for (const auto& [level, list] : terms) per_level[level] = seed_results(corpus, config, level, list, lex, m);
    auto ws = build_worksheet(per_level, target, pool, o.seed, overrides);
    if (!o.answer_key.empty()) {
      std::ofstream key(o.answer_key, std::ios::binary);
      key << (text ? render_answer_key(ws) : dump_json(answer_key_json(ws)));
    }
    emit(o, text ? render_text(ws) : dump_json(to_json(ws, o.answer_key.empty())), out);
    return 0;
  }
  auto mode = parse_exercise_mode(o.mode);
  if (!mode) throw UsageError("--mode must be worksheet, same_msd or mixed_pos");
  auto results = seed_results(corpus, config, target, terms[target], lex, m);
  ExerciseOptions options;
  if (auto it = overrides.begin(); it != overrides.end() && overrides.size() == 1) options.distractor_override = it->second;
  auto ex = build_exercise(results, *mode, target, pool, o.seed, options);
  emit(o, text ? render_text(ex) : dump_json(to_json(ex)), out);
  return 0;
}

std::string fixed3(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(3) << v;
  return s.str() + "\n";
}

std::map<std::string, CefrLevel> system_levels(const Options& o) {
  if (o.system_levels.empty()) return {};
  return parse_levels_csv(read_text_file(o.system_levels));
}

AlphaMetric metric_of(const Options& o) {
  auto m = parse_alpha_metric(o.metric);
  if (!m) throw UsageError("--metric must be nominal or interval");
  return *m;
}

int cmd_evaluate(const std::string& what, const Options& o, std::ostream& out) {
  const bool as_json = o.format == "json";
  if (what == "iid" || what == "chance") {
    double p;
    if (o.p_chance) {
      p = *o.p_chance;
    } else {
      if (!o.items || !o.n_options) throw UsageError("--items and --options are required");
      p = chance_probability(*o.items, *o.n_options);
    }
    double iid = ideal_item_difficulty(p);
    if (as_json) emit(o, dump_json({{"chance_probability", p}, {"iid", iid}}), out);
    else emit(o, fixed3(what == "iid" ? iid : p), out);
    return 0;
  }
  if (what == "alpha") {
    if (o.ratings.empty()) throw UsageError("--ratings is required");
    auto system = system_levels(o);
    std::vector<std::pair<std::string, std::vector<RatingRecord>>> blocks;
    for (const auto& path : o.ratings) blocks.emplace_back(path, parse_ratings_csv(read_text_file(path)));
    auto res = alpha_by_block(blocks, system, metric_of(o));
    if (as_json) {
      json list = json::array();
      for (const auto& [name, a] : res.blocks) list.push_back({{"block", name}, {"alpha", a}});
      emit(o, dump_json({{"blocks", list}, {"average", res.average}, {"metric", to_string(metric_of(o))}}), out);
    } else {
      std::ostringstream t;
      t << "| Block | alpha |\n|---|---|\n";
      for (const auto& [name, a] : res.blocks) t << "| " << name << " | " << std::fixed << std::setprecision(2) << a << " |\n";
      t << "| Avg | " << std::fixed << std::setprecision(2) << res.average << " |\n";
      emit(o, t.str(), out);
    }
    return 0;
  }
  if (what == "ratings") {
    if (o.ratings.size() != 1) throw UsageError("--ratings takes exactly one file here");
    auto rep = ratings_report(parse_ratings_csv(read_text_file(o.ratings.front())), system_levels(o), o.threshold,
                              metric_of(o));
    emit(o, as_json ? dump_json(to_json(rep)) : to_markdown(rep), out);
    return 0;
  }
  if (what == "responses") {
    if (o.responses.empty()) throw UsageError("--responses is required");
    auto responses = parse_responses_csv(read_text_file(o.responses));
    std::vector<ItemInfo> items;
    if (!o.item_info.empty()) items = parse_items_csv(read_text_file(o.item_info));
    auto table = difficulty_table(responses, items);
    emit(o, as_json ? dump_json(to_json(table)) : to_markdown(table), out);
    return 0;
  }
  throw UsageError("unknown evaluation '" + what + "'");
}

int cmd_serve(const Options& o, std::ostream& out) {
  if (o.config.empty()) throw UsageError("--config (startup file) is required");
  auto state = load_state_file(o.config);
  auto [host, port] = bind_address(o.bind.empty() ? std::getenv(kBindEnv) : o.bind.c_str());
  Server server(state);
  int bound = server.bind(host, port);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  out << "listening on " << host << ":" << bound << std::endl;
  server.listen_after_bind();
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"HitEx candidate sentence selection"};
  app.require_subcommand(1);
  Options o;

  auto* sel = app.add_subcommand("select", "Rank corpus sentences for a search term");
  add_resources(sel, o);
  add_query(sel, o);
  add_io(sel, o);
  sel->add_option("--top-k", o.top_k, "Keep only the best k results");
  sel->add_flag("--retain-suboptimal", o.retain_suboptimal, "Rank filtered sentences separately");
  sel->add_option("--terms", o.terms_file, "File with one term per line: best sentence per term");
  sel->add_option("--remote", o.remote, "Fetch candidates from a concordance service at this URL");
  sel->add_option("--max-candidates", o.max_candidates, "Concordance cap");

  auto* cls = app.add_subcommand("classify", "Predict CEFR levels of sentences");
  add_resources(cls, o);
  add_io(cls, o);
  cls->add_option("--level", o.level, "Target level used by target-relative features");

  auto* trn = app.add_subcommand("train", "Train the CEFR classifier");
  add_resources(trn, o);
  add_io(trn, o);
  trn->add_option("--train", o.train_file, "Training TSV")->required();
  trn->add_option("--epochs", o.epochs);
  trn->add_option("--lr", o.lr);
  trn->add_option("--l2", o.l2);

  auto* fea = app.add_subcommand("features", "Extract the 61 L2 complexity features");
  add_resources(fea, o);
  add_io(fea, o);
  fea->add_option("--level", o.level, "Target level");

  auto* exe = app.add_subcommand("exercise", "Build word-bank exercises or a worksheet");
  add_resources(exe, o);
  add_query(exe, o);
  add_io(exe, o);
  exe->add_option("--terms", o.terms_file, "TSV with columns level and term")->required();
  exe->add_option("--mode", o.mode, "worksheet, same_msd or mixed_pos");
  exe->add_option("--distractors", o.distractors, "Distractor pool TSV (form, lemma, pos, msd, level)");
  exe->add_option("--overrides", o.overrides, "Manual distractors TSV (exercise, distractor)");
  exe->add_option("--answer-key", o.answer_key, "Write the answer key to this file");

  auto* ev = app.add_subcommand("evaluate", "Evaluation metrics");
  ev->require_subcommand(1);
  std::string ev_what;
  for (const char* name : {"iid", "chance", "alpha", "ratings", "responses"}) {
    auto* sub = ev->add_subcommand(name);
    add_io(sub, o);
    sub->callback([&ev_what, name] { ev_what = name; });
    if (std::string_view(name) == "iid" || std::string_view(name) == "chance") {
      sub->add_option("--items", o.items, "Items per exercise");
      sub->add_option("--options", o.n_options, "Word bank size");
      sub->add_option("--p-chance", o.p_chance, "Chance probability, instead of items/options");
    } else if (std::string_view(name) == "responses") {
      sub->add_option("--responses", o.responses, "Responses CSV")->required();
      sub->add_option("--item-info", o.item_info, "Item metadata CSV (exercise,item,mode,level,pos)");
    } else {
      sub->add_option("--ratings", o.ratings, "Ratings CSV (repeat for blocks)")->required();
      sub->add_option("--system-levels", o.system_levels, "CSV sentence,level of system levels");
      sub->add_option("--metric", o.metric, "nominal or interval");
      sub->add_option("--threshold", o.threshold, "Suitability threshold");
    }
  }

  auto* srv = app.add_subcommand("serve", "Run the HTTP service");
  srv->add_option("--config", o.config, "Startup JSON")->required();
  srv->add_option("--bind", o.bind, "host:port, overrides $HITEX_BIND");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sel->parsed()) return cmd_select(o, out);
    if (cls->parsed()) return cmd_classify(o, out);
    if (trn->parsed()) return cmd_train(o, out);
    if (fea->parsed()) return cmd_features(o, out);
    if (exe->parsed()) return cmd_exercise(o, out);
    if (ev->parsed()) return cmd_evaluate(ev_what, o, out);
    if (srv->parsed()) return cmd_serve(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration\n";
    for (const auto& x : e.errors()) err << "  " << x << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace hitex
