#include "hitex/service.hpp"

#include <filesystem>

#include <httplib.h>

#include "hitex/config.hpp"
#include "hitex/error.hpp"
#include "hitex/evaluation.hpp"
#include "hitex/features.hpp"

namespace hitex {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& j) { return {status, dump_json(j), "application/json"}; }

HttpResponse errors_response(int status, const std::vector<std::string>& errors) {
  return json_response(status, {{"errors", errors}});
}

HttpResponse error_response(int status, const std::string& message) {
  return errors_response(status, {message});
}

// Parses a JSON object body; sets `bad` on failure.
std::optional<json> parse_body(std::string_view body, HttpResponse& bad) {
  try {
    auto j = json::parse(body.begin(), body.end());
    if (!j.is_object()) {
      bad = error_response(400, "request body must be a JSON object");
      return std::nullopt;
    }
    return j;
  } catch (const json::parse_error& e) {
    bad = error_response(400, std::string("invalid JSON: ") + e.what());
    return std::nullopt;
  }
}

const std::vector<AnnotatedSentence>* find_corpus(const ServiceState& state, const json& body, std::string& name) {
  name = state.default_corpus;
  if (auto it = body.find("corpus"); it != body.end() && it->is_string()) name = it->get<std::string>();
  if (name.empty() && state.corpora.size() == 1) name = state.corpora.begin()->first;
  auto it = state.corpora.find(name);
  return it == state.corpora.end() ? nullptr : &it->second;
}

// A config from body.config / body.profile with body.query merged on top.
SelectionConfig request_config(const json& body) {
  std::vector<std::string> errors;
  SelectionConfig config;
  json doc = body.value("config", json::object());
  if (!doc.is_object()) throw ConfigError({"config: must be an object"});
  if (body.contains("profile") && !doc.contains("profile")) doc["profile"] = body["profile"];
  config = validate_config(doc);
  if (auto q = body.find("query"); q != body.end()) {
    config.query = query_from_json(*q, errors, config.query);
  }
  if (!errors.empty()) throw ConfigError(errors);
  return config;
}

json classification_json(const CefrModel& model, const AnnotatedSentence& s, const Classification& c) {
  json probs = json::object();
  for (std::size_t i = 0; i < model.labels.size(); ++i) probs[std::string(to_string(model.labels[i]))] = c.probabilities[i];
  return {{"id", s.id}, {"level", std::string(to_string(c.level))}, {"probabilities", probs}};
}

DistractorPool request_pool(const ServiceState& state, const std::vector<AnnotatedSentence>& corpus) {
  if (state.distractors) return *state.distractors;
  return distractor_pool_from_corpus(corpus, state.lexicons, TagsetConfig{});
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).string();
}

template <typename F>
HttpResponse guarded(F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    return errors_response(400, e.errors());
  } catch (const json::exception& e) {
    return error_response(400, std::string("bad request: ") + e.what());
  } catch (const Error& e) {
    return error_response(400, e.what());
  } catch (const std::exception& e) {
    return error_response(500, std::string("internal error: ") + e.what());
  }
}

HttpResponse single_exercise(const ServiceState& state, const json& body) {
  std::string name;
  const auto* corpus = find_corpus(state, body, name);
  if (!corpus) return error_response(404, "unknown corpus '" + name + "'");
  auto mode = parse_exercise_mode(body.value("mode", std::string("same_msd")));
  if (!mode) return error_response(400, "mode: must be same_msd or mixed_pos");
  auto level = parse_cefr(body.value("level", std::string("B1")));
  if (!level) return error_response(400, "level: must be a CEFR level");
  auto seed = body.value("seed", std::uint64_t{0});

  std::map<std::string, const AnnotatedSentence*> by_id;
  for (const auto& s : *corpus) by_id.emplace(s.id, &s);
  std::vector<SelectionResult> results;
  for (const auto& item : body.at("items")) {
    auto id = item.at("sentence_id").get<std::string>();
    auto it = by_id.find(id);
    if (it == by_id.end()) return error_response(404, "unknown sentence '" + id + "'");
    SearchQuery q;
    q.term = item.at("term").get<std::string>();
    if (item.contains("match_kind")) {
      auto kind = parse_match_kind(item["match_kind"].get<std::string>());
      if (!kind) return error_response(400, "items: bad match_kind");
      q.match_kind = *kind;
    }
    SelectionResult r;
    r.sentence = *it->second;
    r.sentence.match_spans = find_matches(r.sentence, q);
    if (r.sentence.match_spans.empty()) return error_response(400, "term '" + q.term + "' does not occur in " + id);
    results.push_back(std::move(r));
  }
  ExerciseOptions options;
  options.id = body.value("id", std::string());
  options.items = body.value("n_items", 5);
  if (body.contains("distractor")) options.distractor_override = body["distractor"].get<std::string>();
  auto ex = build_exercise(results, *mode, *level, request_pool(state, *corpus), seed, options);
  return json_response(200, {{"seed", seed}, {"exercise", to_json(ex)}, {"text", render_text(ex)}});
}

HttpResponse worksheet(const ServiceState& state, const json& body) {
  const json& spec = body.at("worksheet");
  std::string name;
  const auto* corpus = find_corpus(state, body, name);
  if (!corpus) return error_response(404, "unknown corpus '" + name + "'");
  auto target = parse_cefr(spec.value("target_level", std::string("B1")));
  if (!target) return error_response(400, "worksheet.target_level: must be a CEFR level");
  auto seed = spec.value("seed", std::uint64_t{0});
  auto config = request_config(spec);
  if (config.mode(CriterionId::l2_level) != CriterionMode::off && !state.model) {
    return error_response(409, "l2_level needs a CEFR model and none is loaded");
  }
  std::map<CefrLevel, std::vector<SelectionResult>> per_level;
  for (const auto& [label, terms] : spec.at("terms").items()) {
    auto level = parse_cefr(label);
    if (!level) return error_response(400, "worksheet.terms: unknown level '" + label + "'");
    per_level[*level] = seed_results(*corpus, config, *level, terms.get<std::vector<std::string>>(), state.lexicons,
                                     state.model ? &*state.model : nullptr);
  }
  std::map<std::string, std::string> overrides;
  if (spec.contains("distractors")) overrides = spec["distractors"].get<std::map<std::string, std::string>>();
  auto ws = build_worksheet(per_level, *target, request_pool(state, *corpus), seed, overrides);
  return json_response(200, {{"seed", seed},
                             {"worksheet", to_json(ws)},
                             {"answer_key", answer_key_json(ws)},
                             {"text", render_text(ws)}});
}

}  // namespace

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

ServiceState load_state(const json& startup, const std::string& base_dir) {
  ServiceState state;
  auto path_of = [&](const json& v) { return resolve(base_dir, v.get<std::string>()); };
  for (const auto& [name, paths] : startup.at("corpora").items()) {
    auto& corpus = state.corpora[name];
    std::vector<std::string> list = paths.is_array() ? paths.get<std::vector<std::string>>()
                                                     : std::vector<std::string>{paths.get<std::string>()};
    for (const auto& p : list) {
      auto part = read_conllu_file(resolve(base_dir, p));
      corpus.insert(corpus.end(), part.begin(), part.end());
    }
  }
  state.default_corpus = startup.value("default_corpus", std::string());
  if (state.default_corpus.empty() && !state.corpora.empty()) state.default_corpus = state.corpora.begin()->first;
  if (startup.contains("kelly")) state.lexicons.load_kelly(path_of(startup["kelly"]));
  if (startup.contains("svalex")) state.lexicons.load_svalex(path_of(startup["svalex"]));
  if (startup.contains("lmi")) state.lexicons.load_lmi(path_of(startup["lmi"]));
  if (startup.contains("aux")) {
    for (const auto& [kind, p] : startup["aux"].items()) {
      auto k = parse_aux_kind(kind);
      if (!k) throw LoadError("unknown aux list '" + kind + "'");
      state.lexicons.load_aux(*k, path_of(p));
    }
  }
  if (startup.contains("model")) state.model = CefrModel::load(path_of(startup["model"]));
  if (startup.contains("distractors")) state.distractors = load_distractor_pool(path_of(startup["distractors"]));
  return state;
}

ServiceState load_state_file(const std::string& path) {
  json startup;
  try {
    startup = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw LoadError(path + ": " + e.what());
  }
  return load_state(startup, std::filesystem::path(path).parent_path().string());
}

HttpResponse handle_select(const ServiceState& state, std::string_view body) {
  HttpResponse bad;
  auto req = parse_body(body, bad);
  if (!req) return bad;
  return guarded([&]() -> HttpResponse {
    auto config = request_config(*req);
    std::string name;
    const auto* corpus = find_corpus(state, *req, name);
    if (!corpus) return error_response(404, "unknown corpus '" + name + "'");
    if (config.mode(CriterionId::l2_level) != CriterionMode::off && !state.model) {
      return error_response(409, "l2_level needs a CEFR model and none is loaded");
    }
    auto out = select(*corpus, config, state.lexicons, state.model ? &*state.model : nullptr);
    return json_response(200, to_json(out, config));
  });
}

HttpResponse handle_criteria() { return json_response(200, criteria_catalog_json()); }

HttpResponse handle_classify(const ServiceState& state, std::string_view body, std::string_view content_type) {
  if (!state.model) return error_response(409, "no CEFR model is loaded");
  return guarded([&]() -> HttpResponse {
    std::string text;
    CefrLevel target = CefrLevel::B1;
    if (content_type.starts_with("application/json")) {
      HttpResponse bad;
      auto req = parse_body(body, bad);
      if (!req) return bad;
      text = req->at("conllu").get<std::string>();
      if (req->contains("target_level")) target = parse_cefr_or_throw((*req)["target_level"].get<std::string>());
    } else {
      text = std::string(body);
    }
    auto sentences = parse_conllu(text, "request");
    json list = json::array();
    for (const auto& s : sentences) {
      auto c = classify(*state.model, extract_features(s, target, state.lexicons));
      list.push_back(classification_json(*state.model, s, c));
    }
    return json_response(200, {{"sentences", list}});
  });
}

HttpResponse handle_exercises(const ServiceState& state, std::string_view body) {
  HttpResponse bad;
  auto req = parse_body(body, bad);
  if (!req) return bad;
  return guarded([&]() -> HttpResponse {
    if (req->contains("worksheet")) return worksheet(state, *req);
    if (!req->contains("items")) return error_response(400, "expected 'items' or 'worksheet'");
    return single_exercise(state, *req);
  });
}

HttpResponse handle_evaluate(std::string_view body) {
  HttpResponse bad;
  auto req = parse_body(body, bad);
  if (!req) return bad;
  return guarded([&]() -> HttpResponse {
    const auto kind = req->value("kind", std::string());
    auto metric_of = [&] {
      auto m = parse_alpha_metric(req->value("metric", std::string("nominal")));
      if (!m) throw Error("metric: must be nominal or interval");
      return *m;
    };
    if (kind == "chance" || (kind == "iid" && req->contains("n_items"))) {
      double p = chance_probability(req->at("n_items").get<int>(), req->at("n_options").get<int>());
      return json_response(200, {{"chance_probability", p}, {"iid", ideal_item_difficulty(p)}});
    }
    if (kind == "iid") {
      return json_response(200, {{"iid", ideal_item_difficulty(req->at("p_chance").get<double>())}});
    }
    if (kind == "alpha") {
      RatingMatrix m;
      for (const auto& row : req->at("matrix")) {
        std::vector<std::optional<double>> r;
        for (const auto& v : row) r.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
        m.push_back(std::move(r));
      }
      auto metric = metric_of();
      return json_response(200, {{"alpha", krippendorff_alpha(m, metric)}, {"metric", to_string(metric)}});
    }
    if (kind == "spearman") {
      return json_response(200, {{"rho", spearman_rho(req->at("x").get<std::vector<double>>(),
                                                       req->at("y").get<std::vector<double>>())}});
    }
    if (kind == "ratings") {
      auto ratings = parse_ratings_csv(req->at("ratings_csv").get<std::string>());
      std::map<std::string, CefrLevel> system;
      if (req->contains("system_levels_csv")) system = parse_levels_csv((*req)["system_levels_csv"].get<std::string>());
      auto rep = ratings_report(ratings, system, req->value("threshold", 2.5), metric_of());
      return json_response(200, to_json(rep));
    }
    if (kind == "responses") {
      auto responses = parse_responses_csv(req->at("responses_csv").get<std::string>());
      std::vector<ItemInfo> items;
      if (req->contains("items_csv")) items = parse_items_csv((*req)["items_csv"].get<std::string>());
      json per_item = json::array();
      for (const auto& [key, stats] : item_difficulty(responses)) {
        per_item.push_back({{"exercise", key.first},
                            {"item", key.second},
                            {"correct", stats.correct},
                            {"total", stats.total},
                            {"difficulty", stats.difficulty()}});
      }
      return json_response(200, {{"items", per_item}, {"table", to_json(difficulty_table(responses, items))}});
    }
    return error_response(400, "kind: must be one of chance, iid, alpha, spearman, ratings, responses");
  });
}

HttpResponse handle_concordance(const ServiceState& state, const std::map<std::string, std::string>& params) {
  return guarded([&]() -> HttpResponse {
    json selector = json::object();
    if (auto it = params.find("corpus"); it != params.end()) selector["corpus"] = it->second;
    std::string name;
    const auto* corpus = find_corpus(state, selector, name);
    if (!corpus) return error_response(404, "unknown corpus '" + name + "'");
    SearchQuery q;
    auto get = [&](const char* key) -> std::optional<std::string> {
      auto it = params.find(key);
      return it == params.end() ? std::nullopt : std::optional<std::string>(it->second);
    };
    q.term = get("term").value_or("");
    if (auto k = get("match_kind")) {
      auto kind = parse_match_kind(*k);
      if (!kind) return error_response(400, "match_kind: must be wordform, lemma or pos_pattern");
      q.match_kind = *kind;
    }
    if (auto p = get("pos"); p && !p->empty()) q.pos = *p;
    if (auto m = get("max")) q.max_candidates = std::stoi(*m);
    validate_query(q);
    return {200, write_conllu(concordance_search(*corpus, q)), "text/x-conllu; charset=utf-8"};
  });
}

std::vector<AnnotatedSentence> LocalProvider::fetch(const SearchQuery& query) {
  return concordance_search(corpus_, query);
}

RemoteHttpProvider::RemoteHttpProvider(std::string base_url, std::string corpus)
    : base_url_(std::move(base_url)), corpus_(std::move(corpus)) {}

std::vector<AnnotatedSentence> RemoteHttpProvider::fetch(const SearchQuery& query) {
  std::string host = base_url_, prefix;
  if (auto scheme = host.find("://"); scheme != std::string::npos) {
    if (auto slash = host.find('/', scheme + 3); slash != std::string::npos) {
      prefix = host.substr(slash);
      host.resize(slash);
    }
  }
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  httplib::Client client(host);
  httplib::Params params{{"term", query.term},
                         {"match_kind", std::string(to_string(query.match_kind))},
                         {"max", std::to_string(query.max_candidates)}};
  if (query.pos) params.emplace("pos", *query.pos);
  if (!corpus_.empty()) params.emplace("corpus", corpus_);
  auto res = client.Get(prefix + "/concordance", params, httplib::Headers{});
  if (!res) throw LoadError("concordance backend " + base_url_ + ": " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw LoadError("concordance backend " + base_url_ + " returned HTTP " + std::to_string(res->status));
  }
  // Re-run the match so spans follow this side's query semantics.
  return concordance_search(parse_conllu(res->body, corpus_.empty() ? "remote" : corpus_), query);
}

std::pair<std::string, int> bind_address(const char* env_value) {
  std::string value = env_value ? env_value : "";
  if (value.empty()) return {"127.0.0.1", 8080};
  auto colon = value.rfind(':');
  if (colon == std::string::npos) return {value, 8080};
  return {value.substr(0, colon), std::stoi(value.substr(colon + 1))};
}

struct Server::Impl {
  const ServiceState& state;
  httplib::Server http;

  explicit Impl(const ServiceState& s) : state(s) {
    http.set_payload_max_length(kMaxRequestBytes);
    auto send = [](httplib::Response& res, const HttpResponse& r) {
      res.status = r.status;
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_content(r.body, r.content_type);
    };
    http.Post("/select", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_select(state, req.body));
    });
    http.Get("/criteria", [send](const httplib::Request&, httplib::Response& res) { send(res, handle_criteria()); });
    http.Post("/classify", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_classify(state, req.body, req.get_header_value("Content-Type")));
    });
    http.Post("/exercises", [this, send](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_exercises(state, req.body));
    });
    http.Post("/evaluate", [send](const httplib::Request& req, httplib::Response& res) {
      send(res, handle_evaluate(req.body));
    });
    http.Get("/concordance", [this, send](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> params;
      for (const auto& [k, v] : req.params) params.emplace(k, v);
      send(res, handle_concordance(state, params));
    });
    http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.status = 204;
    });
  }
};

Server::Server(const ServiceState& state) : impl_(std::make_unique<Impl>(state)) {}
Server::~Server() = default;

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }
void Server::stop() { impl_->http.stop(); }
void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace hitex
