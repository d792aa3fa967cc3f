#include "hitex/config.hpp"

#include <cmath>
#include <functional>

#include "hitex/error.hpp"

namespace hitex {

using nlohmann::json;

namespace {

using Errors = std::vector<std::string>;

constexpr std::array kCountCriteria{CriterionId::pron_anaphora,   CriterionId::adv_anaphora, CriterionId::negation,
                                    CriterionId::modal_verb,      CriterionId::difficult_vocab, CriterionId::oov,
                                    CriterionId::sensitive,       CriterionId::proper_name,  CriterionId::abbreviation};

bool is_count_limited(CriterionId id) {
  return std::find(kCountCriteria.begin(), kCountCriteria.end(), id) != kCountCriteria.end();
}

// Parameter descriptors drive validation, serialization and the catalog.
struct ParamSpec {
  std::string_view name;
  std::string_view type;  // integer | number | enum | string_list
  std::optional<double> min;
  std::optional<double> max;
  std::function<json(const CriteriaParams&)> get;
  // Returns an error message on failure.
  std::function<std::optional<std::string>(CriteriaParams&, const json&)> set;
};

std::optional<std::string> read_int(const json& v, int lo, int& out) {
  if (!v.is_number_integer()) return "must be an integer";
  auto x = v.get<long long>();
  if (x < lo) return "must be at least " + std::to_string(lo);
  if (x > 100000) return "is too large";
  out = static_cast<int>(x);
  return std::nullopt;
}

std::optional<std::string> read_real(const json& v, double lo, std::optional<double> hi, double& out) {
  if (!v.is_number()) return "must be a number";
  double x = v.get<double>();
  if (!std::isfinite(x) || x < lo || (hi && x > *hi)) {
    return hi ? "must be within [" + json(lo).dump() + ", " + json(*hi).dump() + "]"
              : "must be at least " + json(lo).dump();
  }
  out = x;
  return std::nullopt;
}

std::vector<ParamSpec> param_specs(CriterionId id) {
  std::vector<ParamSpec> specs;
  switch (id) {
    case CriterionId::match_count:
      specs.push_back({"max_matches", "integer", 1, std::nullopt,
                       [](const CriteriaParams& p) { return json(p.max_matches); },
                       [](CriteriaParams& p, const json& v) { return read_int(v, 1, p.max_matches); }});
      break;
    case CriterionId::term_position:
      specs.push_back({"position", "enum", std::nullopt, std::nullopt,
                       [](const CriteriaParams& p) { return json(std::string(to_string(p.term_position))); },
                       [](CriteriaParams& p, const json& v) -> std::optional<std::string> {
                         auto parsed = v.is_string() ? parse_term_position(v.get<std::string>()) : std::nullopt;
                         if (!parsed) return "must be one of any, forbid_edges, forbid_start, forbid_end";
                         p.term_position = *parsed;
                         return std::nullopt;
                       }});
      break;
    case CriterionId::non_lemmatized:
      specs.push_back({"max_ratio", "number", 0.0, 1.0,
                       [](const CriteriaParams& p) { return json(p.max_nonlemma_ratio); },
                       [](CriteriaParams& p, const json& v) { return read_real(v, 0.0, 1.0, p.max_nonlemma_ratio); }});
      break;
    case CriterionId::non_alpha:
      specs.push_back({"max_ratio", "number", 0.0, 1.0,
                       [](const CriteriaParams& p) { return json(p.max_nonalpha_ratio); },
                       [](CriteriaParams& p, const json& v) { return read_real(v, 0.0, 1.0, p.max_nonalpha_ratio); }});
      break;
    case CriterionId::l2_level:
      specs.push_back({"tolerance", "integer", 0.0, 4.0,
                       [](const CriteriaParams& p) { return json(p.l2_tolerance); },
                       [](CriteriaParams& p, const json& v) -> std::optional<std::string> {
                         int x = 0;
                         if (auto e = read_int(v, 0, x)) return e;
                         if (x > 4) return "must be at most 4";
                         p.l2_tolerance = x;
                         return std::nullopt;
                       }});
      break;
    case CriterionId::sent_length:
      specs.push_back({"min_len", "integer", 1, std::nullopt, [](const CriteriaParams& p) { return json(p.min_len); },
                       [](CriteriaParams& p, const json& v) { return read_int(v, 1, p.min_len); }});
      specs.push_back({"max_len", "integer", 1, std::nullopt, [](const CriteriaParams& p) { return json(p.max_len); },
                       [](CriteriaParams& p, const json& v) { return read_int(v, 1, p.max_len); }});
      break;
    case CriterionId::word_freq:
      specs.push_back({"min_freq", "number", 0.0, std::nullopt,
                       [](const CriteriaParams& p) { return json(p.min_word_freq); },
                       [](CriteriaParams& p, const json& v) { return read_real(v, 0.0, std::nullopt, p.min_word_freq); }});
      break;
    case CriterionId::typicality:
      specs.push_back({"min_typicality", "number", 0.0, std::nullopt,
                       [](const CriteriaParams& p) { return json(p.min_typicality); },
                       [](CriteriaParams& p, const json& v) {
                         return read_real(v, 0.0, std::nullopt, p.min_typicality);
                       }});
      break;
    default:
      break;
  }
  if (is_count_limited(id)) {
    specs.push_back({"max_count", "integer", 0.0, std::nullopt,
                     [id](const CriteriaParams& p) { return json(p.max_count(id)); },
                     [id](CriteriaParams& p, const json& v) -> std::optional<std::string> {
                       int x = 0;
                       if (auto e = read_int(v, 0, x)) return e;
                       p.set_max_count(id, x);
                       return std::nullopt;
                     }});
  }
  if (id == CriterionId::sensitive) {
    specs.push_back({"topics", "string_list", std::nullopt, std::nullopt,
                     [](const CriteriaParams& p) {
                       json a = json::array();
                       for (const auto& t : p.sensitive_topics) a.push_back(t);
                       return a;
                     },
                     [](CriteriaParams& p, const json& v) -> std::optional<std::string> {
                       if (!v.is_array()) return "must be a list of strings";
                       std::set<std::string> topics;
                       for (const auto& t : v) {
                         if (!t.is_string()) return "must be a list of strings";
                         topics.insert(t.get<std::string>());
                       }
                       p.sensitive_topics = std::move(topics);
                       return std::nullopt;
                     }});
  }
  return specs;
}

using TagMember = TagSet TagsetConfig::*;

const std::vector<std::pair<std::string_view, TagMember>>& tagset_fields() {
  static const std::vector<std::pair<std::string_view, TagMember>> fields{
      {"noun_pos", &TagsetConfig::noun_pos},
      {"proper_noun_pos", &TagsetConfig::proper_noun_pos},
      {"verb_pos", &TagsetConfig::verb_pos},
      {"adjective_pos", &TagsetConfig::adjective_pos},
      {"adverb_pos", &TagsetConfig::adverb_pos},
      {"pronoun_pos", &TagsetConfig::pronoun_pos},
      {"determiner_pos", &TagsetConfig::determiner_pos},
      {"preposition_pos", &TagsetConfig::preposition_pos},
      {"participle_pos", &TagsetConfig::participle_pos},
      {"conjunction_pos", &TagsetConfig::conjunction_pos},
      {"subjunction_pos", &TagsetConfig::subjunction_pos},
      {"particle_pos", &TagsetConfig::particle_pos},
      {"interjection_pos", &TagsetConfig::interjection_pos},
      {"abbreviation_pos", &TagsetConfig::abbreviation_pos},
      {"relative_pos", &TagsetConfig::relative_pos},
      {"punctuation_pos", &TagsetConfig::punctuation_pos},
      {"minor_delimiter_pos", &TagsetConfig::minor_delimiter_pos},
      {"minor_delimiter_forms", &TagsetConfig::minor_delimiter_forms},
      {"pairwise_delimiter_pos", &TagsetConfig::pairwise_delimiter_pos},
      {"pairwise_delimiter_forms", &TagsetConfig::pairwise_delimiter_forms},
      {"sentence_final_forms", &TagsetConfig::sentence_final_forms},
      {"nonfinite_msd", &TagsetConfig::nonfinite_msd},
      {"past_msd", &TagsetConfig::past_msd},
      {"present_msd", &TagsetConfig::present_msd},
      {"supine_msd", &TagsetConfig::supine_msd},
      {"perfect_participle_msd", &TagsetConfig::perfect_participle_msd},
      {"present_participle_msd", &TagsetConfig::present_participle_msd},
      {"sform_msd", &TagsetConfig::sform_msd},
      {"neuter_msd", &TagsetConfig::neuter_msd},
      {"subject_deprels", &TagsetConfig::subject_deprels},
      {"object_deprels", &TagsetConfig::object_deprels},
      {"attribute_deprels", &TagsetConfig::attribute_deprels},
      {"expletive_deprels", &TagsetConfig::expletive_deprels},
      {"negation_deprels", &TagsetConfig::negation_deprels},
      {"verb_group_deprels", &TagsetConfig::verb_group_deprels},
      {"clausal_deprels", &TagsetConfig::clausal_deprels},
      {"modifier_deprels", &TagsetConfig::modifier_deprels},
      {"subordinate_deprels", &TagsetConfig::subordinate_deprels},
      {"relative_clause_deprels", &TagsetConfig::relative_clause_deprels},
      {"pp_complement_deprels", &TagsetConfig::pp_complement_deprels},
      {"anaphoric_pronouns", &TagsetConfig::anaphoric_pronouns},
      {"demonstrative_pronouns", &TagsetConfig::demonstrative_pronouns},
      {"third_person_singular", &TagsetConfig::third_person_singular},
      {"relative_markers", &TagsetConfig::relative_markers},
      {"modal_lemmas", &TagsetConfig::modal_lemmas},
      {"auxiliary_lemmas", &TagsetConfig::auxiliary_lemmas},
  };
  return fields;
}

void set_modes(SelectionConfig& c, std::initializer_list<CriterionId> ids, CriterionMode mode) {
  for (auto id : ids) c.at(id).mode = mode;
}

}  // namespace

std::string_view to_string(ProfileName p) {
  switch (p) {
    case ProfileName::paper_eval: return "paper_eval";
    case ProfileName::dictionary_example: return "dictionary_example";
    case ProfileName::permissive: return "permissive";
  }
  return "?";
}

std::optional<ProfileName> parse_profile(std::string_view name) {
  for (auto p : {ProfileName::paper_eval, ProfileName::dictionary_example, ProfileName::permissive}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

SelectionConfig default_config(ProfileName profile) {
  using enum CriterionId;
  SelectionConfig c;
  c.profile = std::string(to_string(profile));
  c.query.max_candidates = 300;
  c.params.min_len = 6;
  c.params.max_len = 20;
  c.params.max_nonalpha_ratio = 0.30;
  c.params.max_nonlemma_ratio = 0.30;
  c.params.l2_tolerance = 0;
  switch (profile) {
    case ProfileName::paper_eval:
      // Modal verbs were allowed and the search term position was free.
      set_modes(c,
                {search_absence, match_count, dep_root, ellipsis, incompleteness, non_lemmatized, non_alpha,
                 struct_connective, pron_anaphora, adv_anaphora, l2_level, negation, interrogative, direct_speech,
                 closed_answer, sent_length, oov, sensitive, abbreviation},
                CriterionMode::filter);
      set_modes(c, {typicality, word_freq, proper_name, difficult_vocab}, CriterionMode::ranker);
      break;
    case ProfileName::dictionary_example:
      set_modes(c,
                {search_absence, dep_root, ellipsis, incompleteness, non_lemmatized, non_alpha, struct_connective,
                 pron_anaphora, adv_anaphora, interrogative, sent_length, sensitive, proper_name, abbreviation},
                CriterionMode::filter);
      set_modes(c, {match_count, typicality, word_freq, difficult_vocab, oov}, CriterionMode::ranker);
      break;
    case ProfileName::permissive:
      break;
  }
  return c;
}

SelectionConfig default_config(std::string_view profile) {
  auto p = parse_profile(profile);
  if (!p) throw ConfigError({"unknown profile '" + std::string(profile) + "'"});
  return default_config(*p);
}

json query_to_json(const SearchQuery& q) {
  json j;
  j["term"] = q.term;
  j["match_kind"] = std::string(to_string(q.match_kind));
  j["pos"] = q.pos ? json(*q.pos) : json(nullptr);
  j["target_level"] = std::string(to_string(q.target_level));
  j["max_candidates"] = q.max_candidates;
  return j;
}

SearchQuery query_from_json(const json& j, Errors& errors, SearchQuery q) {
  if (!j.is_object()) {
    errors.push_back("query: must be an object");
    return q;
  }
  for (const auto& [key, v] : j.items()) {
    if (key == "term") {
      if (v.is_string()) q.term = v.get<std::string>();
      else errors.push_back("query.term: must be a string");
    } else if (key == "match_kind") {
      auto k = v.is_string() ? parse_match_kind(v.get<std::string>()) : std::nullopt;
      if (k) q.match_kind = *k;
      else errors.push_back("query.match_kind: must be one of wordform, lemma, pos_pattern");
    } else if (key == "pos") {
      if (v.is_null()) q.pos.reset();
      else if (v.is_string() && !v.get<std::string>().empty()) q.pos = v.get<std::string>();
      else errors.push_back("query.pos: must be a tag string or null");
    } else if (key == "target_level") {
      auto level = v.is_string() ? parse_cefr(v.get<std::string>()) : std::nullopt;
      if (level) q.target_level = *level;
      else errors.push_back("query.target_level: must be a CEFR level A1..C2");
    } else if (key == "max_candidates") {
      int x = 0;
      if (auto e = read_int(v, 1, x)) errors.push_back("query.max_candidates: " + *e);
      else q.max_candidates = x;
    } else {
      errors.push_back("query: unknown field '" + key + "'");
    }
  }
  return q;
}

SelectionConfig validate_config(const json& doc) {
  Errors errors;
  if (!doc.is_object()) throw ConfigError({"config must be a JSON object"});

  SelectionConfig c = default_config(ProfileName::paper_eval);
  if (auto it = doc.find("profile"); it != doc.end()) {
    auto p = it->is_string() ? parse_profile(it->get<std::string>()) : std::nullopt;
    if (p) c = default_config(*p);
    else errors.push_back("unknown profile " + it->dump());
  }

  for (const auto& [key, v] : doc.items()) {
    if (key == "profile") continue;
    if (key == "retain_suboptimal") {
      if (v.is_boolean()) c.retain_suboptimal = v.get<bool>();
      else errors.push_back("retain_suboptimal: must be a boolean");
    } else if (key == "top_k") {
      if (v.is_null()) {
        c.top_k.reset();
      } else {
        int x = 0;
        if (auto e = read_int(v, 1, x)) errors.push_back("top_k: " + *e);
        else c.top_k = x;
      }
    } else if (key == "query") {
      c.query = query_from_json(v, errors, c.query);
    } else if (key == "criteria") {
      if (!v.is_object()) {
        errors.push_back("criteria: must be an object keyed by criterion id");
        continue;
      }
      for (const auto& [name, body] : v.items()) {
        auto id = parse_criterion(name);
        if (!id) {
          errors.push_back("unknown criterion '" + name + "'");
          continue;
        }
        if (!body.is_object()) {
          errors.push_back(name + ": must be an object");
          continue;
        }
        auto specs = param_specs(*id);
        for (const auto& [field, value] : body.items()) {
          if (field == "mode") {
            auto m = value.is_string() ? parse_mode(value.get<std::string>()) : std::nullopt;
            if (!m) errors.push_back(name + ".mode: must be one of off, filter, ranker");
            else c.at(*id).mode = *m;
          } else if (field == "weight") {
            int w = 1;
            if (auto e = read_int(value, 1, w)) errors.push_back(name + ".weight: " + *e);
            else c.at(*id).weight = w;
          } else {
            auto spec = std::find_if(specs.begin(), specs.end(), [&](const ParamSpec& s) { return s.name == field; });
            if (spec == specs.end()) {
              errors.push_back(name + ": unknown parameter '" + field + "'");
            } else if (auto e = spec->set(c.params, value)) {
              errors.push_back(name + "." + field + ": " + *e);
            }
          }
        }
      }
    } else if (key == "tagset") {
      if (!v.is_object()) {
        errors.push_back("tagset: must be an object");
        continue;
      }
      for (const auto& [field, value] : v.items()) {
        const auto& fields = tagset_fields();
        auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == field; });
        if (it == fields.end()) {
          errors.push_back("tagset: unknown field '" + field + "'");
          continue;
        }
        TagSet tags;
        bool ok = value.is_array();
        if (ok) {
          for (const auto& t : value) {
            if (!t.is_string()) {
              ok = false;
              break;
            }
            tags.insert(t.get<std::string>());
          }
        }
        if (!ok) errors.push_back("tagset." + field + ": must be a list of strings");
        else c.tags.*(it->second) = std::move(tags);
      }
    } else {
      errors.push_back("unknown field '" + key + "'");
    }
  }

  for (const auto& ci : criterion_catalog()) {
    if (ci.binary_only && c.mode(ci.id) == CriterionMode::ranker) {
      errors.push_back(std::string(ci.name) + ": binary criterion cannot be a ranker");
    }
  }
  if (c.params.min_len > c.params.max_len) errors.push_back("sent_length: min_len exceeds max_len");
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

json config_to_json(const SelectionConfig& c) {
  json j;
  j["profile"] = c.profile.empty() ? json(nullptr) : json(c.profile);
  j["retain_suboptimal"] = c.retain_suboptimal;
  j["top_k"] = c.top_k ? json(*c.top_k) : json(nullptr);
  j["query"] = query_to_json(c.query);
  json criteria = json::object();
  for (const auto& ci : criterion_catalog()) {
    json entry;
    entry["mode"] = std::string(to_string(c.mode(ci.id)));
    entry["weight"] = c.at(ci.id).weight;
    for (const auto& spec : param_specs(ci.id)) entry[std::string(spec.name)] = spec.get(c.params);
    criteria[std::string(ci.name)] = entry;
  }
  j["criteria"] = criteria;
  // Only deviations from the built-in tagset are echoed.
  const TagsetConfig defaults;
  json tagset = json::object();
  for (const auto& [name, member] : tagset_fields()) {
    if (c.tags.*member != defaults.*member) tagset[std::string(name)] = c.tags.*member;
  }
  if (!tagset.empty()) j["tagset"] = tagset;
  return j;
}

json criteria_catalog_json() {
  const auto defaults = default_config(ProfileName::paper_eval);
  json list = json::array();
  for (const auto& ci : criterion_catalog()) {
    json entry;
    entry["id"] = std::string(ci.name);
    entry["number"] = ci.number;
    entry["category"] = std::string(to_string(ci.category));
    entry["description"] = std::string(ci.description);
    entry["binary"] = ci.binary_only;
    entry["direction"] = ci.binary_only ? json(nullptr) : json(ci.positive ? "positive" : "negative");
    entry["modes"] = ci.binary_only ? json::array({"off", "filter"}) : json::array({"off", "filter", "ranker"});
    entry["default_mode"] = std::string(to_string(defaults.mode(ci.id)));
    json params = json::array();
    for (const auto& spec : param_specs(ci.id)) {
      json p;
      p["name"] = std::string(spec.name);
      p["type"] = std::string(spec.type);
      p["default"] = spec.get(defaults.params);
      if (spec.min) p["min"] = *spec.min;
      if (spec.max) p["max"] = *spec.max;
      if (spec.name == "position") p["values"] = {"any", "forbid_edges", "forbid_start", "forbid_end"};
      params.push_back(p);
    }
    entry["params"] = params;
    list.push_back(entry);
  }
  return {{"criteria", list}, {"profiles", {"paper_eval", "dictionary_example", "permissive"}}};
}

json config_json_schema() {
  auto nullable = [](json type) { return json{{"anyOf", {std::move(type), {{"type", "null"}}}}}; };
  json criteria = json::object();
  for (const auto& ci : criterion_catalog()) {
    json props = {{"mode", {{"enum", ci.binary_only ? json::array({"off", "filter"}) : json::array({"off", "filter", "ranker"})}}},
                  {"weight", {{"type", "integer"}, {"minimum", 1}}}};
    for (const auto& spec : param_specs(ci.id)) {
      json p;
      if (spec.type == "enum") {
        p["enum"] = {"any", "forbid_edges", "forbid_start", "forbid_end"};
      } else if (spec.type == "string_list") {
        p = {{"type", "array"}, {"items", {{"type", "string"}}}};
      } else {
        p["type"] = std::string(spec.type);
        if (spec.min) p["minimum"] = *spec.min;
        if (spec.max) p["maximum"] = *spec.max;
      }
      props[std::string(spec.name)] = p;
    }
    criteria[std::string(ci.name)] = {{"type", "object"}, {"properties", props}, {"additionalProperties", false}};
  }
  json tagset = json::object();
  for (const auto& [name, member] : tagset_fields()) {
    tagset[std::string(name)] = {{"type", "array"}, {"items", {{"type", "string"}}}, {"uniqueItems", true}};
  }
  json levels = json::array();
  for (auto l : {CefrLevel::A1, CefrLevel::A2, CefrLevel::B1, CefrLevel::B2, CefrLevel::C1, CefrLevel::C2})
    levels.push_back(std::string(to_string(l)));
  json query = {{"type", "object"},
                {"properties",
                 {{"term", {{"type", "string"}}},
                  {"match_kind", {{"enum", {"wordform", "lemma", "pos_pattern"}}}},
                  {"pos", nullable({{"type", "string"}, {"minLength", 1}})},
                  {"target_level", {{"enum", levels}}},
                  {"max_candidates", {{"type", "integer"}, {"minimum", 1}}}}},
                {"additionalProperties", false}};
  return {{"$schema", "https://json-schema.org/draft/2020-12/schema"},
          {"title", "HitEx selection config"},
          {"type", "object"},
          {"properties",
           {{"profile", {{"enum", {"paper_eval", "dictionary_example", "permissive"}}}},
            {"retain_suboptimal", {{"type", "boolean"}}},
            {"top_k", nullable({{"type", "integer"}, {"minimum", 1}})},
            {"query", query},
            {"criteria", {{"type", "object"}, {"properties", criteria}, {"additionalProperties", false}}},
            {"tagset", {{"type", "object"}, {"properties", tagset}, {"additionalProperties", false}}}}},
          {"additionalProperties", false}};
}

}  // namespace hitex
