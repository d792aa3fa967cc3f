#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "hitex/config.hpp"
#include "hitex/error.hpp"
#include "hitex/lexicons.hpp"

using namespace hitex;
using C = CriterionId;
using nlohmann::json;

namespace {

std::vector<std::string> errors_of(const json& doc) {
  try {
    validate_config(doc);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool has(const std::vector<std::string>& errors, const std::string& needle) {
  return std::any_of(errors.begin(), errors.end(), [&](const auto& e) { return e.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("paper_eval defaults") {
  auto c = default_config(ProfileName::paper_eval);
  CHECK(c.params.min_len == 6);
  CHECK(c.params.max_len == 20);
  CHECK(c.params.max_nonlemma_ratio == 0.30);
  CHECK(c.params.max_nonalpha_ratio == 0.30);
  CHECK(c.query.max_candidates == 300);
  CHECK(c.mode(C::modal_verb) == CriterionMode::off);
  CHECK(c.mode(C::term_position) == CriterionMode::off);
  CHECK(c.mode(C::l2_level) == CriterionMode::filter);
  CHECK(c.params.l2_tolerance == 0);
  CHECK(c.mode(C::typicality) == CriterionMode::ranker);
  CHECK(c.mode(C::word_freq) == CriterionMode::ranker);
  CHECK(c.mode(C::sent_length) == CriterionMode::filter);
  CHECK_FALSE(c.retain_suboptimal);
  CHECK(c.profile == "paper_eval");
  for (const auto& ci : criterion_catalog()) CHECK(c.at(ci.id).weight == 1);
}

TEST_CASE("every profile keeps binary criteria out of ranker mode") {
  for (auto p : {ProfileName::paper_eval, ProfileName::dictionary_example, ProfileName::permissive}) {
    auto c = default_config(p);
    for (const auto& ci : criterion_catalog()) {
      if (ci.binary_only) CHECK(c.mode(ci.id) != CriterionMode::ranker);
    }
    CHECK(default_config(to_string(p)).criteria == c.criteria);
  }
  auto perm = default_config(ProfileName::permissive);
  CHECK(perm.enabled().empty());
  CHECK_THROWS_AS(default_config(std::string_view("strict")), ConfigError);
}

TEST_CASE("round trip through the explicit form") {
  for (auto p : {ProfileName::paper_eval, ProfileName::dictionary_example, ProfileName::permissive}) {
    auto c = default_config(p);
    c.retain_suboptimal = true;
    c.top_k = 3;
    c.query.term = "fisk";
    c.query.pos = "NN";
    c.params.sensitive_topics = {"war"};
    c.at(C::proper_name).weight = 4;
    c.tags.noun_pos.insert("NOUN_X");
    auto back = validate_config(config_to_json(c));
    CHECK(back.criteria == c.criteria);
    CHECK(back.params == c.params);
    CHECK(back.tags == c.tags);
    CHECK(back.retain_suboptimal);
    CHECK(back.top_k == 3);
    CHECK(back.query.term == "fisk");
    CHECK(back.query.pos == std::optional<std::string>("NN"));
    CHECK(config_to_json(back) == config_to_json(c));
  }
}

TEST_CASE("partial documents start from the named profile") {
  auto c = validate_config({{"profile", "dictionary_example"}, {"criteria", {{"negation", {{"mode", "filter"}}}}}});
  auto base = default_config(ProfileName::dictionary_example);
  CHECK(c.mode(C::negation) == CriterionMode::filter);
  CHECK(c.mode(C::oov) == base.mode(C::oov));
  auto d = validate_config(json::object());
  CHECK(d.criteria == default_config(ProfileName::paper_eval).criteria);
  auto e = validate_config({{"criteria", {{"sent_length", {{"min_len", 3}, {"max_len", 9}}}}}});
  CHECK(e.params.min_len == 3);
  CHECK(e.params.max_len == 9);
  auto f = validate_config({{"criteria", {{"oov", {{"max_count", 2}}}}}});
  CHECK(f.params.max_count(C::oov) == 2);
}

TEST_CASE("validation collects every error") {
  json doc = {{"criteria",
               {{"foo", {{"mode", "filter"}}},
                {"interrogative", {{"mode", "ranker"}}},
                {"sent_length", {{"min_len", 30}, {"max_len", 10}}},
                {"non_alpha", {{"max_ratio", 1.5}}},
                {"negation", {{"mode", "maybe"}, {"weight", 0}}}}},
              {"top_k", 0},
              {"extra", true}};
  auto errors = errors_of(doc);
  CHECK(has(errors, "unknown criterion 'foo'"));
  CHECK(has(errors, "interrogative: binary criterion cannot be a ranker"));
  CHECK(has(errors, "min_len exceeds max_len"));
  CHECK(has(errors, "non_alpha.max_ratio"));
  CHECK(has(errors, "negation.mode"));
  CHECK(has(errors, "negation.weight"));
  CHECK(has(errors, "top_k"));
  CHECK(has(errors, "unknown field 'extra'"));
  CHECK(errors.size() >= 8);
}

TEST_CASE("type errors and unknown parameters") {
  CHECK(has(errors_of({{"retain_suboptimal", "yes"}}), "retain_suboptimal"));
  CHECK(has(errors_of({{"profile", "strict"}}), "unknown profile"));
  CHECK(has(errors_of({{"criteria", {{"oov", {{"max_ratio", 0.1}}}}}}), "unknown parameter 'max_ratio'"));
  CHECK(has(errors_of({{"criteria", {{"l2_level", {{"tolerance", 9}}}}}}), "l2_level.tolerance"));
  CHECK(has(errors_of({{"criteria", {{"term_position", {{"position", "middle"}}}}}}), "term_position.position"));
  CHECK(has(errors_of({{"tagset", {{"noun_pos", "NN"}}}}), "tagset.noun_pos"));
  CHECK(has(errors_of({{"tagset", {{"nope", json::array()}}}}), "tagset: unknown field 'nope'"));
  CHECK(has(errors_of({{"query", {{"target_level", "D1"}}}}), "query.target_level"));
  CHECK(has(errors_of({{"query", {{"max_candidates", 0}}}}), "query.max_candidates"));
  CHECK(has(errors_of({{"criteria", json::array()}}), "criteria: must be an object"));
}

TEST_CASE("query JSON") {
  SearchQuery q;
  q.term = "fisk";
  q.target_level = CefrLevel::A2;
  auto j = query_to_json(q);
  CHECK(j["term"] == "fisk");
  CHECK(j["pos"].is_null());
  CHECK(j["target_level"] == "A2");
  std::vector<std::string> errors;
  auto back = query_from_json(j, errors);
  CHECK(errors.empty());
  CHECK(back.term == "fisk");
  CHECK(back.target_level == CefrLevel::A2);
}

TEST_CASE("criteria catalog") {
  auto cat = criteria_catalog_json();
  REQUIRE(cat["criteria"].size() == 25);
  for (const auto& c : cat["criteria"]) {
    auto id = parse_criterion(c["id"].get<std::string>());
    REQUIRE(id.has_value());
    auto modes = c["modes"].get<std::vector<std::string>>();
    if (info(*id).binary_only) {
      CHECK(modes == std::vector<std::string>{"off", "filter"});
    } else {
      CHECK(modes == std::vector<std::string>{"off", "filter", "ranker"});
    }
    CHECK(c["default_mode"] == std::string(to_string(default_config(ProfileName::paper_eval).mode(*id))));
  }
  CHECK(cat["profiles"].size() == 3);
  auto sl = cat["criteria"][17];
  CHECK(sl["id"] == "sent_length");
  bool min_len = false;
  for (const auto& p : sl["params"]) min_len = min_len || (p["name"] == "min_len" && p["default"] == 6);
  CHECK(min_len);
}

TEST_CASE("shipped schema matches the generated one") {
  auto shipped = json::parse(read_text_file(std::string(HITEX_SOURCE_DIR) + "/data/config.schema.json"));
  CHECK(shipped == config_json_schema());
  const auto& props = shipped["properties"]["criteria"]["properties"];
  CHECK(props.size() == criterion_catalog().size());
  for (const auto& ci : criterion_catalog()) {
    auto modes = props[std::string(ci.name)]["properties"]["mode"]["enum"];
    CHECK(modes.size() == (ci.binary_only ? 2u : 3u));
  }
  // every key the explicit form emits is declared
  for (auto p : {ProfileName::paper_eval, ProfileName::dictionary_example, ProfileName::permissive}) {
    auto j = config_to_json(default_config(p));
    for (const auto& [k, v] : j.items()) CHECK(shipped["properties"].contains(k));
    for (const auto& [name, entry] : j["criteria"].items()) {
      for (const auto& [k, v] : entry.items()) CHECK(props[name]["properties"].contains(k));
    }
  }
}
