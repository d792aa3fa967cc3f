#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "hitex/criteria.hpp"
#include "hitex/error.hpp"
#include "golden_criteria.hpp"
#include "support.hpp"

using namespace hitex;
using nlohmann::json;

using namespace golden_criteria;

TEST_CASE("golden criterion values") {
  const auto& cases = golden()["cases"];
  REQUIRE(cases.size() >= 72);
  CHECK(failures().empty());
  std::size_t n = 0;
  for (const auto& c : cases) {
    ++n;
    const std::string name = c["criterion"];
    auto id = parse_criterion(name);
    REQUIRE_MESSAGE(id.has_value(), name);
    auto s = sentence_for(c, n);
    auto q = query_for(c);
    s.match_spans = find_matches(s, q);
    auto params = params_for(c, *id);
    TagsetConfig tags;
    CriterionContext ctx{q, params, tags, fixture::lexicons()};
    auto v = evaluate_criterion(*id, s, ctx);

    INFO(name << " / " << c["kind"].get<std::string>() << " / " << c["note"].get<std::string>() << " on " << s.id);
    const auto& e = c["expect"];
    CHECK(v.id == *id);
    CHECK_MESSAGE(same_value(v.value, e["value"].get<double>()), "value " << v.value);
    CHECK(v.triggered == e["triggered"].get<bool>());
    CHECK(v.evidence == e["evidence"].get<std::vector<int>>());
  }
}

TEST_CASE("each rule-based criterion has trigger, clear and edge cases") {
  std::map<std::string, std::set<std::string>> kinds;
  std::map<std::string, int> counts;
  for (const auto& c : golden()["cases"]) {
    kinds[c["criterion"]].insert(c["kind"]);
    ++counts[c["criterion"]];
  }
  int covered = 0;
  for (const auto& info : criterion_catalog()) {
    if (info.id == CriterionId::l2_level) continue;
    std::string name(info.name);
    INFO(name);
    CHECK(counts[name] >= 3);
    CHECK(kinds[name] == std::set<std::string>{"clear", "edge", "trigger"});
    ++covered;
  }
  CHECK(covered == 24);
}

TEST_CASE("group evaluators agree with single-criterion evaluation") {
  const auto& lex = fixture::lexicons();
  TagsetConfig tags;
  CriteriaParams params;
  SearchQuery q;
  q.term = "fisk";
  q.target_level = CefrLevel::A1;
  for (const auto& base : fixture::corpus()) {
    auto s = base;
    s.match_spans = find_matches(s, q);
    CriterionContext ctx{q, params, tags, lex};
    std::vector<CriterionValue> all;
    for (auto part : {eval_search_term(s, q, params, tags), eval_wellformedness(s, params, tags),
                      eval_context_independence(s, params, tags, lex.aux), eval_structural(s, params, tags, lex.aux),
                      eval_lexical(s, q, params, tags, lex)}) {
      all.insert(all.end(), part.begin(), part.end());
    }
    CHECK(all.size() == 24);
    for (const auto& v : all) CHECK(evaluate_criterion(v.id, s, ctx) == v);
  }
}

TEST_CASE("count criteria report value equal to evidence size") {
  const auto& lex = fixture::lexicons();
  TagsetConfig tags;
  CriteriaParams params;
  SearchQuery q;
  q.term = "fisk";
  for (const auto& base : fixture::corpus()) {
    auto s = base;
    s.match_spans = find_matches(s, q);
    CriterionContext ctx{q, params, tags, lex};
    for (const auto& info : criterion_catalog()) {
      if (!info.count) continue;
      auto v = evaluate_criterion(info.id, s, ctx);
      CHECK(v.value == static_cast<double>(v.evidence.size()));
      CHECK(v.triggered == (v.value > params.max_count(info.id)));
      CHECK(std::is_sorted(v.evidence.begin(), v.evidence.end()));
    }
  }
}

TEST_CASE("catalog and names") {
  const auto& cat = criterion_catalog();
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(cat[i].number == static_cast<int>(i) + 1);
    CHECK(parse_criterion(cat[i].name) == cat[i].id);
    CHECK(to_string(cat[i].id) == cat[i].name);
  }
  CHECK_FALSE(parse_criterion("foo").has_value());
  CHECK(info(CriterionId::typicality).positive);
  CHECK(info(CriterionId::word_freq).positive);
  CHECK_FALSE(info(CriterionId::proper_name).positive);
}

TEST_CASE("l2_level cannot be evaluated without a classifier") {
  SearchQuery q;
  q.term = "fisk";
  CriteriaParams params;
  TagsetConfig tags;
  CriterionContext ctx{q, params, tags, fixture::lexicons()};
  CHECK_THROWS_AS(evaluate_criterion(CriterionId::l2_level, fixture::sentence("s01"), ctx), Error);
}

TEST_CASE("empty sentences are rejected") {
  AnnotatedSentence s;
  s.id = "empty";
  CriteriaParams params;
  TagsetConfig tags;
  CHECK_THROWS_AS(eval_wellformedness(s, params, tags), Error);
}

TEST_CASE("clause counting") {
  TagsetConfig tags;
  CHECK(clause_count(fixture::sentence("s01"), tags) == 1);
  CHECK(clause_count(fixture::sentence("s46"), tags) == 2);
  CHECK(clause_count(fixture::sentence("s50"), tags) == 2);
  CHECK(clause_count(fixture::sentence("s14"), tags) == 0);
}
