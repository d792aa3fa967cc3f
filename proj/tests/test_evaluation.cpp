#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <set>

#include "hitex/error.hpp"
#include "hitex/evaluation.hpp"
#include "hitex/lexicons.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hitex;
using L = CefrLevel;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }
double round1(double v) { return std::round(v * 10.0) / 10.0; }

std::string fixture_text(const std::string& name) { return read_text_file(fixture::path("tests/data/" + name)); }

// Four observers, twelve units, values 1-5; the usual worked example for alpha.
oracle::Matrix textbook() {
  using std::nullopt;
  using O = std::optional<double>;
  return {
      {O(1), O(2), O(3), O(3), O(2), O(1), O(4), O(1), O(2), nullopt, nullopt, nullopt},
      {O(1), O(2), O(3), O(3), O(2), O(2), O(4), O(1), O(2), O(5), nullopt, O(3)},
      {nullopt, O(3), O(3), O(3), O(2), O(3), O(4), O(2), O(2), O(5), O(1), nullopt},
      {O(1), O(2), O(3), O(3), O(2), O(4), O(4), O(1), O(2), O(5), O(1), nullopt},
  };
}

double column_sum(const DistanceColumn& c) { return c.percent[0] + c.percent[1] + c.percent[2] + c.percent[3]; }

}  // namespace

TEST_CASE("chance probability and ideal item difficulty") {
  auto start = std::chrono::steady_clock::now();
  double pc = chance_probability(5, 6);
  double iid = ideal_item_difficulty(0.29);
  auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(std::abs(pc - 0.29) <= 0.005);
  CHECK(std::abs(pc - (1.0 / 6 + 1.0 / 5 + 1.0 / 4 + 1.0 / 3 + 1.0 / 2) / 5) < 1e-15);
  CHECK(std::abs(iid - 0.645) <= 0.001);
  CHECK(elapsed < std::chrono::milliseconds(1));
  CHECK(chance_probability(1, 1) == 1.0);
  CHECK(chance_probability(2, 4) == doctest::Approx((0.25 + 1.0 / 3) / 2));
  CHECK(ideal_item_difficulty(0) == 0.5);
  CHECK(ideal_item_difficulty(1) == 1.0);
  CHECK_THROWS_AS(ideal_item_difficulty(1.5), Error);
  CHECK_THROWS_AS(ideal_item_difficulty(-0.1), Error);
  CHECK_THROWS_AS(chance_probability(3, 2), Error);
  CHECK_THROWS_AS(chance_probability(0, 2), Error);
  for (int n = 1; n <= 8; ++n) {
    for (int m = n; m <= 12; ++m) {
      double v = ideal_item_difficulty(chance_probability(n, m));
      CHECK(v >= 0.5);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("item difficulty fractions") {
  std::vector<ResponseRecord> r;
  for (int i = 0; i < 10; ++i) r.push_back({"s" + std::to_string(i), L::A1, "e", "1", "x", i < 6});
  for (int i = 0; i < 4; ++i) r.push_back({"s" + std::to_string(i), L::A1, "e", "2", "x", true});
  auto d = item_difficulty(r);
  CHECK(d.at({"e", "1"}).difficulty() == 0.6);
  CHECK(d.at({"e", "2"}).difficulty() == 1.0);
}

TEST_CASE("difficulty breakdown reproduces the reference values") {
  auto responses = parse_responses_csv(fixture_text("responses.csv"));
  auto items = parse_items_csv(fixture_text("items.csv"));
  auto t = difficulty_table(responses, items);
  CHECK(t.warnings.empty());

  struct Cell {
    const char* mode;
    const char* pos;
    L level;
    double value;
  };
  const Cell reference[] = {
      {"same_msd", "NN", L::A1, 0.67},  {"same_msd", "NN", L::A2, 0.83},  {"same_msd", "NN", L::B1, 0.73},
      {"same_msd", "VB", L::A1, 0.50},  {"same_msd", "VB", L::A2, 0.69},  {"same_msd", "VB", L::B1, 0.69},
      {"mixed_pos", "NN", L::A1, 0.67}, {"mixed_pos", "NN", L::A2, 0.52}, {"mixed_pos", "NN", L::B1, 0.65},
      {"mixed_pos", "VB", L::A1, 0.0},  {"mixed_pos", "VB", L::A2, 0.62}, {"mixed_pos", "VB", L::B1, 0.77},
      {"mixed_pos", "JJ", L::A1, 0.58}, {"mixed_pos", "JJ", L::A2, 0.56}, {"mixed_pos", "JJ", L::B1, 0.62},
  };
  for (const auto& c : reference) {
    INFO(c.mode << " " << c.pos << " " << to_string(c.level));
    CHECK(round2(t.cells.at(c.mode).at(c.pos).at(c.level)) == doctest::Approx(c.value));
  }
  CHECK(t.cells.at("same_msd").at("NN").at(L::A2) == doctest::Approx(5.0 / 6));

  CHECK(round2(t.pos_average.at("same_msd").at("NN")) == doctest::Approx(0.74));
  CHECK(round2(t.pos_average.at("same_msd").at("VB")) == doctest::Approx(0.63));
  CHECK(round2(t.pos_average.at("mixed_pos").at("NN")) == doctest::Approx(0.61));
  CHECK(round2(t.pos_average.at("mixed_pos").at("VB")) == doctest::Approx(0.46));
  CHECK(round2(t.pos_average.at("mixed_pos").at("JJ")) == doctest::Approx(0.59));
  const double same_levels[] = {0.59, 0.76, 0.71}, mixed_levels[] = {0.42, 0.57, 0.68};
  const L levels[] = {L::A1, L::A2, L::B1};
  for (int i = 0; i < 3; ++i) {
    CHECK(round2(t.level_average.at("same_msd").at(levels[i])) == doctest::Approx(same_levels[i]));
    CHECK(round2(t.level_average.at("mixed_pos").at(levels[i])) == doctest::Approx(mixed_levels[i]));
  }
  CHECK(round2(t.mode_average.at("same_msd")) == doctest::Approx(0.69));
  CHECK(round2(t.mode_average.at("mixed_pos")) == doctest::Approx(0.55));
  REQUIRE(t.overall.has_value());
  CHECK(round2(*t.overall) == doctest::Approx(0.62));

  // off-level students answer everything correctly, so the unfiltered average is higher
  CHECK(t.all_items_average > *t.overall);

  for (const auto& [mode, by_pos] : t.cells) {
    for (const auto& [pos, by_level] : by_pos) {
      for (const auto& [level, v] : by_level) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
  }
  auto md = to_markdown(t);
  CHECK(md.find("Overall: 0.62") != std::string::npos);
  auto j = to_json(t);
  CHECK(j["cells"]["same_msd"]["NN"]["A2"].get<double>() == doctest::Approx(5.0 / 6));
}

TEST_CASE("difficulty warnings") {
  std::vector<ResponseRecord> r{{"a", L::A1, "e1", "1", "x", true}, {"b", L::B1, "e2", "1", "x", true}};
  std::vector<ItemInfo> items{{"e2", "1", "same_msd", L::A1, "NN"}};
  auto t = difficulty_table(r, items);
  REQUIRE(t.warnings.size() == 2);
  CHECK(t.warnings[0].find("no item metadata for e1/1") != std::string::npos);
  CHECK(t.warnings[1].find("no responses at its own level") != std::string::npos);
  CHECK_FALSE(t.overall.has_value());
}

TEST_CASE("alpha on perfect agreement") {
  RatingMatrix m{{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}};
  CHECK(krippendorff_alpha(m) == 1.0);
  CHECK(krippendorff_alpha(m, AlphaMetric::interval) == 1.0);
  RatingMatrix constant{{2, 2, 2}, {2, 2, 2}};
  CHECK(krippendorff_alpha(constant) == 1.0);
  RatingMatrix lonely{{1, std::nullopt}, {std::nullopt, 2}};
  CHECK_THROWS_AS(krippendorff_alpha(lonely), Error);
}

TEST_CASE("alpha on the textbook matrix") {
  auto m = textbook();
  double nominal = krippendorff_alpha(m, AlphaMetric::nominal);
  double interval = krippendorff_alpha(m, AlphaMetric::interval);
  CHECK(std::abs(nominal - oracle::alpha_pairwise(m, false)) < 1e-9);
  CHECK(std::abs(interval - oracle::alpha_pairwise(m, true)) < 1e-9);
  // widely quoted three-decimal values for this matrix
  CHECK(std::abs(nominal - 0.743) < 0.0005);
  CHECK(std::abs(interval - 0.849) < 0.0005);
}

TEST_CASE("alpha matches the pairwise oracle on random matrices") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t raters = 2 + rng.below(4), units = 3 + rng.below(10);
    oracle::Matrix m(raters, std::vector<std::optional<double>>(units));
    for (auto& row : m) {
      for (auto& cell : row) {
        if (rng.unit() < 0.8) cell = static_cast<double>(1 + rng.below(5));
      }
    }
    for (bool interval : {false, true}) {
      double got;
      try {
        got = krippendorff_alpha(m, interval ? AlphaMetric::interval : AlphaMetric::nominal);
      } catch (const Error&) {
        continue;  // too few pairable units
      }
      CHECK(std::abs(got - oracle::alpha_pairwise(m, interval)) < 1e-9);
    }
  }
}

TEST_CASE("alpha invariances") {
  auto m = textbook();
  double base = krippendorff_alpha(m);
  // nominal relabeling
  auto relabeled = m;
  for (auto& row : relabeled) {
    for (auto& cell : row) {
      if (cell) cell = std::map<double, double>{{1, 40}, {2, 7}, {3, 13}, {4, -2}, {5, 0.5}}.at(*cell);
    }
  }
  CHECK(krippendorff_alpha(relabeled) == doctest::Approx(base).epsilon(1e-12));
  std::vector<std::size_t> perm{2, 0, 3, 1};
  oracle::Matrix permuted;
  for (auto i : perm) permuted.push_back(m[i]);
  CHECK(krippendorff_alpha(permuted) == doctest::Approx(base).epsilon(1e-12));
  CHECK(krippendorff_alpha(permuted, AlphaMetric::interval) ==
        doctest::Approx(krippendorff_alpha(m, AlphaMetric::interval)).epsilon(1e-12));
  CHECK(parse_alpha_metric("ordinal-distance") == AlphaMetric::interval);
  CHECK(parse_alpha_metric("nominal") == AlphaMetric::nominal);
  CHECK_FALSE(parse_alpha_metric("ratio").has_value());
}

TEST_CASE("spearman on monotone data") {
  std::vector<double> x{1, 2, 3, 4, 5, 6}, y{2, 4, 8, 16, 32, 64}, down{9, 7, 5, 3, 1, 0};
  CHECK(spearman_rho(x, y) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(spearman_rho(x, down) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(spearman_rho({1, 2}, {1, 2}), Error);
  CHECK_THROWS_AS(spearman_rho({1, 2, 3}, {1, 2}), Error);
  CHECK_THROWS_AS(spearman_rho({1, 1, 1}, {1, 2, 3}), Error);
}

TEST_CASE("spearman matches the brute-force oracle on tie-laden data") {
  std::vector<double> x{1, 2, 2, 3, 3, 3, 4, 5, 5, 1}, y{2, 1, 2, 2, 4, 4, 3, 5, 5, 1};
  CHECK(std::abs(spearman_rho(x, y) - oracle::brute_force_spearman(x, y)) < 1e-12);
  CHECK(average_ranks(x) == oracle::brute_force_average_ranks(x));
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 3 + rng.below(15);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.below(4));
      b[i] = static_cast<double>(rng.below(4));
    }
    double want;
    try {
      double got = spearman_rho(a, b);
      want = oracle::brute_force_spearman(a, b);
      CHECK(std::abs(got - want) < 1e-12);
      CHECK(got >= -1.0);
      CHECK(got <= 1.0);
      // strictly monotone transforms leave rho unchanged
      std::vector<double> ta(n), tb(n);
      for (std::size_t i = 0; i < n; ++i) {
        ta[i] = std::exp(a[i]);
        tb[i] = -1.0 / (b[i] + 10);
      }
      CHECK(spearman_rho(ta, tb) == doctest::Approx(got).epsilon(1e-12));
    } catch (const Error&) {
      // constant input; the oracle would divide by zero
    }
  }
}

TEST_CASE("distance columns") {
  std::vector<LevelAssignment> same{{"a", {L::A2, L::A2}, L::A2}, {"b", {L::B1, L::B1, L::B1}, L::B1}};
  CHECK(teacher_teacher_distances(same).percent[0] == 100.0);
  CHECK(teacher_system_distances(same).percent[0] == 100.0);
  std::vector<LevelAssignment> gap{{"a", {L::A1, L::B1}, std::nullopt}};
  CHECK(teacher_teacher_distances(gap).percent[2] == 100.0);
  CHECK(teacher_system_distances(gap).sentences == 0);

  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<LevelAssignment> as;
    std::size_t n = 1 + rng.below(30);
    for (std::size_t i = 0; i < n; ++i) {
      LevelAssignment a{"s" + std::to_string(i), {}, kClassifiedLevels[rng.below(5)]};
      std::size_t t = 2 + rng.below(3);
      for (std::size_t k = 0; k < t; ++k) a.teachers.push_back(kClassifiedLevels[rng.below(5)]);
      as.push_back(a);
    }
    CHECK(std::abs(column_sum(teacher_teacher_distances(as)) - 100.0) <= 0.1);
    CHECK(std::abs(column_sum(teacher_system_distances(as)) - 100.0) <= 0.1);
  }
}

TEST_CASE("constructed inputs realise a target distance column") {
  // search for the smallest sentence count whose rounded shares give 50.0 / 49.4 / 0.6 / 0.0
  int found_n = 0, c0 = 0, c1 = 0, c2 = 0;
  for (int n = 1; n <= 1000 && !found_n; ++n) {
    for (int a = 0; a <= n && !found_n; ++a) {
      for (int b = 0; a + b <= n; ++b) {
        int c = n - a - b;
        if (round1(100.0 * a / n) == 50.0 && round1(100.0 * b / n) == 49.4 && round1(100.0 * c / n) == 0.6) {
          found_n = n;
          c0 = a;
          c1 = b;
          c2 = c;
          break;
        }
      }
    }
  }
  REQUIRE(found_n > 0);
  MESSAGE("realised with " << found_n << " sentences: " << c0 << "/" << c1 << "/" << c2);
  std::vector<LevelAssignment> as;
  auto add = [&](int count, L second) {
    for (int i = 0; i < count; ++i) as.push_back({"s" + std::to_string(as.size()), {L::A2, second}, L::A2});
  };
  add(c0, L::A2);
  add(c1, L::B1);
  add(c2, L::B2);
  auto tt = teacher_teacher_distances(as);
  CHECK(tt.sentences == found_n);
  CHECK(round1(tt.percent[0]) == 50.0);
  CHECK(round1(tt.percent[1]) == 49.4);
  CHECK(round1(tt.percent[2]) == 0.6);
  CHECK(round1(tt.percent[3]) == 0.0);
  CHECK(std::abs(column_sum(tt) - 100.0) <= 0.1);
}

TEST_CASE("ratings report on the fixture") {
  auto ratings = parse_ratings_csv(fixture_text("ratings.csv"));
  auto system = parse_levels_csv(fixture_text("system_levels.csv"));
  REQUIRE(ratings.size() == 15);
  auto rep = ratings_report(ratings, system);
  REQUIRE(rep.criteria.size() == 3);
  CHECK(rep.criteria[0].name == "l2_complexity");
  CHECK(rep.criteria[0].raters == 3);
  CHECK(rep.criteria[0].average == doctest::Approx(2.8666666666666667).epsilon(1e-12));
  CHECK(rep.criteria[0].stdev == doctest::Approx(1.016530045465127).epsilon(1e-12));
  CHECK(rep.criteria[1].average == doctest::Approx(2.7333333333333334).epsilon(1e-12));
  CHECK(rep.criteria[1].stdev == doctest::Approx(0.9249624617007738).epsilon(1e-12));
  CHECK(rep.criteria[2].stdev == doctest::Approx(1.1401754250991378).epsilon(1e-12));
  CHECK(rep.ctx_suitable_share == doctest::Approx(0.6));
  CHECK(rep.ctx_half_high_share == doctest::Approx(0.6));
  CHECK(rep.system_exact_share == doctest::Approx(0.6));
  CHECK(rep.system_any_teacher_share == doctest::Approx(0.8));
  REQUIRE(rep.teacher_teacher.has_value());
  CHECK(rep.teacher_teacher->percent == std::array<double, 4>{40, 60, 0, 0});
  CHECK(rep.teacher_system->percent == std::array<double, 4>{60, 40, 0, 0});

  // independent matrix: per-rater levels with the system level filling gaps
  const std::vector<std::string> raters{"t1", "t2", "t3"}, sents{"s01", "s02", "s03", "s04", "s05"};
  oracle::Matrix m(3, std::vector<std::optional<double>>(5));
  for (const auto& r : ratings) {
    auto ri = std::find(raters.begin(), raters.end(), r.rater) - raters.begin();
    auto si = std::find(sents.begin(), sents.end(), r.sentence) - sents.begin();
    m[static_cast<std::size_t>(ri)][static_cast<std::size_t>(si)] = ordinal(r.level.value_or(system.at(r.sentence)));
  }
  REQUIRE(rep.alpha.has_value());
  CHECK(std::abs(*rep.alpha - oracle::alpha_pairwise(m, false)) < 1e-9);

  std::vector<double> l2, ovr;
  for (const auto& s : sents) {
    double a = 0, b = 0;
    for (const auto& r : ratings) {
      if (r.sentence == s) {
        a += r.l2;
        b += *r.overall;
      }
    }
    l2.push_back(a / 3);
    ovr.push_back(b / 3);
  }
  REQUIRE(rep.rho_l2_overall.has_value());
  CHECK(std::abs(*rep.rho_l2_overall - oracle::brute_force_spearman(l2, ovr)) < 1e-12);

  auto md = to_markdown(rep);
  CHECK(md.find("| l2_complexity | 3 | 2.87 | 1.02 |") != std::string::npos);
  auto j = to_json(rep);
  CHECK(j["level_distance"]["teacher_teacher"]["percent"]["1"] == 60.0);
  CHECK(j["alpha_metric"] == "nominal");
}

TEST_CASE("alpha by block averages the block values") {
  auto ratings = parse_ratings_csv(fixture_text("ratings.csv"));
  auto system = parse_levels_csv(fixture_text("system_levels.csv"));
  std::vector<RatingRecord> first(ratings.begin(), ratings.begin() + 9), second(ratings.begin() + 6, ratings.end());
  auto blocks = alpha_by_block({{"one", first}, {"two", second}}, system, AlphaMetric::nominal);
  REQUIRE(blocks.blocks.size() == 2);
  CHECK(blocks.average == doctest::Approx((blocks.blocks[0].second + blocks.blocks[1].second) / 2));
}

TEST_CASE("CSV parsing and errors") {
  std::vector<std::string> header;
  auto rows = parse_csv("a,b\n\"x, y\",\"he said \"\"hej\"\"\"\r\n\n1,2", header);
  CHECK(header == std::vector<std::string>{"a", "b"});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][0] == "x, y");
  CHECK(rows[0][1] == "he said \"hej\"");
  CHECK_THROWS_WITH_AS(parse_csv("a,b\n1\n", header), doctest::Contains("data row 1: expected 2 fields"), LoadError);
  CHECK_THROWS_WITH_AS(parse_csv("a\n\"open\n", header), doctest::Contains("unterminated"), LoadError);
  CHECK_THROWS_AS(parse_csv("", header), LoadError);
  CHECK_THROWS_WITH_AS(parse_ratings_csv("rater,sentence,l2,ctx\nt1,s1,5,2\n"),
                       doctest::Contains("l2 must be an integer 1-4"), LoadError);
  CHECK_THROWS_WITH_AS(parse_ratings_csv("rater,sentence,l2\nt1,s1,3\n"), doctest::Contains("missing required column 'ctx'"),
                       LoadError);
  CHECK_THROWS_WITH_AS(parse_responses_csv("student,level,exercise,item,answer,correct\na,A1,e,1,x,maybe\n"),
                       doctest::Contains("correct must be"), LoadError);
  CHECK_THROWS_WITH_AS(parse_items_csv("exercise,item,mode,level,pos\ne,1,same_msd,Z1,NN\n"),
                       doctest::Contains("unknown CEFR level 'Z1'"), LoadError);
  auto ok = parse_ratings_csv("rater,sentence,l2,ctx\nt1,s1,3,2\n");
  CHECK_FALSE(ok[0].overall.has_value());
  CHECK_FALSE(ok[0].level.has_value());
}
