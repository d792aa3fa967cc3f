#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hitex/cefr.hpp"

namespace hitex {

// One teacher's judgement of one sentence on the 1-4 scale.
struct RatingRecord {
  std::string rater;
  std::string sentence;
  int l2 = 0;
  int ctx = 0;
  std::optional<int> overall;
  std::optional<CefrLevel> level;  // suggested level, if the teacher disagreed
};

struct ResponseRecord {
  std::string student;
  CefrLevel level = CefrLevel::A1;
  std::string exercise;
  std::string item;
  std::string answer;
  bool correct = false;
};

// Item metadata for the difficulty breakdown.
struct ItemInfo {
  std::string exercise;
  std::string item;
  std::string mode;  // same_msd | mixed_pos
  CefrLevel level = CefrLevel::A1;
  std::string pos;
};

// Comma-separated with an optional double-quoted field syntax. Header required.
std::vector<std::vector<std::string>> parse_csv(std::string_view text, std::vector<std::string>& header);

// Columns rater,sentence,l2,ctx,overall,level. Throws LoadError with a line number.
std::vector<RatingRecord> parse_ratings_csv(std::string_view text);
// Columns student,level,exercise,item,answer,correct.
std::vector<ResponseRecord> parse_responses_csv(std::string_view text);
// Columns exercise,item,mode,level,pos.
std::vector<ItemInfo> parse_items_csv(std::string_view text);
// sentence,level
std::map<std::string, CefrLevel> parse_levels_csv(std::string_view text);

struct ItemStats {
  int correct = 0;
  int total = 0;
  double difficulty() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

using ItemKey = std::pair<std::string, std::string>;  // (exercise, item)

// Fraction of correct responses per item.
std::map<ItemKey, ItemStats> item_difficulty(const std::vector<ResponseRecord>& responses);

// Averages of per-item difficulty by mode x POS x level, counting only
// responses from students at the item's level. Row, column and mode averages
// weight every populated cell once; overall is the mean of the mode averages.
struct DifficultyTable {
  std::map<std::string, std::map<std::string, std::map<CefrLevel, double>>> cells;  // mode -> pos -> level
  std::map<std::string, std::map<std::string, double>> pos_average;                // mode -> pos
  std::map<std::string, std::map<CefrLevel, double>> level_average;                // mode -> level
  std::map<std::string, double> mode_average;
  std::optional<double> overall;
  double all_items_average = 0.0;  // over every item, any student
  std::vector<std::string> warnings;
};

DifficultyTable difficulty_table(const std::vector<ResponseRecord>& responses, const std::vector<ItemInfo>& items);

// P_C + (1 - P_C) / 2
double ideal_item_difficulty(double p_chance);
// Mean of 1/(n_options - i + 1) over items i = 1..n_items.
double chance_probability(int n_items, int n_options);

enum class AlphaMetric { nominal, interval };

std::string_view to_string(AlphaMetric m);
std::optional<AlphaMetric> parse_alpha_metric(std::string_view text);

// Rows are raters, columns units; std::nullopt marks a missing rating.
using RatingMatrix = std::vector<std::vector<std::optional<double>>>;

// Coincidence-matrix Krippendorff alpha. Units with fewer than two ratings
// are dropped. When expected disagreement is zero alpha is 1.
double krippendorff_alpha(const RatingMatrix& ratings, AlphaMetric metric = AlphaMetric::nominal);

// Pearson correlation of average ranks.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);
std::vector<double> average_ranks(const std::vector<double>& values);

// Percentages of sentences whose rounded average pairwise level distance is
// 0, 1, 2, >=3. Sentences without a pair are skipped.
struct DistanceColumn {
  std::array<double, 4> percent{};
  int sentences = 0;
};

struct LevelAssignment {
  std::string sentence;
  std::vector<CefrLevel> teachers;
  std::optional<CefrLevel> system;
};

DistanceColumn teacher_teacher_distances(const std::vector<LevelAssignment>& assignments);
DistanceColumn teacher_system_distances(const std::vector<LevelAssignment>& assignments);

// Teacher levels per sentence; a rating without a suggested level accepts the system level.
std::vector<LevelAssignment> level_assignments(const std::vector<RatingRecord>& ratings,
                                               const std::map<std::string, CefrLevel>& system_levels);

struct RatingsReport {
  struct Criterion {
    std::string name;
    int raters = 0;
    double average = 0.0;
    double stdev = 0.0;
  };
  std::vector<Criterion> criteria;
  double threshold = 2.5;
  double ctx_suitable_share = 0.0;       // sentences with mean ctx > threshold
  double ctx_half_high_share = 0.0;      // 3 or 4 from at least half of the raters
  std::optional<double> alpha;
  AlphaMetric metric = AlphaMetric::nominal;
  std::optional<double> rho_l2_overall;
  std::optional<double> rho_ctx_overall;
  std::optional<DistanceColumn> teacher_teacher;
  std::optional<DistanceColumn> teacher_system;
  std::optional<double> system_exact_share;     // system == rounded mean teacher level
  std::optional<double> system_any_teacher_share;
  std::vector<std::string> warnings;
};

RatingsReport ratings_report(const std::vector<RatingRecord>& ratings,
                             const std::map<std::string, CefrLevel>& system_levels, double threshold = 2.5,
                             AlphaMetric metric = AlphaMetric::nominal);

// Per-block alpha plus the block average.
struct AlphaBlocks {
  std::vector<std::pair<std::string, double>> blocks;
  double average = 0.0;
};
AlphaBlocks alpha_by_block(const std::vector<std::pair<std::string, std::vector<RatingRecord>>>& blocks,
                           const std::map<std::string, CefrLevel>& system_levels, AlphaMetric metric);

// Rater x sentence matrix of CEFR ordinals.
RatingMatrix level_matrix(const std::vector<RatingRecord>& ratings,
                          const std::map<std::string, CefrLevel>& system_levels);

nlohmann::json to_json(const DistanceColumn& c);
nlohmann::json to_json(const RatingsReport& r);
nlohmann::json to_json(const DifficultyTable& t);
std::string to_markdown(const RatingsReport& r);
std::string to_markdown(const DifficultyTable& t);

}  // namespace hitex
