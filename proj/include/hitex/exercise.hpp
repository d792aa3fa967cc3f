#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hitex/cefr.hpp"
#include "hitex/corpus.hpp"
#include "hitex/lexicons.hpp"
#include "hitex/ranking.hpp"
#include "hitex/tagset.hpp"

namespace hitex {

inline constexpr std::string_view kGap = "_____";

enum class ExerciseMode { same_msd, mixed_pos };

std::string_view to_string(ExerciseMode mode);
std::optional<ExerciseMode> parse_exercise_mode(std::string_view text);

struct ExerciseItem {
  std::string sentence_id;
  std::string gapped;  // surface text with kGap at the gap
  int gap_index = 0;   // 1-based token index
  std::string answer_form;
  std::string answer_lemma;
  std::string pos;
  std::string msd;
};

// The gapped text with the answer put back.
std::string restore(const ExerciseItem& item);

struct Exercise {
  std::string id;
  ExerciseMode mode = ExerciseMode::same_msd;
  CefrLevel level = CefrLevel::B1;
  std::vector<ExerciseItem> items;
  std::vector<std::string> word_bank;  // shuffled answers plus distractors
  std::vector<std::string> distractors;
  std::uint64_t seed = 0;
};

struct DistractorCandidate {
  std::string form;
  std::string lemma;
  std::string pos;
  std::string msd;
  std::optional<CefrLevel> level;
};

struct DistractorPool {
  std::vector<DistractorCandidate> entries;
};

// Lexical corpus tokens whose (lemma, POS) has a KELLY level.
DistractorPool distractor_pool_from_corpus(const std::vector<AnnotatedSentence>& corpus, const Lexicons& lexicons,
                                           const TagsetConfig& tags);
// TSV with columns form, lemma, pos, msd and optional level.
DistractorPool parse_distractor_pool(std::string_view tsv);
DistractorPool load_distractor_pool(const std::string& path);

// Manual distractors: TSV with columns exercise and distractor.
std::map<std::string, std::string> parse_distractor_overrides(std::string_view tsv);

struct ExerciseOptions {
  int items = 5;
  int distractors = 1;
  std::string id;  // defaults to "<level>-<mode>-<seed>"
  std::optional<std::string> distractor_override;
};

// Picks gaps from `results` in rank order (one per lemma and form). In same_msd
// mode the first POS+msd group reaching `items` sentences wins. Throws Error
// "found N of 5 ..." when too few compatible sentences exist.
Exercise build_exercise(const std::vector<SelectionResult>& results, ExerciseMode mode, CefrLevel level,
                        const DistractorPool& pool, std::uint64_t seed, const ExerciseOptions& options = {});

struct WorksheetSlot {
  CefrLevel level;
  ExerciseMode mode;
};

// 5 target + 2 below + 2 above, 5 same_msd + 4 mixed_pos. Without a level
// below or above (A1, C1) that pair is dropped.
std::vector<WorksheetSlot> worksheet_plan(CefrLevel target);

struct Worksheet {
  CefrLevel target = CefrLevel::B1;
  std::uint64_t seed = 0;
  std::vector<Exercise> exercises;
  std::map<CefrLevel, int> level_counts;
};

// Each exercise consumes its sentences so no seed sentence repeats within a level.
Worksheet build_worksheet(const std::map<CefrLevel, std::vector<SelectionResult>>& per_level, CefrLevel target,
                          const DistractorPool& pool, std::uint64_t seed,
                          const std::map<std::string, std::string>& overrides = {});

// Best-ranked sentence per term, with the query retargeted to `level`.
std::vector<SelectionResult> seed_results(const std::vector<AnnotatedSentence>& corpus, SelectionConfig config,
                                          CefrLevel level, const std::vector<std::string>& terms,
                                          const Lexicons& lexicons, const CefrModel* model);

nlohmann::json to_json(const Exercise& e, bool with_answers = true);
nlohmann::json to_json(const Worksheet& w, bool with_answers = true);
nlohmann::json answer_key_json(const Worksheet& w);
std::string render_text(const Exercise& e);
std::string render_text(const Worksheet& w);
std::string render_answer_key(const Worksheet& w);

}  // namespace hitex
