#include "hitex/exercise.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "hitex/error.hpp"
#include "hitex/rng.hpp"
#include "hitex/utf8.hpp"

namespace hitex {

using nlohmann::json;

namespace {

struct Candidate {
  const SelectionResult* result;
  const Token* gap;
};

// The span token whose head lies outside the span, else the first one.
const Token& span_head(const AnnotatedSentence& s, const Span& span) {
  for (int i = span.first; i <= span.last; ++i) {
    const Token& t = s.token(i);
    if (!span.contains(t.head)) return t;
  }
  return s.token(span.first);
}

// Keeps candidates whose lemma and form are new to the selection.
class Distinct {
 public:
  bool admit(const Token& t) {
    auto lemma = lookup_key(t);
    auto form = utf8::fold_case(t.form);
    if (lemmas_.contains(lemma) || forms_.contains(form)) return false;
    lemmas_.insert(lemma);
    forms_.insert(form);
    return true;
  }

 private:
  std::set<std::string> lemmas_;
  std::set<std::string> forms_;
};

ExerciseItem make_item(const Candidate& c) {
  const auto& s = c.result->sentence;
  std::vector<std::string> forms;
  forms.reserve(s.tokens.size());
  for (const auto& t : s.tokens) forms.push_back(t.index == c.gap->index ? std::string(kGap) : t.form);
  return {s.id, surface_text(forms), c.gap->index, c.gap->form, lookup_key(*c.gap), c.gap->pos, c.gap->msd};
}

std::string describe_group(const Token& t) { return "POS " + t.pos + " msd '" + t.msd + "'"; }

std::vector<Candidate> pick_same_msd(const std::vector<Candidate>& all, int n, std::string& shortage) {
  std::map<std::pair<std::string, std::string>, std::pair<std::vector<Candidate>, Distinct>> groups;
  for (const auto& c : all) {
    auto& [members, distinct] = groups[{c.gap->pos, c.gap->msd}];
    if (!distinct.admit(*c.gap)) continue;
    members.push_back(c);
    if (static_cast<int>(members.size()) == n) return members;
  }
  std::size_t best = 0;
  std::string where = "";
  for (const auto& [key, group] : groups) {
    if (group.first.size() > best) {
      best = group.first.size();
      where = " (largest group: " + describe_group(*group.first.front().gap) + ")";
    }
  }
  shortage = "found " + std::to_string(best) + " of " + std::to_string(n) +
             " sentences whose gaps share POS and msd" + where;
  return {};
}

std::vector<Candidate> pick_mixed(const std::vector<Candidate>& all, int n, std::string& shortage) {
  std::vector<Candidate> out;
  Distinct distinct;
  for (const auto& c : all) {
    if (!distinct.admit(*c.gap)) continue;
    out.push_back(c);
    if (static_cast<int>(out.size()) == n) return out;
  }
  shortage = "found " + std::to_string(out.size()) + " of " + std::to_string(n) + " sentences with distinct gap words";
  return {};
}

}  // namespace

std::string_view to_string(ExerciseMode mode) { return mode == ExerciseMode::same_msd ? "same_msd" : "mixed_pos"; }

std::optional<ExerciseMode> parse_exercise_mode(std::string_view text) {
  if (text == "same_msd") return ExerciseMode::same_msd;
  if (text == "mixed_pos") return ExerciseMode::mixed_pos;
  return std::nullopt;
}

std::string restore(const ExerciseItem& item) {
  std::string out = item.gapped;
  auto at = out.find(kGap);
  if (at != std::string::npos) out.replace(at, kGap.size(), item.answer_form);
  return out;
}

DistractorPool distractor_pool_from_corpus(const std::vector<AnnotatedSentence>& corpus, const Lexicons& lexicons,
                                           const TagsetConfig& tags) {
  DistractorPool pool;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& s : corpus) {
    for (const auto& t : s.tokens) {
      if (!t.lemma || !tags.is_lexical(t) || !utf8::has_alpha(t.form)) continue;
      auto level = lexicons.kelly_level(*t.lemma, t.pos);
      if (!level) continue;
      if (!seen.insert({utf8::fold_case(t.form), t.pos, t.msd}).second) continue;
      pool.entries.push_back({t.form, *t.lemma, t.pos, t.msd, level});
    }
  }
  return pool;
}

DistractorPool parse_distractor_pool(std::string_view tsv) {
  auto table = parse_tsv(tsv);
  auto form = table.column("form"), lemma = table.column("lemma"), pos = table.column("pos"),
       msd = table.column("msd");
  auto level = table.find_column("level");
  DistractorPool pool;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    DistractorCandidate c{row[form], row[lemma], row[pos], row[msd] == "_" ? "" : row[msd], std::nullopt};
    if (level && !row[*level].empty() && row[*level] != "_") {
      c.level = parse_cefr(row[*level]);
      if (!c.level) {
        throw LoadError("line " + std::to_string(table.row_lines[r]) + ": unknown level '" + row[*level] + "'");
      }
    }
    pool.entries.push_back(std::move(c));
  }
  return pool;
}

DistractorPool load_distractor_pool(const std::string& path) {
  try {
    return parse_distractor_pool(read_text_file(path));
  } catch (const LoadError& e) {
    throw LoadError(path + ": " + e.what());
  }
}

std::map<std::string, std::string> parse_distractor_overrides(std::string_view tsv) {
  auto table = parse_tsv(tsv);
  auto ex = table.column("exercise"), d = table.column("distractor");
  std::map<std::string, std::string> out;
  for (const auto& row : table.rows) out[row[ex]] = row[d];
  return out;
}

Exercise build_exercise(const std::vector<SelectionResult>& results, ExerciseMode mode, CefrLevel level,
                        const DistractorPool& pool, std::uint64_t seed, const ExerciseOptions& options) {
  if (options.items < 1) throw Error("an exercise needs at least one item");
  if (options.distractors < 0) throw Error("distractor count must not be negative");

  std::vector<Candidate> candidates;
  for (const auto& r : results) {
    if (r.sentence.match_spans.empty()) continue;
    candidates.push_back({&r, &span_head(r.sentence, r.sentence.match_spans.front())});
  }

  std::string shortage;
  auto chosen = mode == ExerciseMode::same_msd ? pick_same_msd(candidates, options.items, shortage)
                                               : pick_mixed(candidates, options.items, shortage);
  if (chosen.empty()) throw Error(shortage);

  Exercise ex;
  ex.mode = mode;
  ex.level = level;
  ex.seed = seed;
  ex.id = options.id.empty() ? std::string(to_string(level)) + "-" + std::string(to_string(mode)) + "-" +
                                   std::to_string(seed)
                             : options.id;
  std::set<std::string> gap_lemmas, bank_forms;
  for (const auto& c : chosen) {
    ex.items.push_back(make_item(c));
    gap_lemmas.insert(ex.items.back().answer_lemma);
    bank_forms.insert(utf8::fold_case(ex.items.back().answer_form));
  }

  Rng rng(seed);
  if (options.distractor_override) {
    if (bank_forms.contains(utf8::fold_case(*options.distractor_override))) {
      throw Error("manual distractor '" + *options.distractor_override + "' duplicates an answer");
    }
    ex.distractors.push_back(*options.distractor_override);
  } else if (options.distractors > 0) {
    const Token& model = *chosen.front().gap;
    std::vector<const DistractorCandidate*> eligible;
    std::set<std::string> eligible_forms;
    for (const auto& d : pool.entries) {
      if (d.level && *d.level != level) continue;
      if (gap_lemmas.contains(d.lemma) || bank_forms.contains(utf8::fold_case(d.form))) continue;
      if (mode == ExerciseMode::same_msd && (d.pos != model.pos || d.msd != model.msd)) continue;
      if (!eligible_forms.insert(utf8::fold_case(d.form)).second) continue;
      eligible.push_back(&d);
    }
    if (static_cast<int>(eligible.size()) < options.distractors) {
      std::string what = mode == ExerciseMode::same_msd ? " with " + describe_group(model) : "";
      throw Error("found " + std::to_string(eligible.size()) + " of " + std::to_string(options.distractors) +
                  " distractors at level " + std::string(to_string(level)) + what);
    }
    for (int k = 0; k < options.distractors; ++k) {
      auto j = static_cast<std::size_t>(rng.below(eligible.size()));
      ex.distractors.push_back(eligible[j]->form);
      eligible.erase(eligible.begin() + static_cast<std::ptrdiff_t>(j));
    }
  }

  for (const auto& item : ex.items) ex.word_bank.push_back(item.answer_form);
  for (const auto& d : ex.distractors) ex.word_bank.push_back(d);
  rng.shuffle(ex.word_bank);
  return ex;
}

std::vector<WorksheetSlot> worksheet_plan(CefrLevel target) {
  using enum ExerciseMode;
  std::vector<WorksheetSlot> plan{{target, same_msd}, {target, same_msd}, {target, same_msd},
                                  {target, mixed_pos}, {target, mixed_pos}};
  for (int delta : {-1, 1}) {
    auto level = shift_level(target, delta);
    if (!level || ordinal(*level) > ordinal(CefrLevel::C1)) continue;
    plan.push_back({*level, same_msd});
    plan.push_back({*level, mixed_pos});
  }
  return plan;
}

Worksheet build_worksheet(const std::map<CefrLevel, std::vector<SelectionResult>>& per_level, CefrLevel target,
                          const DistractorPool& pool, std::uint64_t seed,
                          const std::map<std::string, std::string>& overrides) {
  Worksheet ws;
  ws.target = target;
  ws.seed = seed;
  std::map<CefrLevel, std::vector<SelectionResult>> remaining = per_level;
  auto plan = worksheet_plan(target);
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const auto& slot = plan[k];
    std::string where = "level " + std::string(to_string(slot.level)) + ", " + std::string(to_string(slot.mode));
    auto it = remaining.find(slot.level);
    if (it == remaining.end()) throw Error(where + ": no selection results supplied");

    ExerciseOptions options;
    options.id = std::string(to_string(target)) + "-" + std::to_string(k + 1);
    if (auto o = overrides.find(options.id); o != overrides.end()) options.distractor_override = o->second;
    Exercise ex;
    try {
      ex = build_exercise(it->second, slot.mode, slot.level, pool, mix_seed(seed, k), options);
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    std::set<std::string> used;
    for (const auto& item : ex.items) used.insert(item.sentence_id);
    std::erase_if(it->second, [&](const SelectionResult& r) { return used.contains(r.id()); });
    ws.level_counts[slot.level] += 1;
    ws.exercises.push_back(std::move(ex));
  }
  return ws;
}

std::vector<SelectionResult> seed_results(const std::vector<AnnotatedSentence>& corpus, SelectionConfig config,
                                          CefrLevel level, const std::vector<std::string>& terms,
                                          const Lexicons& lexicons, const CefrModel* model) {
  config.query.target_level = level;
  config.top_k.reset();
  std::vector<SelectionResult> out;
  for (auto& [term, best] : select_best_per_term(corpus, config, terms, lexicons, model)) {
    if (best) out.push_back(std::move(*best));
  }
  return out;
}

json to_json(const Exercise& e, bool with_answers) {
  json items = json::array();
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    const auto& it = e.items[i];
    json j{{"number", i + 1}, {"sentence_id", it.sentence_id}, {"text", it.gapped}, {"gap_index", it.gap_index}};
    if (with_answers) {
      j["answer"] = {{"form", it.answer_form}, {"lemma", it.answer_lemma}};
      j["pos"] = it.pos;
      j["msd"] = it.msd;
    }
    items.push_back(j);
  }
  json out{{"id", e.id},          {"mode", std::string(to_string(e.mode))}, {"level", std::string(to_string(e.level))},
           {"seed", e.seed},      {"items", items},                         {"word_bank", e.word_bank}};
  if (with_answers) out["distractors"] = e.distractors;
  return out;
}

json to_json(const Worksheet& w, bool with_answers) {
  json exercises = json::array();
  for (const auto& e : w.exercises) exercises.push_back(to_json(e, with_answers));
  json counts = json::object();
  for (const auto& [level, n] : w.level_counts) counts[std::string(to_string(level))] = n;
  int same = 0;
  for (const auto& e : w.exercises) same += e.mode == ExerciseMode::same_msd;
  return {{"target_level", std::string(to_string(w.target))},
          {"seed", w.seed},
          {"level_counts", counts},
          {"mode_counts", {{"same_msd", same}, {"mixed_pos", static_cast<int>(w.exercises.size()) - same}}},
          {"exercises", exercises}};
}

json answer_key_json(const Worksheet& w) {
  json key = json::object();
  for (const auto& e : w.exercises) {
    json answers = json::array();
    for (const auto& it : e.items) answers.push_back(it.answer_form);
    key[e.id] = {{"answers", answers}, {"distractors", e.distractors}};
  }
  return key;
}

std::string render_text(const Exercise& e) {
  std::ostringstream out;
  out << "Exercise " << e.id << " (" << to_string(e.level) << ", " << to_string(e.mode) << ")\n";
  out << "Word bank:";
  for (const auto& w : e.word_bank) out << "  " << w;
  out << "\n";
  for (std::size_t i = 0; i < e.items.size(); ++i) out << "  " << i + 1 << ". " << e.items[i].gapped << "\n";
  return out.str();
}

std::string render_text(const Worksheet& w) {
  std::string out = "Worksheet " + std::string(to_string(w.target)) + "\n\n";
  for (const auto& e : w.exercises) out += render_text(e) + "\n";
  return out;
}

std::string render_answer_key(const Worksheet& w) {
  std::ostringstream out;
  for (const auto& e : w.exercises) {
    out << e.id << ":";
    for (std::size_t i = 0; i < e.items.size(); ++i) out << " " << i + 1 << "." << e.items[i].answer_form;
    if (!e.distractors.empty()) {
      out << "  (distractor:";
      for (const auto& d : e.distractors) out << " " << d;
      out << ")";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace hitex
