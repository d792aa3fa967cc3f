#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "hitex/cefr.hpp"
#include "hitex/tagset.hpp"

namespace hitex {

struct KellyEntry {
  std::string lemma;
  std::string pos;
  CefrLevel level = CefrLevel::A1;
  double log_freq = 0.0;
};

struct SvalexEntry {
  std::string lemma;
  std::string pos;
  std::map<CefrLevel, double> freq_per_level;  // A1..C1
};

enum class LmiRelation { subj, obj, attr };

std::string_view to_string(LmiRelation relation);
std::optional<LmiRelation> parse_lmi_relation(std::string_view text);

struct LmiEntry {
  std::string head_lemma;
  LmiRelation relation = LmiRelation::obj;
  std::string dep_lemma;
  double score = 0.0;
};

inline constexpr double kMinLmiScore = 50.0;

// Keyed by (lemma, pos) with an optional (lemma, any POS) fallback that picks
// the first entry loaded for the lemma.
template <typename Entry>
class PosKeyedStore {
 public:
  void insert(Entry entry, std::vector<std::string>& warnings) {
    auto key = std::make_pair(entry.lemma, entry.pos);
    if (by_key_.contains(key)) {
      warnings.push_back("duplicate entry (" + entry.lemma + ", " + entry.pos + "); last one wins");
    } else {
      by_lemma_.try_emplace(key.first, key);
    }
    by_key_[key] = std::move(entry);
  }

  const Entry* find(std::string_view lemma, std::string_view pos, bool pos_fallback = true) const {
    auto it = by_key_.find(std::make_pair(std::string(lemma), std::string(pos)));
    if (it != by_key_.end()) return &it->second;
    if (!pos_fallback) return nullptr;
    auto lit = by_lemma_.find(std::string(lemma));
    if (lit == by_lemma_.end()) return nullptr;
    return &by_key_.at(lit->second);
  }

  std::size_t size() const { return by_key_.size(); }
  bool empty() const { return by_key_.empty(); }

 private:
  std::map<std::pair<std::string, std::string>, Entry> by_key_;
  std::map<std::string, std::pair<std::string, std::string>> by_lemma_;
};

using KellyStore = PosKeyedStore<KellyEntry>;
using SvalexStore = PosKeyedStore<SvalexEntry>;

class LmiStore {
 public:
  // Entries below kMinLmiScore are dropped with a warning.
  void insert(LmiEntry entry, std::vector<std::string>& warnings);
  std::optional<double> score(std::string_view head, LmiRelation relation, std::string_view dep) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t rejected() const { return rejected_; }

 private:
  std::map<std::tuple<std::string, LmiRelation, std::string>, double> entries_;
  std::size_t rejected_ = 0;
};

struct AuxLists {
  std::map<std::string, std::set<std::string>> sensitive;  // lemma -> topics
  TagSet anaphoric_adverbs;
  TagSet speaking_verbs;
  std::vector<std::pair<std::string, std::string>> paired_conjunctions;
  std::map<std::string, int, std::less<>> sense_counts;

  // Unknown lemmas count as having one sense.
  int senses(std::string_view lemma) const;
};

enum class AuxKind { sensitive, anaphoric_adverbs, speaking_verbs, paired_conjunctions, sense_counts };

std::optional<AuxKind> parse_aux_kind(std::string_view text);

class Lexicons {
 public:
  KellyStore kelly;
  SvalexStore svalex;
  LmiStore lmi;
  AuxLists aux;
  bool pos_fallback = true;
  std::vector<std::string> warnings;

  std::optional<CefrLevel> kelly_level(std::string_view lemma, std::string_view pos) const;
  std::optional<double> kelly_log_freq(std::string_view lemma, std::string_view pos) const;
  std::optional<double> svalex_freq(std::string_view lemma, std::string_view pos, CefrLevel level) const;
  bool in_svalex(std::string_view lemma, std::string_view pos) const;
  std::optional<double> lmi_score(std::string_view head, LmiRelation relation, std::string_view dep) const {
    return lmi.score(head, relation, dep);
  }

  // Parse TSV text (header row first). Throw LoadError naming a missing
  // column or a bad row.
  void load_kelly_text(std::string_view text);
  void load_svalex_text(std::string_view text);
  void load_lmi_text(std::string_view text);
  void load_aux_text(AuxKind kind, std::string_view text);

  void load_kelly(const std::string& path);
  void load_svalex(const std::string& path);
  void load_lmi(const std::string& path);
  void load_aux(AuxKind kind, const std::string& path);
};

// A TSV table keyed by header names.
struct TsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;  // 1-based source line per row

  std::size_t column(std::string_view name) const;  // throws LoadError naming the column
  std::optional<std::size_t> find_column(std::string_view name) const;
};

TsvTable parse_tsv(std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace hitex
