#include "hitex/lexicons.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "hitex/error.hpp"

namespace hitex {

namespace {

double parse_real(const std::string& text, std::size_t line, std::string_view column) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw LoadError("line " + std::to_string(line) + ": column '" + std::string(column) +
                    "' is not a number: '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::string_view to_string(LmiRelation relation) {
  switch (relation) {
    case LmiRelation::subj: return "subj";
    case LmiRelation::obj: return "obj";
    case LmiRelation::attr: return "attr";
  }
  return "?";
}

std::optional<LmiRelation> parse_lmi_relation(std::string_view text) {
  if (text == "subj") return LmiRelation::subj;
  if (text == "obj") return LmiRelation::obj;
  if (text == "attr") return LmiRelation::attr;
  return std::nullopt;
}

void LmiStore::insert(LmiEntry entry, std::vector<std::string>& warnings) {
  if (!(entry.score >= kMinLmiScore)) {
    ++rejected_;
    warnings.push_back("LMI pair (" + entry.head_lemma + ", " + std::string(to_string(entry.relation)) + ", " +
                       entry.dep_lemma + ") below threshold, dropped");
    return;
  }
  auto key = std::make_tuple(entry.head_lemma, entry.relation, entry.dep_lemma);
  if (entries_.contains(key)) {
    warnings.push_back("duplicate LMI pair (" + entry.head_lemma + ", " + std::string(to_string(entry.relation)) +
                       ", " + entry.dep_lemma + "); last one wins");
  }
  entries_[key] = entry.score;
}

std::optional<double> LmiStore::score(std::string_view head, LmiRelation relation, std::string_view dep) const {
  auto it = entries_.find(std::make_tuple(std::string(head), relation, std::string(dep)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

int AuxLists::senses(std::string_view lemma) const {
  auto it = sense_counts.find(lemma);
  return it == sense_counts.end() ? 1 : it->second;
}

std::optional<AuxKind> parse_aux_kind(std::string_view text) {
  if (text == "sensitive") return AuxKind::sensitive;
  if (text == "anaphoric_adverbs") return AuxKind::anaphoric_adverbs;
  if (text == "speaking_verbs") return AuxKind::speaking_verbs;
  if (text == "paired_conjunctions") return AuxKind::paired_conjunctions;
  if (text == "sense_counts") return AuxKind::sense_counts;
  return std::nullopt;
}

std::optional<CefrLevel> Lexicons::kelly_level(std::string_view lemma, std::string_view pos) const {
  const auto* e = kelly.find(lemma, pos, pos_fallback);
  if (!e) return std::nullopt;
  return e->level;
}

std::optional<double> Lexicons::kelly_log_freq(std::string_view lemma, std::string_view pos) const {
  const auto* e = kelly.find(lemma, pos, pos_fallback);
  if (!e) return std::nullopt;
  return e->log_freq;
}

std::optional<double> Lexicons::svalex_freq(std::string_view lemma, std::string_view pos, CefrLevel level) const {
  const auto* e = svalex.find(lemma, pos, pos_fallback);
  if (!e) return std::nullopt;
  auto it = e->freq_per_level.find(level);
  if (it == e->freq_per_level.end()) return std::nullopt;
  return it->second;
}

bool Lexicons::in_svalex(std::string_view lemma, std::string_view pos) const {
  return svalex.find(lemma, pos, pos_fallback) != nullptr;
}

void Lexicons::load_kelly_text(std::string_view text) {
  auto table = parse_tsv(text);
  auto c_lemma = table.column("lemma");
  auto c_pos = table.column("pos");
  auto c_level = table.column("level");
  auto c_freq = table.column("log_freq");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    KellyEntry e;
    e.lemma = row[c_lemma];
    e.pos = row[c_pos];
    auto level = parse_cefr(row[c_level]);
    if (!level) {
      throw LoadError("line " + std::to_string(table.row_lines[r]) + ": unknown level '" + row[c_level] + "'");
    }
    e.level = *level;
    e.log_freq = parse_real(row[c_freq], table.row_lines[r], "log_freq");
    kelly.insert(std::move(e), warnings);
  }
}

void Lexicons::load_svalex_text(std::string_view text) {
  auto table = parse_tsv(text);
  auto c_lemma = table.column("lemma");
  auto c_pos = table.column("pos");
  const std::pair<const char*, CefrLevel> level_cols[] = {{"a1", CefrLevel::A1},
                                                           {"a2", CefrLevel::A2},
                                                           {"b1", CefrLevel::B1},
                                                           {"b2", CefrLevel::B2},
                                                           {"c1", CefrLevel::C1}};
  std::vector<std::pair<std::size_t, CefrLevel>> cols;
  for (const auto& [name, level] : level_cols) cols.emplace_back(table.column(name), level);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    SvalexEntry e;
    e.lemma = row[c_lemma];
    e.pos = row[c_pos];
    for (const auto& [col, level] : cols) {
      double f = parse_real(row[col], table.row_lines[r], table.header[col]);
      if (f < 0) throw LoadError("line " + std::to_string(table.row_lines[r]) + ": negative frequency");
      e.freq_per_level[level] = f;
    }
    svalex.insert(std::move(e), warnings);
  }
}

void Lexicons::load_lmi_text(std::string_view text) {
  auto table = parse_tsv(text);
  auto c_head = table.column("head");
  auto c_rel = table.column("relation");
  auto c_dep = table.column("dep");
  auto c_score = table.column("score");
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto rel = parse_lmi_relation(row[c_rel]);
    if (!rel) {
      throw LoadError("line " + std::to_string(table.row_lines[r]) + ": unknown relation '" + row[c_rel] + "'");
    }
    LmiEntry e{row[c_head], *rel, row[c_dep], parse_real(row[c_score], table.row_lines[r], "score")};
    lmi.insert(std::move(e), warnings);
  }
}

void Lexicons::load_aux_text(AuxKind kind, std::string_view text) {
  auto table = parse_tsv(text);
  auto c_item = table.column("item");
  switch (kind) {
    case AuxKind::sensitive: {
      auto c_topic = table.column("topic");
      for (const auto& row : table.rows) aux.sensitive[row[c_item]].insert(row[c_topic]);
      break;
    }
    case AuxKind::anaphoric_adverbs:
      for (const auto& row : table.rows) aux.anaphoric_adverbs.insert(row[c_item]);
      break;
    case AuxKind::speaking_verbs:
      for (const auto& row : table.rows) aux.speaking_verbs.insert(row[c_item]);
      break;
    case AuxKind::paired_conjunctions:
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& item = table.rows[r][c_item];
        auto space = item.find(' ');
        if (space == std::string::npos || space == 0 || space + 1 >= item.size()) {
          throw LoadError("line " + std::to_string(table.row_lines[r]) +
                          ": paired conjunction must be two words, got '" + item + "'");
        }
        aux.paired_conjunctions.emplace_back(item.substr(0, space), item.substr(space + 1));
      }
      break;
    case AuxKind::sense_counts: {
      auto c_senses = table.column("senses");
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        double v = parse_real(table.rows[r][c_senses], table.row_lines[r], "senses");
        if (v < 1) throw LoadError("line " + std::to_string(table.row_lines[r]) + ": sense count must be positive");
        aux.sense_counts[table.rows[r][c_item]] = static_cast<int>(v);
      }
      break;
    }
  }
}

void Lexicons::load_kelly(const std::string& path) { load_kelly_text(read_text_file(path)); }
void Lexicons::load_svalex(const std::string& path) { load_svalex_text(read_text_file(path)); }
void Lexicons::load_lmi(const std::string& path) { load_lmi_text(read_text_file(path)); }
void Lexicons::load_aux(AuxKind kind, const std::string& path) { load_aux_text(kind, read_text_file(path)); }

std::optional<std::size_t> TsvTable::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t TsvTable::column(std::string_view name) const {
  auto c = find_column(name);
  if (!c) throw LoadError("missing required column '" + std::string(name) + "'");
  return *c;
}

TsvTable parse_tsv(std::string_view text) {
  TsvTable table;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw LoadError("line " + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                      " fields, found " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.row_lines.push_back(line_no);
  }
  if (!have_header) throw LoadError("missing header row");
  return table;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace hitex
