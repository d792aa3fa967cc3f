#include "hitex/corpus.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hitex/error.hpp"
#include "hitex/utf8.hpp"

namespace hitex {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(line.substr(start));
      break;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string> split_tags(std::string_view pattern) {
  std::vector<std::string> tags;
  std::istringstream in{std::string(pattern)};
  std::string tag;
  while (in >> tag) tags.push_back(tag);
  return tags;
}

}  // namespace

std::string_view to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::wordform: return "wordform";
    case MatchKind::lemma: return "lemma";
    case MatchKind::pos_pattern: return "pos_pattern";
  }
  return "?";
}

std::optional<MatchKind> parse_match_kind(std::string_view text) {
  if (text == "wordform") return MatchKind::wordform;
  if (text == "lemma") return MatchKind::lemma;
  if (text == "pos_pattern") return MatchKind::pos_pattern;
  return std::nullopt;
}

void validate_query(const SearchQuery& query) {
  if (query.term.empty()) throw Error("search term must not be empty");
  if (query.max_candidates < 1) throw Error("max_candidates must be at least 1");
  if (query.match_kind == MatchKind::pos_pattern && split_tags(query.term).empty()) {
    throw Error("pos_pattern needs at least one tag");
  }
}

std::vector<AnnotatedSentence> parse_conllu(std::string_view text, std::string_view source) {
  std::vector<AnnotatedSentence> sentences;
  AnnotatedSentence current;
  std::size_t line_no = 0;
  std::size_t block_start = 0;

  auto flush = [&]() {
    std::size_t start = block_start;
    block_start = 0;
    if (current.tokens.empty()) {
      current = AnnotatedSentence{};
      return;
    }
    for (const auto& tok : current.tokens) {
      if (tok.head > static_cast<int>(current.tokens.size())) {
        throw ParseError(start, "head " + std::to_string(tok.head) + " of token " +
                                          std::to_string(tok.index) + " is out of range");
      }
    }
    if (current.id.empty()) {
      current.id = std::string(source) + ":" + std::to_string(sentences.size() + 1);
    }
    current.source = std::string(source);
    sentences.push_back(std::move(current));
    current = AnnotatedSentence{};
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    if (trim(raw).empty()) {
      flush();
      if (end == text.size()) break;
      continue;
    }
    if (block_start == 0) block_start = line_no;
    if (raw.front() == '#') {
      auto body = trim(raw.substr(1));
      if (body.rfind("sent_id", 0) == 0) {
        auto eq = body.find('=');
        if (eq != std::string_view::npos) current.id = std::string(trim(body.substr(eq + 1)));
      }
      if (end == text.size()) break;
      continue;
    }
    auto cols = split(raw, '\t');
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, found " + std::to_string(cols.size()));
    }
    // Multiword-token ranges and empty nodes carry no annotation of their own.
    if (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    auto index = to_int(cols[0]);
    if (!index || *index < 1) throw ParseError(line_no, "invalid token id '" + std::string(cols[0]) + "'");
    int expected = static_cast<int>(current.tokens.size()) + 1;
    if (*index != expected) {
      throw ParseError(line_no, "token id " + std::to_string(*index) + " out of sequence, expected " +
                                    std::to_string(expected));
    }
    auto head = to_int(cols[6]);
    if (!head || *head < 0) throw ParseError(line_no, "non-integer head '" + std::string(cols[6]) + "'");
    if (*head == *index) throw ParseError(line_no, "token " + std::to_string(*index) + " is its own head");

    Token tok;
    tok.index = *index;
    tok.form = std::string(cols[1]);
    if (cols[2] != "_") tok.lemma = std::string(cols[2]);
    tok.pos = std::string(cols[3]);
    tok.msd = cols[5] == "_" ? std::string() : std::string(cols[5]);
    tok.head = *head;
    tok.deprel = cols[7] == "_" ? std::string() : std::string(cols[7]);
    current.tokens.push_back(std::move(tok));
    if (end == text.size()) break;
  }
  flush();
  return sentences;
}

std::vector<AnnotatedSentence> read_conllu_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open corpus file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto source = std::filesystem::path(path).stem().string();
  try {
    return parse_conllu(buffer.str(), source);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.detail());
  }
}

std::string write_conllu(const std::vector<AnnotatedSentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    out += "# sent_id = " + s.id + "\n";
    out += "# text = " + surface_text(s) + "\n";
    for (const auto& t : s.tokens) {
      out += std::to_string(t.index);
      out += '\t' + t.form;
      out += '\t' + (t.lemma ? *t.lemma : std::string("_"));
      out += '\t' + t.pos;
      out += "\t_";
      out += '\t' + (t.msd.empty() ? std::string("_") : t.msd);
      out += '\t' + std::to_string(t.head);
      out += '\t' + (t.deprel.empty() ? std::string("_") : t.deprel);
      out += "\t_\t_\n";
    }
    out += '\n';
  }
  return out;
}

std::string surface_text(const std::vector<std::string>& forms) {
  static const std::vector<std::string> kNoSpaceBefore = {".", ",", "!", "?", ":", ";", ")", "...", "…"};
  std::string out;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    bool attach = false;
    for (const auto& p : kNoSpaceBefore) attach = attach || forms[i] == p;
    if (i > 0 && !attach && forms[i - 1] != "(") out += ' ';
    out += forms[i];
  }
  return out;
}

std::string surface_text(const AnnotatedSentence& sentence) {
  std::vector<std::string> forms;
  forms.reserve(sentence.tokens.size());
  for (const auto& t : sentence.tokens) forms.push_back(t.form);
  return surface_text(forms);
}

std::vector<Span> find_matches(const AnnotatedSentence& sentence, const SearchQuery& query) {
  std::vector<Span> spans;
  const auto& toks = sentence.tokens;
  const int n = static_cast<int>(toks.size());

  if (query.match_kind == MatchKind::pos_pattern) {
    auto tags = split_tags(query.term);
    const int m = static_cast<int>(tags.size());
    int i = 0;
    while (m > 0 && i + m <= n) {
      bool ok = true;
      for (int k = 0; k < m && ok; ++k) ok = toks[i + k].pos == tags[k];
      if (ok) {
        spans.push_back({i + 1, i + m});
        i += m;
      } else {
        ++i;
      }
    }
    return spans;
  }

  const std::string folded_term = utf8::fold_case(query.term);
  for (const auto& t : toks) {
    if (query.pos && t.pos != *query.pos) continue;
    bool hit = query.match_kind == MatchKind::lemma ? (t.lemma && *t.lemma == query.term)
                                                    : utf8::fold_case(t.form) == folded_term;
    if (hit) spans.push_back({t.index, t.index});
  }
  return spans;
}

std::vector<AnnotatedSentence> concordance_search(const std::vector<AnnotatedSentence>& corpus,
                                                  const SearchQuery& query) {
  std::vector<AnnotatedSentence> out;
  for (const auto& s : corpus) {
    if (static_cast<int>(out.size()) >= query.max_candidates) break;
    auto spans = find_matches(s, query);
    if (spans.empty()) continue;
    AnnotatedSentence hit = s;
    hit.match_spans = std::move(spans);
    out.push_back(std::move(hit));
  }
  return out;
}

}  // namespace hitex
