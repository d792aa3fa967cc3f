#include "hitex/criteria.hpp"

#include <algorithm>

#include "hitex/error.hpp"
#include "hitex/utf8.hpp"

namespace hitex {

namespace {

using C = CriterionId;
using Cat = CriterionCategory;

constexpr std::array<CriterionInfo, kCriterionCount> kCatalog = {{
    {C::search_absence, "search_absence", 1, Cat::search_term, true, false, false,
     "The sentence does not contain the search term."},
    {C::match_count, "match_count", 2, Cat::search_term, false, false, true,
     "Matches of the search term beyond the first."},
    {C::term_position, "term_position", 3, Cat::search_term, true, false, false,
     "The search term sits at a forbidden sentence edge."},
    {C::dep_root, "dep_root", 4, Cat::wellformedness, true, false, false, "No token is the dependency root."},
    {C::ellipsis, "ellipsis", 5, Cat::wellformedness, false, false, false, "No subject or no finite verb."},
    {C::incompleteness, "incompleteness", 6, Cat::wellformedness, true, false, false,
     "Missing initial capital letter or sentence-final punctuation."},
    {C::non_lemmatized, "non_lemmatized", 7, Cat::wellformedness, false, false, false,
     "Share of tokens without a lemma."},
    {C::non_alpha, "non_alpha", 8, Cat::wellformedness, false, false, false,
     "Share of tokens without an alphabetic character."},
    {C::struct_connective, "struct_connective", 9, Cat::context_independence, true, false, false,
     "Sentence-initial conjunction or subjunction in a single-clause sentence."},
    {C::pron_anaphora, "pron_anaphora", 10, Cat::context_independence, false, false, true,
     "Anaphoric third person and demonstrative pronouns."},
    {C::adv_anaphora, "adv_anaphora", 11, Cat::context_independence, false, false, true,
     "Anaphoric time, place and discourse adverbs."},
    {C::l2_level, "l2_level", 12, Cat::l2_complexity, false, false, false,
     "Distance between the predicted and the target CEFR level."},
    {C::negation, "negation", 13, Cat::structural, false, false, true, "Negation adverbials."},
    {C::interrogative, "interrogative", 14, Cat::structural, true, false, false, "Direct question."},
    {C::direct_speech, "direct_speech", 15, Cat::structural, true, false, false,
     "Delimiter followed by a speaking verb and a pronoun or proper name."},
    {C::closed_answer, "closed_answer", 16, Cat::structural, true, false, false,
     "Answer to a polar question, e.g. a sentence-initial 'ja,' or 'nej,'."},
    {C::modal_verb, "modal_verb", 17, Cat::structural, false, false, true,
     "Modal verbs used as auxiliaries of a verb group."},
    {C::sent_length, "sent_length", 18, Cat::structural, false, false, false,
     "Number of tokens including punctuation."},
    {C::difficult_vocab, "difficult_vocab", 19, Cat::lexical, false, false, true,
     "Content words whose KELLY level is above the target level."},
    {C::word_freq, "word_freq", 20, Cat::lexical, false, true, false,
     "Mean SVALex frequency at the target level of content words."},
    {C::oov, "oov", 21, Cat::lexical, false, false, true, "Content words absent from SVALex."},
    {C::sensitive, "sensitive", 22, Cat::lexical, false, false, true, "Words from the sensitive vocabulary list."},
    {C::typicality, "typicality", 23, Cat::lexical, false, true, false,
     "Sum of LMI scores of verb-subject, verb-object and noun-attribute pairs."},
    {C::proper_name, "proper_name", 24, Cat::lexical, false, false, true, "Proper names."},
    {C::abbreviation, "abbreviation", 25, Cat::lexical, false, false, true, "Abbreviations."},
}};

CriterionValue binary(C id, bool hit, std::vector<int> evidence = {}) {
  return {id, hit ? 1.0 : 0.0, hit, hit ? std::move(evidence) : std::vector<int>{}};
}

CriterionValue counted(C id, std::vector<int> evidence, const CriteriaParams& params) {
  double n = static_cast<double>(evidence.size());
  return {id, n, n > params.max_count(id), std::move(evidence)};
}

template <typename Pred>
std::vector<int> tokens_where(const AnnotatedSentence& s, Pred pred) {
  std::vector<int> out;
  for (const auto& t : s.tokens) {
    if (pred(t)) out.push_back(t.index);
  }
  return out;
}

void require_tokens(const AnnotatedSentence& s) {
  if (s.tokens.empty()) throw Error("sentence '" + s.id + "' has no tokens");
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

int last_non_punct(const AnnotatedSentence& s, const TagsetConfig& tags) {
  for (auto it = s.tokens.rbegin(); it != s.tokens.rend(); ++it) {
    if (!tags.is_punctuation(*it)) return it->index;
  }
  return 0;
}

// --- search term ---

CriterionValue search_absence(const AnnotatedSentence& s) { return binary(C::search_absence, s.match_spans.empty()); }

CriterionValue match_count(const AnnotatedSentence& s, const CriteriaParams& params) {
  std::vector<int> extra;
  for (std::size_t i = 1; i < s.match_spans.size(); ++i) extra.push_back(s.match_spans[i].first);
  CriterionValue v{C::match_count, static_cast<double>(extra.size()), false, std::move(extra)};
  v.triggered = static_cast<int>(s.match_spans.size()) > params.max_matches;
  return v;
}

CriterionValue term_position(const AnnotatedSentence& s, const CriteriaParams& params, const TagsetConfig& tags) {
  const bool check_start =
      params.term_position == TermPosition::forbid_edges || params.term_position == TermPosition::forbid_start;
  const bool check_end =
      params.term_position == TermPosition::forbid_edges || params.term_position == TermPosition::forbid_end;
  const int last = last_non_punct(s, tags);
  std::vector<int> evidence;
  for (const auto& span : s.match_spans) {
    bool at_start = check_start && span.first == 1;
    bool at_end = check_end && span.last == last;
    if (at_start || at_end) {
      for (int i = span.first; i <= span.last; ++i) evidence.push_back(i);
    }
  }
  std::sort(evidence.begin(), evidence.end());
  evidence.erase(std::unique(evidence.begin(), evidence.end()), evidence.end());
  return binary(C::term_position, !evidence.empty(), evidence);
}

// --- well-formedness ---

CriterionValue dep_root(const AnnotatedSentence& s) {
  bool has_root = std::any_of(s.tokens.begin(), s.tokens.end(), [](const Token& t) { return t.head == 0; });
  return binary(C::dep_root, !has_root);
}

CriterionValue ellipsis(const AnnotatedSentence& s, const TagsetConfig& tags) {
  bool subject = std::any_of(s.tokens.begin(), s.tokens.end(),
                             [&](const Token& t) { return tags.subject_deprels.contains(t.deprel); });
  bool finite = std::any_of(s.tokens.begin(), s.tokens.end(), [&](const Token& t) { return tags.is_finite_verb(t); });
  return {C::ellipsis, (subject && finite) ? 0.0 : 1.0, !(subject && finite), {}};
}

CriterionValue incompleteness(const AnnotatedSentence& s, const TagsetConfig& tags) {
  std::vector<int> evidence;
  auto first_alpha = std::find_if(s.tokens.begin(), s.tokens.end(),
                                  [](const Token& t) { return utf8::has_alpha(t.form); });
  if (first_alpha == s.tokens.end()) {
    evidence.push_back(1);
  } else {
    char32_t initial = 0;
    for (char32_t cp : utf8::decode(first_alpha->form)) {
      if (utf8::is_alpha(cp)) {
        initial = cp;
        break;
      }
    }
    if (!utf8::is_upper(initial)) evidence.push_back(first_alpha->index);
  }
  const Token& last = s.tokens.back();
  if (!tags.sentence_final_forms.contains(last.form)) evidence.push_back(last.index);
  std::sort(evidence.begin(), evidence.end());
  evidence.erase(std::unique(evidence.begin(), evidence.end()), evidence.end());
  return binary(C::incompleteness, !evidence.empty(), evidence);
}

CriterionValue non_lemmatized(const AnnotatedSentence& s, const CriteriaParams& params) {
  auto ev = tokens_where(s, [](const Token& t) { return !t.lemma.has_value(); });
  double r = ratio(ev.size(), s.tokens.size());
  return {C::non_lemmatized, r, r > params.max_nonlemma_ratio, std::move(ev)};
}

CriterionValue non_alpha(const AnnotatedSentence& s, const CriteriaParams& params) {
  auto ev = tokens_where(s, [](const Token& t) { return !utf8::has_alpha(t.form); });
  double r = ratio(ev.size(), s.tokens.size());
  return {C::non_alpha, r, r > params.max_nonalpha_ratio, std::move(ev)};
}

// --- context independence ---

CriterionValue struct_connective(const AnnotatedSentence& s, const TagsetConfig& tags, const AuxLists& aux) {
  const Token& first = s.tokens.front();
  bool connective = tags.conjunction_pos.contains(first.pos) || tags.subjunction_pos.contains(first.pos);
  if (!connective || clause_count(s, tags) > 1) return binary(C::struct_connective, false);
  const std::string key = lookup_key(first);
  const std::string form = utf8::fold_case(first.form);
  for (const auto& [opener, closer] : aux.paired_conjunctions) {
    if (key != opener && form != opener) continue;
    for (std::size_t i = 1; i < s.tokens.size(); ++i) {
      const Token& t = s.tokens[i];
      if (lookup_key(t) == closer || utf8::fold_case(t.form) == closer) return binary(C::struct_connective, false);
    }
  }
  return binary(C::struct_connective, true, {1});
}

CriterionValue pron_anaphora(const AnnotatedSentence& s, const CriteriaParams& params, const TagsetConfig& tags) {
  std::vector<int> ev;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    bool personal = tags.is_pronoun(t) && key_in(t, tags.anaphoric_pronouns);
    bool demonstrative = (tags.is_pronoun(t) || tags.determiner_pos.contains(t.pos)) &&
                         key_in(t, tags.demonstrative_pronouns);
    if (!personal && !demonstrative) continue;
    if (tags.expletive_deprels.contains(t.deprel)) continue;
    if (i + 1 < s.tokens.size() && key_in(s.tokens[i + 1], tags.relative_markers)) continue;
    ev.push_back(t.index);
  }
  return counted(C::pron_anaphora, std::move(ev), params);
}

CriterionValue adv_anaphora(const AnnotatedSentence& s, const CriteriaParams& params, const AuxLists& aux) {
  return counted(C::adv_anaphora, tokens_where(s, [&](const Token& t) { return key_in(t, aux.anaphoric_adverbs); }),
                 params);
}

// --- structural ---

CriterionValue negation(const AnnotatedSentence& s, const CriteriaParams& params, const TagsetConfig& tags) {
  return counted(C::negation,
                 tokens_where(s, [&](const Token& t) { return tags.negation_deprels.contains(t.deprel); }), params);
}

CriterionValue interrogative(const AnnotatedSentence& s) {
  bool q = s.tokens.back().form == "?";
  return binary(C::interrogative, q, {s.tokens.back().index});
}

CriterionValue direct_speech(const AnnotatedSentence& s, const TagsetConfig& tags, const AuxLists& aux) {
  const int n = static_cast<int>(s.tokens.size());
  for (int i = 1; i <= n; ++i) {
    const Token& delim = s.token(i);
    if (!tags.is_minor_delimiter(delim) && !tags.is_pairwise_delimiter(delim)) continue;
    int j = i + 1;
    while (j <= n && tags.is_verb(s.token(j)) && key_in(s.token(j), tags.auxiliary_lemmas) &&
           !key_in(s.token(j), aux.speaking_verbs)) {
      ++j;
    }
    if (j + 1 > n) continue;
    const Token& verb = s.token(j);
    const Token& speaker = s.token(j + 1);
    if (tags.is_verb(verb) && key_in(verb, aux.speaking_verbs) &&
        (tags.is_pronoun(speaker) || tags.is_proper_noun(speaker))) {
      std::vector<int> ev;
      for (int k = i; k <= j + 1; ++k) ev.push_back(k);
      return binary(C::direct_speech, true, ev);
    }
  }
  return binary(C::direct_speech, false);
}

CriterionValue closed_answer(const AnnotatedSentence& s, const TagsetConfig& tags) {
  const int n = static_cast<int>(s.tokens.size());
  auto interjection = [&](int i) { return i <= n && tags.interjection_pos.contains(s.token(i).pos); };
  auto adverb = [&](int i) { return i <= n && tags.is_adverb(s.token(i)); };
  auto minor = [&](int i) { return i <= n && tags.is_minor_delimiter(s.token(i)); };
  if (minor(1) && (adverb(2) || interjection(2)) && minor(3)) return binary(C::closed_answer, true, {1, 2, 3});
  if (interjection(1) && minor(2)) return binary(C::closed_answer, true, {1, 2});
  return binary(C::closed_answer, false);
}

CriterionValue modal_verb(const AnnotatedSentence& s, const CriteriaParams& params, const TagsetConfig& tags) {
  std::vector<int> ev;
  for (const auto& t : s.tokens) {
    if (!tags.is_verb(t) || !key_in(t, tags.modal_lemmas)) continue;
    bool group = tags.verb_group_deprels.contains(t.deprel);
    for (const auto& d : s.tokens) {
      group = group || (d.head == t.index && tags.verb_group_deprels.contains(d.deprel));
    }
    if (group) ev.push_back(t.index);
  }
  return counted(C::modal_verb, std::move(ev), params);
}

CriterionValue sent_length(const AnnotatedSentence& s, const CriteriaParams& params) {
  int n = static_cast<int>(s.tokens.size());
  return {C::sent_length, static_cast<double>(n), n < params.min_len || n > params.max_len, {}};
}

// --- lexical ---

CefrLevel svalex_level(CefrLevel target) { return target == CefrLevel::C2 ? CefrLevel::C1 : target; }

CriterionValue difficult_vocab(const AnnotatedSentence& s, const SearchQuery& q, const CriteriaParams& params,
                               const TagsetConfig& tags, const Lexicons& lex) {
  return counted(C::difficult_vocab, tokens_where(s, [&](const Token& t) {
                   if (!tags.is_lexical(t)) return false;
                   auto level = lex.kelly_level(lookup_key(t), t.pos);
                   return level && ordinal(*level) > ordinal(q.target_level);
                 }),
                 params);
}

CriterionValue word_freq(const AnnotatedSentence& s, const SearchQuery& q, const CriteriaParams& params,
                         const TagsetConfig& tags, const Lexicons& lex) {
  std::vector<int> ev;
  double sum = 0.0;
  for (const auto& t : s.tokens) {
    if (!tags.is_lexical(t)) continue;
    auto f = lex.svalex_freq(lookup_key(t), t.pos, svalex_level(q.target_level));
    if (!f) continue;
    sum += *f;
    ev.push_back(t.index);
  }
  double mean = ev.empty() ? 0.0 : sum / static_cast<double>(ev.size());
  return {C::word_freq, mean, mean < params.min_word_freq, std::move(ev)};
}

CriterionValue oov(const AnnotatedSentence& s, const CriteriaParams& params, const TagsetConfig& tags,
                   const Lexicons& lex) {
  return counted(C::oov, tokens_where(s, [&](const Token& t) {
                   return tags.is_lexical(t) && !lex.in_svalex(lookup_key(t), t.pos);
                 }),
                 params);
}

CriterionValue sensitive(const AnnotatedSentence& s, const CriteriaParams& params, const Lexicons& lex) {
  return counted(C::sensitive, tokens_where(s, [&](const Token& t) {
                   for (const std::string& key : {lookup_key(t), utf8::fold_case(t.form)}) {
                     auto it = lex.aux.sensitive.find(key);
                     if (it == lex.aux.sensitive.end()) continue;
                     if (params.sensitive_topics.empty()) return true;
                     for (const auto& topic : it->second) {
                       if (params.sensitive_topics.contains(topic)) return true;
                     }
                   }
                   return false;
                 }),
                 params);
}

CriterionValue typicality(const AnnotatedSentence& s, const CriteriaParams& params, const TagsetConfig& tags,
                          const Lexicons& lex) {
  double sum = 0.0;
  std::vector<int> ev;
  for (const auto& t : s.tokens) {
    if (t.head == 0) continue;
    const Token& h = s.token(t.head);
    std::optional<double> score;
    if (tags.is_verb(h) && tags.is_noun(t)) {
      if (tags.subject_deprels.contains(t.deprel)) {
        score = lex.lmi_score(lookup_key(h), LmiRelation::subj, lookup_key(t));
      } else if (tags.object_deprels.contains(t.deprel)) {
        score = lex.lmi_score(lookup_key(h), LmiRelation::obj, lookup_key(t));
      }
    } else if (tags.is_noun(h) && tags.attribute_deprels.contains(t.deprel)) {
      score = lex.lmi_score(lookup_key(h), LmiRelation::attr, lookup_key(t));
    }
    if (!score) continue;
    sum += *score;
    ev.push_back(t.index);
    ev.push_back(h.index);
  }
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  return {C::typicality, sum, sum < params.min_typicality, std::move(ev)};
}

CriterionValue proper_name(const AnnotatedSentence& s, const CriteriaParams& params, const TagsetConfig& tags) {
  return counted(C::proper_name, tokens_where(s, [&](const Token& t) { return tags.is_proper_noun(t); }), params);
}

CriterionValue abbreviation(const AnnotatedSentence& s, const CriteriaParams& params, const TagsetConfig& tags) {
  return counted(C::abbreviation,
                 tokens_where(s, [&](const Token& t) { return tags.abbreviation_pos.contains(t.pos); }), params);
}

}  // namespace

const std::array<CriterionInfo, kCriterionCount>& criterion_catalog() { return kCatalog; }

const CriterionInfo& info(CriterionId id) { return kCatalog[static_cast<std::size_t>(id)]; }

std::string_view to_string(CriterionId id) { return info(id).name; }

std::string_view to_string(CriterionCategory category) {
  switch (category) {
    case Cat::search_term: return "search_term";
    case Cat::wellformedness: return "wellformedness";
    case Cat::context_independence: return "context_independence";
    case Cat::l2_complexity: return "l2_complexity";
    case Cat::structural: return "structural";
    case Cat::lexical: return "lexical";
  }
  return "?";
}

std::optional<CriterionId> parse_criterion(std::string_view name) {
  for (const auto& c : kCatalog) {
    if (c.name == name) return c.id;
  }
  return std::nullopt;
}

std::string_view to_string(TermPosition p) {
  switch (p) {
    case TermPosition::any: return "any";
    case TermPosition::forbid_edges: return "forbid_edges";
    case TermPosition::forbid_start: return "forbid_start";
    case TermPosition::forbid_end: return "forbid_end";
  }
  return "?";
}

std::optional<TermPosition> parse_term_position(std::string_view text) {
  for (auto p : {TermPosition::any, TermPosition::forbid_edges, TermPosition::forbid_start, TermPosition::forbid_end}) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

int clause_count(const AnnotatedSentence& s, const TagsetConfig& tags) {
  int n = 0;
  for (const auto& t : s.tokens) {
    if (tags.is_finite_verb(t) && (t.head == 0 || tags.clausal_deprels.contains(t.deprel))) ++n;
  }
  return n;
}

std::vector<CriterionValue> eval_search_term(const AnnotatedSentence& s, const SearchQuery&,
                                             const CriteriaParams& params, const TagsetConfig& tags) {
  require_tokens(s);
  return {search_absence(s), match_count(s, params), term_position(s, params, tags)};
}

std::vector<CriterionValue> eval_wellformedness(const AnnotatedSentence& s, const CriteriaParams& params,
                                                const TagsetConfig& tags) {
  require_tokens(s);
  return {dep_root(s), ellipsis(s, tags), incompleteness(s, tags), non_lemmatized(s, params), non_alpha(s, params)};
}

std::vector<CriterionValue> eval_context_independence(const AnnotatedSentence& s, const CriteriaParams& params,
                                                      const TagsetConfig& tags, const AuxLists& aux) {
  require_tokens(s);
  return {struct_connective(s, tags, aux), pron_anaphora(s, params, tags), adv_anaphora(s, params, aux)};
}

std::vector<CriterionValue> eval_structural(const AnnotatedSentence& s, const CriteriaParams& params,
                                            const TagsetConfig& tags, const AuxLists& aux) {
  require_tokens(s);
  return {negation(s, params, tags),    interrogative(s),           direct_speech(s, tags, aux),
          closed_answer(s, tags),       modal_verb(s, params, tags), sent_length(s, params)};
}

std::vector<CriterionValue> eval_lexical(const AnnotatedSentence& s, const SearchQuery& q,
                                         const CriteriaParams& params, const TagsetConfig& tags,
                                         const Lexicons& lexicons) {
  require_tokens(s);
  return {difficult_vocab(s, q, params, tags, lexicons), word_freq(s, q, params, tags, lexicons),
          oov(s, params, tags, lexicons),                sensitive(s, params, lexicons),
          typicality(s, params, tags, lexicons),         proper_name(s, params, tags),
          abbreviation(s, params, tags)};
}

CriterionValue evaluate_criterion(CriterionId id, const AnnotatedSentence& s, const CriterionContext& ctx) {
  require_tokens(s);
  const auto& p = ctx.params;
  const auto& tags = ctx.tags;
  const auto& lex = ctx.lexicons;
  switch (id) {
    case C::search_absence: return search_absence(s);
    case C::match_count: return match_count(s, p);
    case C::term_position: return term_position(s, p, tags);
    case C::dep_root: return dep_root(s);
    case C::ellipsis: return ellipsis(s, tags);
    case C::incompleteness: return incompleteness(s, tags);
    case C::non_lemmatized: return non_lemmatized(s, p);
    case C::non_alpha: return non_alpha(s, p);
    case C::struct_connective: return struct_connective(s, tags, lex.aux);
    case C::pron_anaphora: return pron_anaphora(s, p, tags);
    case C::adv_anaphora: return adv_anaphora(s, p, lex.aux);
    case C::l2_level: throw Error("l2_level is evaluated by the CEFR classifier");
    case C::negation: return negation(s, p, tags);
    case C::interrogative: return interrogative(s);
    case C::direct_speech: return direct_speech(s, tags, lex.aux);
    case C::closed_answer: return closed_answer(s, tags);
    case C::modal_verb: return modal_verb(s, p, tags);
    case C::sent_length: return sent_length(s, p);
    case C::difficult_vocab: return difficult_vocab(s, ctx.query, p, tags, lex);
    case C::word_freq: return word_freq(s, ctx.query, p, tags, lex);
    case C::oov: return oov(s, p, tags, lex);
    case C::sensitive: return sensitive(s, p, lex);
    case C::typicality: return typicality(s, p, tags, lex);
    case C::proper_name: return proper_name(s, p, tags);
    case C::abbreviation: return abbreviation(s, p, tags);
  }
  throw Error("unknown criterion");
}

}  // namespace hitex
