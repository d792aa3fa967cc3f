#include "hitex/features.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "hitex/utf8.hpp"

namespace hitex {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    // count
    "sentence_length", "avg_token_length", "extra_long_tokens", "n_characters", "lix", "bilog_ttr", "root_ttr",
    // lexical
    "avg_kelly_log_freq", "a1_lemma_is", "a2_lemma_is", "b1_lemma_is", "b2_lemma_is", "c1_lemma_is",
    "c2_lemma_is", "difficult_w_is", "difficult_nv_is", "oov_is", "no_lemma_is",
    // morph
    "modal_v_to_v", "particle_is", "pron3sg_is", "punct_is", "subjunction_is", "pr_to_n", "pr_to_pp", "sv_is",
    "sv_to_v", "adj_is", "adj_var", "adv_is", "adv_var", "n_is", "n_var", "v_is", "v_var", "function_w_is",
    "neuter_n_is", "cj_sj_is", "past_pc_to_v", "pres_pc_to_v", "past_v_to_v", "supine_v_to_v", "pres_v_to_v",
    "nominal_ratio", "n_to_v", "lex_to_nonlex", "lex_to_tokens", "rel_structure_is",
    // syntactic
    "avg_deparc_len", "deparc_gt5_is", "max_deparc_len", "right_arc_ratio", "left_arc_ratio", "modifier_var",
    "premod_is", "postmod_is", "subord_is", "relcl_is", "pp_compl_is",
    // semantic
    "avg_senses_per_token", "n_senses_per_n",
};

double div0(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

// Fills a FeatureVector by name so the emitting code reads like the table.
class Writer {
 public:
  explicit Writer(FeatureVector& fv) : fv_(fv) {}
  void operator()(std::string_view name, double value) {
    auto idx = feature_index(name);
    if (!idx) throw std::logic_error("unknown feature " + std::string(name));
    fv_[*idx] = value;
  }

 private:
  FeatureVector& fv_;
};

}  // namespace

const std::array<std::string_view, kFeatureCount>& feature_names() { return kNames; }

FeatureGroup feature_group(std::size_t index) {
  if (index < 7) return FeatureGroup::count;
  if (index < 18) return FeatureGroup::lexical;
  if (index < 48) return FeatureGroup::morph;
  if (index < 59) return FeatureGroup::syntactic;
  return FeatureGroup::semantic;
}

std::optional<std::size_t> feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return i;
  }
  return std::nullopt;
}

double FeatureVector::get(std::string_view name) const {
  auto idx = feature_index(name);
  if (!idx) throw std::out_of_range("unknown feature '" + std::string(name) + "'");
  return values[*idx];
}

FeatureVector extract_features(const AnnotatedSentence& s, CefrLevel target_level, const Lexicons& lexicons,
                               const TagsetConfig& tags, const FeatureOptions& options) {
  FeatureVector fv;
  Writer put(fv);
  const double n = static_cast<double>(s.tokens.size());
  if (s.tokens.empty()) return fv;
  auto is = [n](double count) { return count * 1000.0 / n; };

  // count features
  double chars = 0, extra_long = 0, words = 0, long_words = 0;
  std::unordered_set<std::string> types;
  for (const auto& t : s.tokens) {
    double len = static_cast<double>(utf8::length(t.form));
    chars += len;
    if (len > 13) ++extra_long;
    if (tags.is_punctuation(t)) continue;
    ++words;
    if (len > 6) ++long_words;
    types.insert(utf8::fold_case(t.form));
  }
  const double n_types = static_cast<double>(types.size());
  put("sentence_length", n);
  put("avg_token_length", chars / n);
  put("extra_long_tokens", extra_long);
  put("n_characters", chars);
  put("lix", words == 0 ? 0.0 : words + 100.0 * long_words / words);
  put("bilog_ttr", words == 0 ? 0.0 : (words == 1 ? 1.0 : std::log(n_types) / std::log(words)));
  put("root_ttr", words == 0 ? 0.0 : n_types / std::sqrt(words));

  // lexical features
  std::array<double, 6> per_level{};
  double kelly_found = 0, kelly_freq_sum = 0, difficult = 0, difficult_nv = 0, kelly_oov = 0, no_lemma = 0;
  for (const auto& t : s.tokens) {
    if (!t.lemma) ++no_lemma;
    if (tags.is_punctuation(t)) continue;
    const std::string key = lookup_key(t);
    const auto* entry = lexicons.kelly.find(key, t.pos, lexicons.pos_fallback);
    if (!entry) {
      ++kelly_oov;
      continue;
    }
    ++kelly_found;
    kelly_freq_sum += entry->log_freq;
    per_level[static_cast<std::size_t>(ordinal(entry->level) - 1)] += 1;
    if (ordinal(entry->level) > ordinal(target_level)) {
      ++difficult;
      if (tags.is_noun(t) || tags.is_verb(t)) ++difficult_nv;
    }
  }
  put("avg_kelly_log_freq", div0(kelly_freq_sum, kelly_found));
  put("a1_lemma_is", is(per_level[0]));
  put("a2_lemma_is", is(per_level[1]));
  put("b1_lemma_is", is(per_level[2]));
  put("b2_lemma_is", is(per_level[3]));
  put("c1_lemma_is", is(per_level[4]));
  put("c2_lemma_is", is(per_level[5]));
  put("difficult_w_is", is(difficult));
  put("difficult_nv_is", is(difficult_nv));
  put("oov_is", is(kelly_oov));
  put("no_lemma_is", is(no_lemma));

  // morphological features
  double nouns = 0, verbs = 0, adjs = 0, advs = 0, prons = 0, preps = 0, parts = 0, modals = 0, particles = 0,
         pron3sg = 0, punct = 0, subj = 0, conj = 0, sverbs = 0, function_w = 0, neuter = 0, past_pc = 0,
         pres_pc = 0, past_v = 0, supine_v = 0, pres_v = 0, relative = 0;
  for (const auto& t : s.tokens) {
    bool noun = tags.is_noun(t), verb = tags.is_verb(t);
    nouns += noun;
    verbs += verb;
    adjs += tags.is_adjective(t);
    advs += tags.is_adverb(t);
    prons += tags.is_pronoun(t);
    preps += tags.is_preposition(t);
    bool participle = tags.is_participle(t);
    parts += participle;
    particles += tags.particle_pos.contains(t.pos);
    punct += tags.is_punctuation(t);
    subj += tags.subjunction_pos.contains(t.pos);
    conj += tags.conjunction_pos.contains(t.pos);
    relative += tags.relative_pos.contains(t.pos);
    if (tags.is_pronoun(t) && key_in(t, tags.third_person_singular)) ++pron3sg;
    if (!tags.is_lexical(t) && !tags.is_punctuation(t)) ++function_w;
    if (noun && TagsetConfig::msd_has(t, tags.neuter_msd)) ++neuter;
    if (verb) {
      if (key_in(t, tags.modal_lemmas)) ++modals;
      if (TagsetConfig::msd_has(t, tags.sform_msd)) ++sverbs;
      if (TagsetConfig::msd_has(t, tags.past_msd)) ++past_v;
      if (TagsetConfig::msd_has(t, tags.supine_msd)) ++supine_v;
      if (TagsetConfig::msd_has(t, tags.present_msd)) ++pres_v;
    }
    if (participle) {
      if (TagsetConfig::msd_has(t, tags.perfect_participle_msd)) ++past_pc;
      if (TagsetConfig::msd_has(t, tags.present_participle_msd)) ++pres_pc;
    }
  }
  const double lexical = nouns + verbs + adjs + advs;
  put("modal_v_to_v", div0(modals, verbs));
  put("particle_is", is(particles));
  put("pron3sg_is", is(pron3sg));
  put("punct_is", is(punct));
  put("subjunction_is", is(subj));
  put("pr_to_n", div0(prons, nouns));
  put("pr_to_pp", div0(prons, preps));
  put("sv_is", is(sverbs));
  put("sv_to_v", div0(sverbs, verbs));
  put("adj_is", is(adjs));
  put("adj_var", div0(adjs, lexical));
  put("adv_is", is(advs));
  put("adv_var", div0(advs, lexical));
  put("n_is", is(nouns));
  put("n_var", div0(nouns, lexical));
  put("v_is", is(verbs));
  put("v_var", div0(verbs, lexical));
  put("function_w_is", is(function_w));
  put("neuter_n_is", is(neuter));
  put("cj_sj_is", is(conj + subj));
  put("past_pc_to_v", div0(past_pc, verbs));
  put("pres_pc_to_v", div0(pres_pc, verbs));
  put("past_v_to_v", div0(past_v, verbs));
  put("supine_v_to_v", div0(supine_v, verbs));
  put("pres_v_to_v", div0(pres_v, verbs));
  put("nominal_ratio", div0(nouns + preps + parts, prons + advs + verbs));
  put("n_to_v", div0(nouns, verbs));
  put("lex_to_nonlex", div0(lexical, n - lexical));
  put("lex_to_tokens", lexical / n);
  put("rel_structure_is", is(relative));

  // syntactic features
  double arcs = 0, arc_sum = 0, arc_max = 0, arc_gt5 = 0, right = 0, left = 0, premod = 0, postmod = 0,
         subord = 0, relcl = 0, ppcompl = 0;
  for (const auto& t : s.tokens) {
    if (tags.subordinate_deprels.contains(t.deprel)) ++subord;
    if (tags.pp_complement_deprels.contains(t.deprel)) ++ppcompl;
    if (tags.relative_clause_deprels.contains(t.deprel)) {
      ++relcl;
    } else if (tags.is_finite_verb(t)) {
      for (const auto& d : s.tokens) {
        if (d.head == t.index && tags.relative_pos.contains(d.pos)) {
          ++relcl;
          break;
        }
      }
    }
    if (t.head == 0) continue;
    double len = std::abs(static_cast<double>(t.index - t.head));
    ++arcs;
    arc_sum += len;
    arc_max = std::max(arc_max, len);
    if (len > 5) ++arc_gt5;
    if (t.index > t.head) ++right;
    if (t.index < t.head) ++left;
    if (tags.modifier_deprels.contains(t.deprel)) {
      if (t.index < t.head) ++premod;
      else ++postmod;
    }
  }
  put("avg_deparc_len", div0(arc_sum, arcs));
  put("deparc_gt5_is", options.deparc_gt5_as_incidence ? is(arc_gt5) : arc_gt5);
  put("max_deparc_len", arc_max);
  put("right_arc_ratio", div0(right, arcs));
  put("left_arc_ratio", div0(left, arcs));
  put("modifier_var", div0(premod + postmod, lexical));
  put("premod_is", is(premod));
  put("postmod_is", is(postmod));
  put("subord_is", is(subord));
  put("relcl_is", is(relcl));
  put("pp_compl_is", is(ppcompl));

  // semantic features
  double sense_sum = 0, noun_sense_sum = 0;
  for (const auto& t : s.tokens) {
    if (tags.is_punctuation(t)) continue;
    double senses = lexicons.aux.senses(lookup_key(t));
    sense_sum += senses;
    if (tags.is_noun(t)) noun_sense_sum += senses;
  }
  put("avg_senses_per_token", div0(sense_sum, words));
  put("n_senses_per_n", div0(noun_sense_sum, nouns));
  return fv;
}

}  // namespace hitex
