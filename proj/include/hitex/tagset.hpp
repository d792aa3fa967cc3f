#pragma once

#include <set>
#include <string>
#include <string_view>

#include "hitex/corpus.hpp"

namespace hitex {

using TagSet = std::set<std::string, std::less<>>;

// Concrete tag strings and closed-class lemma sets the criteria and features
// look for. Defaults cover the SUC part-of-speech tags and Talbanken/MaltParser
// relations used by Swedish Korp annotations, with the matching Universal
// Dependencies labels alongside so UD treebanks work unchanged.
struct TagsetConfig {
  TagSet noun_pos{"NN", "NOUN"};
  TagSet proper_noun_pos{"PM", "PROPN"};
  TagSet verb_pos{"VB", "VERB", "AUX"};
  TagSet adjective_pos{"JJ", "ADJ"};
  TagSet adverb_pos{"AB", "ADV"};
  TagSet pronoun_pos{"PN", "PRON"};
  TagSet determiner_pos{"DT", "DET"};
  TagSet preposition_pos{"PP", "ADP"};
  TagSet participle_pos{"PC"};
  TagSet conjunction_pos{"KN", "CCONJ"};
  TagSet subjunction_pos{"SN", "SCONJ"};
  TagSet particle_pos{"PL", "PART"};
  TagSet interjection_pos{"IN", "INTJ"};
  TagSet abbreviation_pos{"AN"};
  TagSet relative_pos{"HA", "HD", "HP", "HS"};
  TagSet punctuation_pos{"MAD", "MID", "PAD", "PUNCT"};

  TagSet minor_delimiter_pos{"MID"};
  TagSet minor_delimiter_forms{",", "-", "–", "—", ":"};
  TagSet pairwise_delimiter_pos{"PAD"};
  TagSet pairwise_delimiter_forms{"\"", "'", "”", "“", "«", "»", "’"};
  TagSet sentence_final_forms{".", "!", "?"};

  TagSet nonfinite_msd{"INF", "SUP", "VerbForm=Inf", "VerbForm=Sup", "VerbForm=Part"};
  TagSet past_msd{"PRT", "Tense=Past"};
  TagSet present_msd{"PRS", "Tense=Pres"};
  TagSet supine_msd{"SUP", "VerbForm=Sup"};
  TagSet perfect_participle_msd{"PRF"};
  TagSet present_participle_msd{"PRS"};
  TagSet sform_msd{"SFO", "Voice=Pass"};
  TagSet neuter_msd{"NEU", "Gender=Neut"};

  TagSet subject_deprels{"SS", "ES", "FS", "nsubj", "nsubj:pass", "csubj", "expl"};
  TagSet object_deprels{"OO", "obj"};
  TagSet attribute_deprels{"AT", "amod"};
  TagSet expletive_deprels{"FS", "FO", "expl"};
  TagSet negation_deprels{"NA"};
  TagSet verb_group_deprels{"VG", "aux", "aux:pass"};
  // A finite verb heads a separate clause when it is the root or attaches
  // through one of these relations.
  TagSet clausal_deprels{"MS", "+F", "UA", "ET", "EF", "AA", "OO", "SS", "AT", "PA", "CJ", "SP", "TA",
                         "ccomp", "advcl", "acl", "acl:relcl", "conj", "parataxis", "csubj", "xcomp"};
  TagSet modifier_deprels{"AT", "ET", "amod", "nmod", "acl"};
  TagSet subordinate_deprels{"UA", "advcl", "ccomp", "csubj"};
  TagSet relative_clause_deprels{"acl:relcl"};
  TagSet pp_complement_deprels{"PA"};

  TagSet anaphoric_pronouns{"den", "det"};
  TagSet demonstrative_pronouns{"denna", "detta", "dessa", "sådan", "sådant", "sådana",
                                "densamma", "detsamma", "desamma"};
  TagSet third_person_singular{"han", "hon", "hen", "den", "det"};
  TagSet relative_markers{"som"};
  TagSet modal_lemmas{"kunna", "kan", "måste", "skola", "ska", "böra", "bör", "vilja", "vill", "få", "får"};
  TagSet auxiliary_lemmas{"ha", "vara", "bli", "skola", "ska", "kunna", "komma", "få", "vilja", "måste"};

  bool is_noun(const Token& t) const { return noun_pos.contains(t.pos); }
  bool is_proper_noun(const Token& t) const { return proper_noun_pos.contains(t.pos); }
  bool is_verb(const Token& t) const { return verb_pos.contains(t.pos); }
  bool is_adjective(const Token& t) const { return adjective_pos.contains(t.pos); }
  bool is_adverb(const Token& t) const { return adverb_pos.contains(t.pos); }
  bool is_pronoun(const Token& t) const { return pronoun_pos.contains(t.pos); }
  bool is_preposition(const Token& t) const { return preposition_pos.contains(t.pos); }
  bool is_participle(const Token& t) const { return participle_pos.contains(t.pos); }
  bool is_punctuation(const Token& t) const { return punctuation_pos.contains(t.pos); }
  // Nouns, verbs, adjectives and adverbs.
  bool is_lexical(const Token& t) const { return is_noun(t) || is_verb(t) || is_adjective(t) || is_adverb(t); }

  bool is_minor_delimiter(const Token& t) const {
    return minor_delimiter_pos.contains(t.pos) || minor_delimiter_forms.contains(t.form);
  }
  bool is_pairwise_delimiter(const Token& t) const {
    return pairwise_delimiter_pos.contains(t.pos) || pairwise_delimiter_forms.contains(t.form);
  }

  bool is_finite_verb(const Token& t) const { return is_verb(t) && !msd_has(t, nonfinite_msd); }

  bool operator==(const TagsetConfig&) const = default;

  // True when any '|'- or '.'-separated msd feature is in `features`.
  static bool msd_has(const Token& t, const TagSet& features);
};

// Lemma when present, otherwise the case-folded form.
std::string lookup_key(const Token& t);

bool key_in(const Token& t, const TagSet& lemmas);

}  // namespace hitex
