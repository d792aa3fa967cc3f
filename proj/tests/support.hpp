#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "hitex/classifier.hpp"
#include "hitex/corpus.hpp"
#include "hitex/lexicons.hpp"

namespace fixture {

inline std::string path(const std::string& rel) { return std::string(HITEX_SOURCE_DIR) + "/" + rel; }

inline const std::vector<hitex::AnnotatedSentence>& corpus() {
  static const auto c = hitex::read_conllu_file(path("tests/data/fixture_corpus.conllu"));
  return c;
}

inline const hitex::AnnotatedSentence& sentence(const std::string& id) {
  for (const auto& s : corpus()) {
    if (s.id == id) return s;
  }
  throw std::runtime_error("no fixture sentence " + id);
}

inline void load_aux(hitex::Lexicons& lex) {
  using hitex::AuxKind;
  lex.load_aux(AuxKind::sensitive, path("data/sensitive.tsv"));
  lex.load_aux(AuxKind::anaphoric_adverbs, path("data/anaphoric_adverbs.tsv"));
  lex.load_aux(AuxKind::speaking_verbs, path("data/speaking_verbs.tsv"));
  lex.load_aux(AuxKind::paired_conjunctions, path("data/paired_conjunctions.tsv"));
  lex.load_aux(AuxKind::sense_counts, path("data/sense_counts.tsv"));
}

inline const hitex::Lexicons& lexicons() {
  static const hitex::Lexicons lex = [] {
    hitex::Lexicons l;
    l.load_kelly(path("tests/data/kelly.tsv"));
    l.load_svalex(path("tests/data/svalex.tsv"));
    l.load_lmi(path("tests/data/lmi.tsv"));
    load_aux(l);
    return l;
  }();
  return lex;
}

inline const hitex::CefrModel& model() {
  static const auto m = hitex::CefrModel::load(path("tests/data/fixture_model.json"));
  return m;
}

// Builds a sentence from lines of "form lemma pos msd head deprel"; "_" lemma
// means non-lemmatized, "_" msd means empty.
inline hitex::AnnotatedSentence make(const std::string& id, const std::string& spec) {
  hitex::AnnotatedSentence s;
  s.id = id;
  std::istringstream in(spec);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream f(line);
    hitex::Token t;
    std::string lemma, msd;
    if (!(f >> t.form >> lemma >> t.pos >> msd >> t.head >> t.deprel)) continue;
    t.index = static_cast<int>(s.tokens.size()) + 1;
    if (lemma != "_") t.lemma = lemma;
    if (msd != "_") t.msd = msd;
    s.tokens.push_back(t);
  }
  return s;
}

}  // namespace fixture
