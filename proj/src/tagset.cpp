#include "hitex/tagset.hpp"

#include "hitex/utf8.hpp"

namespace hitex {

bool TagsetConfig::msd_has(const Token& t, const TagSet& features) {
  std::string_view msd = t.msd;
  std::size_t start = 0;
  while (start <= msd.size()) {
    auto end = msd.find_first_of("|.", start);
    if (end == std::string_view::npos) end = msd.size();
    if (end > start && features.contains(msd.substr(start, end - start))) return true;
    start = end + 1;
  }
  return false;
}

std::string lookup_key(const Token& t) { return t.lemma ? *t.lemma : utf8::fold_case(t.form); }

bool key_in(const Token& t, const TagSet& lemmas) {
  if (t.lemma && lemmas.contains(*t.lemma)) return true;
  return lemmas.contains(utf8::fold_case(t.form));
}

}  // namespace hitex
