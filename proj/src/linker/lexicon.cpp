#include "chemdelt/linker/lexicon.h"

#include <algorithm>

#include "chemdelt/kg/vocabulary.h"
#include "chemdelt/linker/text.h"

namespace chemdelt::linker {

namespace v = kg::vocab;

void Lexicon::add(std::string_view label, const kg::Iri& concept_iri) {
  std::string key = normalize(label);
  if (key.empty()) return;
  auto& list = entries_[key];
  auto it = std::lower_bound(list.begin(), list.end(), concept_iri);
  if (it == list.end() || *it != concept_iri) list.insert(it, concept_iri);
  max_tokens_ = std::max(max_tokens_, scan_tokens(key).size());
}

const std::vector<kg::Iri>* Lexicon::find(const std::string& normalized) const {
  auto it = entries_.find(normalized);
  return it == entries_.end() ? nullptr : &it->second;
}

std::size_t Lexicon::weight(const kg::Iri& concept_iri) const {
  auto it = weights_.find(concept_iri);
  return it == weights_.end() ? 0 : it->second;
}

Lexicon build_lexicon(const kg::GraphStore& store) {
  Lexicon lexicon;
  for (const kg::Iri& c : store.subjects(v::type(), v::concept_class())) {
    std::size_t weight = 0;
    for (const kg::Triple& t : store.match(c, std::nullopt, std::nullopt)) {
      ++weight;
      if (t.predicate != v::label() && t.predicate != v::synonym()) continue;
      if (const kg::Literal* l = t.object.if_literal()) lexicon.add(l->lexical(), c);
    }
    lexicon.set_weight(c, weight);
  }
  return lexicon;
}

}  // namespace chemdelt::linker
