#include "chemdelt/kg/vocabulary.h"

#include <array>
#include <string>

namespace chemdelt::kg::vocab {

namespace {

Iri ce(std::string_view local) {
  std::string s(kNamespace);
  s += local;
  return Iri(std::move(s));
}

}  // namespace

#define CHEMDELT_VOCAB_TERM(fn, expr) \
  const Iri& fn() {                   \
    static const Iri iri = expr;      \
    return iri;                       \
  }

CHEMDELT_VOCAB_TERM(concept_class, ce("Concept"))
CHEMDELT_VOCAB_TERM(learning_unit_class, ce("LearningUnit"))
CHEMDELT_VOCAB_TERM(chapter_class, ce("Chapter"))
CHEMDELT_VOCAB_TERM(media_object_class, ce("MediaObject"))

CHEMDELT_VOCAB_TERM(type, Iri(std::string(kRdfType)))
CHEMDELT_VOCAB_TERM(label, ce("label"))
CHEMDELT_VOCAB_TERM(synonym, ce("synonym"))
CHEMDELT_VOCAB_TERM(external_id, ce("externalId"))
CHEMDELT_VOCAB_TERM(teaches, ce("teaches"))
CHEMDELT_VOCAB_TERM(requires_, ce("requires"))
CHEMDELT_VOCAB_TERM(broader, ce("broader"))
CHEMDELT_VOCAB_TERM(part_of, ce("partOf"))
CHEMDELT_VOCAB_TERM(order, ce("order"))
CHEMDELT_VOCAB_TERM(next, ce("next"))
CHEMDELT_VOCAB_TERM(has_media, ce("hasMedia"))
CHEMDELT_VOCAB_TERM(media_type, ce("mediaType"))
CHEMDELT_VOCAB_TERM(study_time, ce("studyTime"))
CHEMDELT_VOCAB_TERM(target_group, ce("targetGroup"))
CHEMDELT_VOCAB_TERM(difficulty, ce("difficulty"))
CHEMDELT_VOCAB_TERM(recommended_reading, ce("recommendedReading"))
CHEMDELT_VOCAB_TERM(aligned_with, ce("alignedWith"))

CHEMDELT_VOCAB_TERM(xsd_integer, Iri(std::string(kXsdInteger)))

#undef CHEMDELT_VOCAB_TERM

bool is_vocabulary_predicate(const Iri& predicate) {
  static const std::array<const Iri*, 17> all = {
      &type(),       &label(),        &synonym(),    &external_id(),         &teaches(),
      &requires_(),   &broader(),      &part_of(),    &order(),               &next(),
      &has_media(),  &media_type(),   &study_time(), &target_group(),        &difficulty(),
      &recommended_reading(),         &aligned_with()};
  for (const Iri* p : all) {
    if (*p == predicate) return true;
  }
  return false;
}

Iri unit(std::string_view id) { return ce(std::string("unit/").append(id)); }
Iri chapter(std::string_view id) { return ce(std::string("chapter/").append(id)); }
Iri concept_iri(std::string_view id) { return ce(std::string("concept/").append(id)); }

Iri media(std::string_view unit_id, std::size_t k) {
  return ce(std::string("media/").append(unit_id).append("-").append(std::to_string(k)));
}

std::optional<std::string> local_id(const Iri& iri, std::string_view kind) {
  std::string prefix(kNamespace);
  prefix.append(kind).append("/");
  const std::string& s = iri.str();
  if (s.size() <= prefix.size() || s.compare(0, prefix.size(), prefix) != 0) return std::nullopt;
  return s.substr(prefix.size());
}

}  // namespace chemdelt::kg::vocab
