#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "chemdelt/kg/term.h"

// Fixed eLearning/chemistry vocabulary. Every predicate the engine emits is
// one of the predicate IRIs below.
namespace chemdelt::kg::vocab {

inline constexpr std::string_view kNamespace = "http://example.org/chemelearn/";
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";

// Classes.
const Iri& concept_class();
const Iri& learning_unit_class();
const Iri& chapter_class();
const Iri& media_object_class();

// Predicates.
const Iri& type();
const Iri& label();
const Iri& synonym();
const Iri& external_id();
const Iri& teaches();
const Iri& requires_();
const Iri& broader();
const Iri& part_of();
const Iri& order();
const Iri& next();
const Iri& has_media();
const Iri& media_type();
const Iri& study_time();
const Iri& target_group();
const Iri& difficulty();
const Iri& recommended_reading();
const Iri& aligned_with();

const Iri& xsd_integer();

bool is_vocabulary_predicate(const Iri& predicate);

// Resource IRIs: `ce:unit/{id}`, `ce:chapter/{id}`, `ce:concept/{id}`,
// `ce:media/{unit}-{k}`.
Iri unit(std::string_view id);
Iri chapter(std::string_view id);
Iri concept_iri(std::string_view id);
Iri media(std::string_view unit_id, std::size_t k);

/// Local id for IRIs in one of the resource namespaces above; nullopt when
/// `iri` is not under `ce:{kind}/`.
std::optional<std::string> local_id(const Iri& iri, std::string_view kind);

}  // namespace chemdelt::kg::vocab
