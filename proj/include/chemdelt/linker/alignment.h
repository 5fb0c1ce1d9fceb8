#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemdelt/kg/graph_store.h"
#include "chemdelt/kg/ntriples.h"

namespace chemdelt::linker {

struct VocabEntry {
  kg::Iri external_iri;
  std::string label;  // empty when the fixture gives none
  std::optional<std::string> identifier_key;
};

/// External vocabulary fixture (stand-in for a public ontology dump).
struct ExternalVocab {
  std::string name;
  std::vector<VocabEntry> entries;  // one per subject, sorted by IRI
};

struct VocabLoadResult {
  ExternalVocab vocab;
  std::vector<kg::LineError> errors;
};

/// Reads ce:label / ce:externalId triples; other predicates are ignored. A
/// subject with several labels keeps the smallest. Throws NTriplesError on
/// invalid UTF-8, like parse_ntriples.
VocabLoadResult load_external_vocab(std::string_view ntriples, std::string name);

enum class AlignMethod { kIdentifier, kLabel };

struct AlignmentLink {
  kg::Iri local_concept;
  kg::Iri external_iri;
  AlignMethod method;

  /// 1.0 for identifier matches, 0.8 for label matches.
  double confidence() const noexcept { return method == AlignMethod::kIdentifier ? 1.0 : 0.8; }

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
};

std::string_view to_string(AlignMethod method);

/// Links each local ce:Concept to at most one entry of `vocab`: identifier
/// equality first, then normalized label/synonym equality; the smallest
/// external IRI wins ties. Inserts (local, ce:alignedWith, external) triples
/// into `store` and returns the links sorted by local IRI.
std::vector<AlignmentLink> align(kg::GraphStore& store, const ExternalVocab& vocab);

/// Tab-separated report: localIri, externalIri, method, confidence.
std::string alignment_report_tsv(const std::vector<AlignmentLink>& links);

}  // namespace chemdelt::linker
