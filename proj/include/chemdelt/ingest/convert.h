#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemdelt/ingest/clem.h"
#include "chemdelt/kg/graph_store.h"
#include "chemdelt/linker/lexicon.h"

namespace chemdelt::ingest {

class ConversionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConversionReport {
  std::size_t files_parsed = 0;
  std::size_t triples_emitted = 0;
  std::size_t mentions_linked = 0;
  std::size_t mentions_ambiguous = 0;
  std::size_t dangling_refs = 0;
  std::vector<std::string> diagnostics;  // "<doc id>: <message>"

  /// Plain key=value lines followed by the diagnostics.
  std::string to_text() const;
};

struct ConvertOptions {
  /// Run the entity linker over text runs.
  bool link_text = true;
  /// Lexicon to link with; when null it is built from the emitted concept
  /// block before any lesson is converted.
  const linker::Lexicon* lexicon = nullptr;
};

struct ConversionResult {
  kg::GraphStore store;
  ConversionReport report;
};

/// Maps parsed documents to triples. Concepts are emitted first (sorted by
/// id), then lessons in (chapter, order) order. Explicit <chem> refs and
/// accepted linker mentions both become ce:teaches; the linker context for a
/// lesson is every concept taught earlier in the same chapter. Dangling refs
/// are reported and skipped. Throws ConversionError on duplicate ids or
/// duplicate (chapter, order) pairs before emitting anything.
ConversionResult convert_corpus(std::span<const LessonDoc> lessons, std::span<const ConceptDoc> concepts,
                                const ConvertOptions& options = {});

/// Exact triple count for a dangling-free corpus:
///   7P + C + (P - C) + 2M + R + T + sum over concepts (2 + S + B + Q + E)
/// where P pages, C chapters, M media refs, R distinct recommended-reading
/// refs per lesson, T distinct teaches links, and per concept S distinct
/// synonyms, B distinct broader refs, Q distinct requires refs, E = 1 if an
/// external id is present.
std::size_t expected_triple_count(std::span<const LessonDoc> lessons, std::span<const ConceptDoc> concepts,
                                  std::size_t teaches_links);

}  // namespace chemdelt::ingest
