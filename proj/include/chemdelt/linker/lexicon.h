#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "chemdelt/kg/graph_store.h"

namespace chemdelt::linker {

/// Normalized label -> candidate concepts, built from ce:label and ce:synonym
/// of every ce:Concept. Candidate lists are sorted by IRI and duplicate-free.
class Lexicon {
 public:
  Lexicon() = default;

  /// Adds one (label, concept) pair; `label` is normalized here.
  void add(std::string_view label, const kg::Iri& concept_iri);

  /// Candidates for an already-normalized key, or nullptr.
  const std::vector<kg::Iri>* find(const std::string& normalized) const;

  /// Longest key measured in tokens.
  std::size_t max_token_length() const noexcept { return max_tokens_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<std::string, std::vector<kg::Iri>>& entries() const noexcept { return entries_; }

  /// Tie-break weight: number of triples with the concept as subject.
  std::size_t weight(const kg::Iri& concept_iri) const;
  void set_weight(const kg::Iri& concept_iri, std::size_t w) { weights_[concept_iri] = w; }

 private:
  std::map<std::string, std::vector<kg::Iri>> entries_;
  std::map<kg::Iri, std::size_t> weights_;
  std::size_t max_tokens_ = 0;
};

Lexicon build_lexicon(const kg::GraphStore& store);

}  // namespace chemdelt::linker
