#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chemdelt/kg/term.h"
#include "chemdelt/linker/lexicon.h"

namespace chemdelt::linker {

/// One linked occurrence. Offsets are BYTE offsets into the input text, not
/// code point offsets; `surface` is exactly text.substr(start, end - start).
struct Mention {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;
  kg::Iri concept_iri;
  bool ambiguous = false;

  friend bool operator==(const Mention&, const Mention&) = default;
};

/// Greedy longest-match dictionary linking over token windows. Candidates
/// are disambiguated by (1) the unique candidate in `context`, (2) the
/// highest lexicon weight, (3) the smallest IRI. When several candidates are
/// in context, rules (2) and (3) run over those only.
std::vector<Mention> link_entities(std::string_view text, const Lexicon& lexicon,
                                   const std::set<kg::Iri>& context);

/// Applies the disambiguation rules to a candidate list.
const kg::Iri& resolve_candidates(const std::vector<kg::Iri>& candidates, const Lexicon& lexicon,
                                  const std::set<kg::Iri>& context);

}  // namespace chemdelt::linker
