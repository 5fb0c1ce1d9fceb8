#include "chemdelt/linker/entity_linker.h"

#include <algorithm>

#include "chemdelt/linker/text.h"

namespace chemdelt::linker {

const kg::Iri& resolve_candidates(const std::vector<kg::Iri>& candidates, const Lexicon& lexicon,
                                  const std::set<kg::Iri>& context) {
  std::vector<const kg::Iri*> pool;
  for (const kg::Iri& c : candidates) {
    if (context.contains(c)) pool.push_back(&c);
  }
  if (pool.size() == 1) return *pool.front();
  if (pool.empty()) {
    for (const kg::Iri& c : candidates) pool.push_back(&c);
  }
  // Candidates are IRI-sorted, so the first maximum is the smallest IRI.
  const kg::Iri* best = pool.front();
  std::size_t best_weight = lexicon.weight(*best);
  for (const kg::Iri* c : pool) {
    std::size_t w = lexicon.weight(*c);
    if (w > best_weight) {
      best = c;
      best_weight = w;
    }
  }
  return *best;
}

std::vector<Mention> link_entities(std::string_view text, const Lexicon& lexicon,
                                   const std::set<kg::Iri>& context) {
  std::vector<Mention> mentions;
  if (lexicon.empty()) return mentions;
  const std::vector<TokenSpan> tokens = scan_tokens(text);
  const std::size_t max_window = lexicon.max_token_length();
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t window = std::min(max_window, tokens.size() - i);
    bool matched = false;
    for (; window > 0; --window) {
      std::size_t start = tokens[i].begin;
      std::size_t end = tokens[i + window - 1].end;
      const auto* candidates = lexicon.find(normalize(text.substr(start, end - start)));
      if (!candidates) continue;
      mentions.push_back(Mention{start, end, std::string(text.substr(start, end - start)),
                                 resolve_candidates(*candidates, lexicon, context),
                                 candidates->size() > 1});
      i += window;
      matched = true;
      break;
    }
    if (!matched) ++i;
  }
  return mentions;
}

}  // namespace chemdelt::linker
