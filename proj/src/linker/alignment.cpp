#include "chemdelt/linker/alignment.h"

#include <algorithm>
#include <map>
#include <set>

#include "chemdelt/kg/vocabulary.h"
#include "chemdelt/linker/text.h"

namespace chemdelt::linker {

namespace v = kg::vocab;

std::string_view to_string(AlignMethod method) {
  return method == AlignMethod::kIdentifier ? "identifier" : "label";
}

VocabLoadResult load_external_vocab(std::string_view ntriples, std::string name) {
  kg::ParseResult parsed = kg::parse_ntriples(ntriples);
  std::map<kg::Iri, VocabEntry> by_subject;
  for (const kg::Triple& t : parsed.triples) {
    const kg::Literal* lit = t.object.if_literal();
    if (!lit) continue;
    bool is_label = t.predicate == v::label();
    bool is_key = t.predicate == v::external_id();
    if (!is_label && !is_key) continue;
    auto [it, inserted] = by_subject.try_emplace(t.subject, VocabEntry{t.subject, {}, std::nullopt});
    VocabEntry& e = it->second;
    if (is_label && (e.label.empty() || lit->lexical() < e.label)) e.label = lit->lexical();
    if (is_key && (!e.identifier_key || lit->lexical() < *e.identifier_key)) e.identifier_key = lit->lexical();
  }
  VocabLoadResult result{ExternalVocab{std::move(name), {}}, std::move(parsed.errors)};
  for (auto& [iri, entry] : by_subject) result.vocab.entries.push_back(std::move(entry));
  return result;
}

std::vector<AlignmentLink> align(kg::GraphStore& store, const ExternalVocab& vocab) {
  // Entries are IRI-sorted, so the first hit per key is the tie-break winner.
  std::map<std::string, const kg::Iri*> by_key;
  std::map<std::string, const kg::Iri*> by_label;
  for (const VocabEntry& e : vocab.entries) {
    if (e.identifier_key) by_key.try_emplace(*e.identifier_key, &e.external_iri);
    if (!e.label.empty()) by_label.try_emplace(normalize(e.label), &e.external_iri);
  }

  std::vector<AlignmentLink> links;
  for (const kg::Iri& c : store.subjects(v::type(), v::concept_class())) {
    const kg::Iri* best = nullptr;
    AlignMethod method = AlignMethod::kIdentifier;
    for (const kg::Term& id : store.objects(c, v::external_id())) {
      const kg::Literal* lit = id.if_literal();
      if (!lit) continue;
      auto it = by_key.find(lit->lexical());
      if (it != by_key.end() && (!best || *it->second < *best)) best = it->second;
    }
    if (!best) {
      method = AlignMethod::kLabel;
      for (const kg::Iri* pred : {&v::label(), &v::synonym()}) {
        for (const kg::Term& l : store.objects(c, *pred)) {
          const kg::Literal* lit = l.if_literal();
          if (!lit) continue;
          auto it = by_label.find(normalize(lit->lexical()));
          if (it != by_label.end() && (!best || *it->second < *best)) best = it->second;
        }
      }
    }
    if (best) links.push_back(AlignmentLink{c, *best, method});
  }
  for (const AlignmentLink& link : links) {
    store.insert(kg::Triple{link.local_concept, v::aligned_with(), link.external_iri});
  }
  return links;
}

std::string alignment_report_tsv(const std::vector<AlignmentLink>& links) {
  std::vector<const AlignmentLink*> sorted;
  for (const auto& l : links) sorted.push_back(&l);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const AlignmentLink* a, const AlignmentLink* b) { return a->local_concept < b->local_concept; });
  std::string out;
  for (const AlignmentLink* l : sorted) {
    out += l->local_concept.str();
    out += '\t';
    out += l->external_iri.str();
    out += '\t';
    out += to_string(l->method);
    out += '\t';
    out += l->method == AlignMethod::kIdentifier ? "1.0" : "0.8";
    out += '\n';
  }
  return out;
}

}  // namespace chemdelt::linker
