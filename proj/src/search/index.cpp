#include "chemdelt/search/index.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chemdelt/kg/vocabulary.h"
#include "chemdelt/linker/text.h"

namespace chemdelt::search {

namespace v = kg::vocab;

double FieldWeights::operator[](Field f) const {
  switch (f) {
    case Field::kTitle: return title;
    case Field::kBody: return body;
    case Field::kConceptLabels: return concept_labels;
  }
  return 0;
}

std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::kTargetGroup: return "targetGroup";
    case Dimension::kDifficulty: return "difficulty";
    case Dimension::kMediaType: return "mediaType";
    case Dimension::kChapter: return "chapter";
    case Dimension::kStudyTimeBucket: return "studyTimeBucket";
  }
  return "";
}

std::optional<Dimension> parse_dimension(std::string_view s) {
  for (Dimension d : kDimensions) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

std::string study_time_bucket(long long minutes) {
  if (minutes <= 10) return "0-10";
  if (minutes <= 30) return "11-30";
  if (minutes <= 60) return "31-60";
  return "61+";
}

std::vector<std::string> tokenize(std::string_view text) {
  std::string norm = linker::normalize(text);
  std::vector<std::string> out;
  for (const auto& span : linker::scan_tokens(norm)) out.push_back(norm.substr(span.begin, span.end - span.begin));
  return out;
}

namespace {

std::vector<std::string> literal_values(const kg::GraphStore& store, const kg::Iri& s, const kg::Iri& p) {
  std::vector<std::string> out;
  for (const kg::Term& t : store.objects(s, p)) {
    if (const auto* l = t.if_literal()) out.push_back(l->lexical());
  }
  return out;
}

void append_tokens(std::vector<std::string>& out, std::string_view text) {
  for (auto& t : tokenize(text)) out.push_back(std::move(t));
}

}  // namespace

Index Index::build(const kg::GraphStore& store, const BodyTexts& bodies, FieldWeights weights) {
  Index index;
  index.weights_ = weights;
  auto units = store.subjects(v::type(), v::learning_unit_class());
  std::sort(units.begin(), units.end());
  for (const kg::Iri& unit : units) {
    IndexDoc doc{unit, {}, {}, {}};
    auto titles = literal_values(store, unit, v::label());
    if (!titles.empty()) doc.title = titles.front();
    for (const auto& t : titles) append_tokens(doc.field_tokens[0], t);
    if (auto it = bodies.find(unit); it != bodies.end()) append_tokens(doc.field_tokens[1], it->second);
    for (const kg::Term& c : store.objects(unit, v::teaches())) {
      if (!c.is_iri()) continue;
      for (const auto& l : literal_values(store, c.iri(), v::label())) append_tokens(doc.field_tokens[2], l);
      for (const auto& l : literal_values(store, c.iri(), v::synonym())) append_tokens(doc.field_tokens[2], l);
    }

    auto& f = doc.facets;
    for (auto& g : literal_values(store, unit, v::target_group())) f[0].insert(g);
    for (auto& d : literal_values(store, unit, v::difficulty())) f[1].insert(d);
    for (const kg::Term& m : store.objects(unit, v::has_media())) {
      if (!m.is_iri()) continue;
      for (auto& t : literal_values(store, m.iri(), v::media_type())) f[2].insert(t);
    }
    for (const kg::Term& h : store.objects(unit, v::part_of())) {
      if (h.is_iri()) f[3].insert(v::local_id(h.iri(), "chapter").value_or(h.iri().str()));
    }
    for (auto& st : literal_values(store, unit, v::study_time())) {
      try {
        f[4].insert(study_time_bucket(std::stoll(st)));
      } catch (const std::exception&) {
      }
    }
    index.docs_.push_back(std::move(doc));
  }

  for (std::uint32_t d = 0; d < index.docs_.size(); ++d) {
    const IndexDoc& doc = index.docs_[d];
    std::map<std::string, std::array<std::uint32_t, kFieldCount>> tf;
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      for (const auto& tok : doc.field_tokens[f]) ++tf[tok][f];
    }
    for (auto& [tok, counts] : tf) index.postings_[tok].push_back(Posting{d, counts});
    for (std::size_t k = 0; k < kDimensionCount; ++k) {
      index.facet_values_[k].insert(doc.facets[k].begin(), doc.facets[k].end());
    }
  }
  return index;
}

const std::vector<Index::Posting>* Index::postings(const std::string& token) const {
  auto it = postings_.find(token);
  return it == postings_.end() ? nullptr : &it->second;
}

std::size_t Index::df(const std::string& token) const {
  const auto* p = postings(token);
  return p ? p->size() : 0;
}

double Index::idf(const std::string& token) const {
  std::size_t n = df(token);
  if (n == 0) return 0;
  return std::log(1.0 + static_cast<double>(docs_.size()) / static_cast<double>(n));
}

SearchQuery make_query(std::string_view text, const std::vector<std::pair<std::string, std::string>>& facets) {
  SearchQuery q;
  q.terms = tokenize(text);
  for (const auto& [dim, value] : facets) {
    auto d = parse_dimension(dim);
    if (!d) throw std::invalid_argument("unknown facet dimension '" + dim + "'");
    q.filters[*d].insert(value);
  }
  return q;
}

ResultPage search(const Index& index, const SearchQuery& query) {
  if (query.page_size == 0) throw std::invalid_argument("page size must be positive");
  const auto& docs = index.docs();

  std::vector<std::string> terms;
  for (const auto& t : query.terms) terms.push_back(linker::normalize(t));

  // Docs containing every term: intersect postings, shortest list first.
  std::vector<std::uint32_t> candidates;
  if (terms.empty()) {
    candidates.resize(docs.size());
    for (std::uint32_t d = 0; d < docs.size(); ++d) candidates[d] = d;
  } else {
    std::vector<const std::vector<Index::Posting>*> lists;
    for (const auto& t : terms) lists.push_back(index.postings(t));
    if (std::find(lists.begin(), lists.end(), nullptr) == lists.end()) {
      auto shortest = *std::min_element(lists.begin(), lists.end(),
                                        [](const auto* a, const auto* b) { return a->size() < b->size(); });
      for (const auto& p : *shortest) candidates.push_back(p.doc);
      for (const auto* list : lists) {
        if (list == shortest) continue;
        std::vector<std::uint32_t> kept;
        auto it = list->begin();
        for (std::uint32_t d : candidates) {
          it = std::lower_bound(it, list->end(), d, [](const Index::Posting& p, std::uint32_t x) { return p.doc < x; });
          if (it != list->end() && it->doc == d) kept.push_back(d);
        }
        candidates = std::move(kept);
      }
    }
  }

  // Bit k set = doc fails the filter on dimension k.
  auto failures = [&](std::uint32_t d) {
    unsigned mask = 0;
    for (const auto& [dim, values] : query.filters) {
      if (values.empty()) continue;
      auto k = static_cast<std::size_t>(dim);
      const auto& have = docs[d].facets[k];
      bool hit = std::any_of(values.begin(), values.end(), [&](const std::string& x) { return have.contains(x); });
      if (!hit) mask |= 1u << k;
    }
    return mask;
  };

  ResultPage page;
  for (Dimension dim : kDimensions) {
    auto& counts = page.facet_counts[dim];
    for (const auto& value : index.facet_values(dim)) counts[value] = 0;
  }

  std::vector<std::uint32_t> matched;
  for (std::uint32_t d : candidates) {
    unsigned mask = failures(d);
    if (mask == 0) matched.push_back(d);
    for (Dimension dim : kDimensions) {
      auto k = static_cast<std::size_t>(dim);
      if ((mask & ~(1u << k)) != 0) continue;
      auto& counts = page.facet_counts[dim];
      for (const auto& value : docs[d].facets[k]) ++counts[value];
    }
  }

  std::vector<Hit> hits;
  hits.reserve(matched.size());
  std::vector<double> idf;
  std::vector<const std::vector<Index::Posting>*> lists;
  for (const auto& t : terms) {
    idf.push_back(index.idf(t));
    lists.push_back(index.postings(t));
  }
  for (std::uint32_t d : matched) {
    double score = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      auto it = std::lower_bound(lists[i]->begin(), lists[i]->end(), d,
                                 [](const Index::Posting& p, std::uint32_t x) { return p.doc < x; });
      for (Field f : kFields) {
        score += index.weights()[f] * static_cast<double>(it->tf[static_cast<std::size_t>(f)]) * idf[i];
      }
    }
    hits.push_back(Hit{docs[d].unit, score, docs[d].title});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.unit < b.unit;
  });

  page.total = hits.size();
  std::size_t begin =
      query.page > hits.size() / query.page_size ? hits.size() : std::min(hits.size(), query.page * query.page_size);
  std::size_t end = begin + std::min(query.page_size, hits.size() - begin);
  page.hits.assign(std::make_move_iterator(hits.begin() + static_cast<std::ptrdiff_t>(begin)),
                   std::make_move_iterator(hits.begin() + static_cast<std::ptrdiff_t>(end)));
  return page;
}

}  // namespace chemdelt::search
