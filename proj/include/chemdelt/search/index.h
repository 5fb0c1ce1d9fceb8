#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chemdelt/kg/graph_store.h"

namespace chemdelt::search {

enum class Field { kTitle, kBody, kConceptLabels };
inline constexpr std::size_t kFieldCount = 3;
inline constexpr std::array<Field, kFieldCount> kFields = {Field::kTitle, Field::kBody, Field::kConceptLabels};

struct FieldWeights {
  double title = 3.0;
  double body = 1.0;
  double concept_labels = 2.0;

  double operator[](Field f) const;
};

enum class Dimension { kTargetGroup, kDifficulty, kMediaType, kChapter, kStudyTimeBucket };
inline constexpr std::size_t kDimensionCount = 5;
inline constexpr std::array<Dimension, kDimensionCount> kDimensions = {
    Dimension::kTargetGroup, Dimension::kDifficulty, Dimension::kMediaType, Dimension::kChapter,
    Dimension::kStudyTimeBucket};

/// "targetGroup", "difficulty", "mediaType", "chapter", "studyTimeBucket".
std::string_view to_string(Dimension d);
std::optional<Dimension> parse_dimension(std::string_view s);

/// "0-10", "11-30", "31-60" or "61+". Negative values fall in "0-10".
std::string study_time_bucket(long long minutes);

/// Tokens of `text` in order, each normalized. Same token grammar as the
/// entity linker.
std::vector<std::string> tokenize(std::string_view text);

/// Unit IRI -> plain body text. The store does not hold body text.
using BodyTexts = std::map<kg::Iri, std::string>;

struct IndexDoc {
  kg::Iri unit;
  std::string title;
  std::array<std::vector<std::string>, kFieldCount> field_tokens;
  std::array<std::set<std::string>, kDimensionCount> facets;
};

/// Immutable inverted index over the ce:LearningUnit subjects of a store.
///   title          ce:label of the unit
///   body           text from `bodies`
///   conceptLabels  ce:label and ce:synonym of every taught concept
/// Facets: ce:targetGroup, ce:difficulty, ce:mediaType of ce:hasMedia
/// objects, the local id of ce:partOf, and the ce:studyTime bucket.
class Index {
 public:
  struct Posting {
    std::uint32_t doc;
    std::array<std::uint32_t, kFieldCount> tf;
  };

  Index() = default;
  static Index build(const kg::GraphStore& store, const BodyTexts& bodies = {}, FieldWeights weights = {});

  std::size_t doc_count() const { return docs_.size(); }
  const std::vector<IndexDoc>& docs() const { return docs_; }
  const FieldWeights& weights() const { return weights_; }

  /// Postings sorted by doc, or null when the token is unknown.
  const std::vector<Posting>* postings(const std::string& token) const;
  std::size_t df(const std::string& token) const;
  /// ln(1 + N / df); 0 when df = 0.
  double idf(const std::string& token) const;

  /// Every value seen for `d` across all docs.
  const std::set<std::string>& facet_values(Dimension d) const {
    return facet_values_[static_cast<std::size_t>(d)];
  }

 private:
  std::vector<IndexDoc> docs_;  // sorted by unit IRI
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::array<std::set<std::string>, kDimensionCount> facet_values_;
  FieldWeights weights_;
};

inline Index build_index(const kg::GraphStore& store, const BodyTexts& bodies = {}) {
  return Index::build(store, bodies);
}

struct SearchQuery {
  /// Conjunctive; each is normalized before lookup. Duplicates count twice.
  std::vector<std::string> terms;
  /// Values OR-ed within a dimension, dimensions AND-ed. Empty = no filter.
  std::map<Dimension, std::set<std::string>> filters;
  std::size_t page = 0;
  std::size_t page_size = 10;
};

/// Free text is tokenized into terms; facets are (dimension, value) pairs.
/// Throws std::invalid_argument on an unknown dimension name.
SearchQuery make_query(std::string_view text, const std::vector<std::pair<std::string, std::string>>& facets = {});

struct Hit {
  kg::Iri unit;
  double score = 0;
  std::string title;

  friend bool operator==(const Hit&, const Hit&) = default;
};

struct ResultPage {
  std::size_t total = 0;
  std::vector<Hit> hits;
  /// Per dimension, every value the index knows (zero counts included).
  /// The counts for D apply the terms and every filter except D's own.
  std::map<Dimension, std::map<std::string, std::size_t>> facet_counts;

  friend bool operator==(const ResultPage&, const ResultPage&) = default;
};

/// score(d) = sum over terms t, then fields f, of w(f) * tf(t,d,f) * idf(t).
/// Hits sorted by score descending, then IRI. Throws std::invalid_argument
/// when page_size is 0.
ResultPage search(const Index& index, const SearchQuery& query);

}  // namespace chemdelt::search
