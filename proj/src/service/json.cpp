#include "chemdelt/service/json.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <vector>

#include "chemdelt/kg/vocabulary.h"

namespace chemdelt::service {

namespace v = kg::vocab;
using kg::Iri;

namespace {

std::string local_or_full(const Iri& iri, std::string_view kind) {
  auto id = v::local_id(iri, kind);
  return id ? *id : iri.str();
}

kg::Iri ref(const std::string& id, Iri (*make)(std::string_view)) {
  if (id.find(':') != std::string::npos && Iri::is_valid(id)) return Iri(id);
  return make(id);
}

std::optional<std::string> literal_of(const kg::GraphStore& store, const Iri& s, const Iri& p) {
  auto t = store.first_object(s, p);
  if (!t || !t->is_literal()) return std::nullopt;
  return t->literal().lexical();
}

Json integer_or_null(const kg::GraphStore& store, const Iri& s, const Iri& p) {
  auto lex = literal_of(store, s, p);
  if (!lex) return nullptr;
  long long n = 0;
  auto [end, ec] = std::from_chars(lex->data(), lex->data() + lex->size(), n);
  if (ec != std::errc() || end != lex->data() + lex->size()) return *lex;
  return n;
}

template <typename Fn>
Json sorted_ids(const std::vector<Iri>& iris, Fn&& render) {
  std::vector<std::string> out;
  for (const Iri& i : iris) out.push_back(render(i));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Iri> iri_objects(const kg::GraphStore& store, const Iri& s, const Iri& p) {
  std::vector<Iri> out;
  for (const kg::Term& t : store.objects(s, p)) {
    if (t.is_iri()) out.push_back(t.iri());
  }
  return out;
}

std::vector<std::string> literal_objects(const kg::GraphStore& store, const Iri& s, const Iri& p) {
  std::vector<std::string> out;
  for (const kg::Term& t : store.objects(s, p)) {
    if (t.is_literal()) out.push_back(t.literal().lexical());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Numeric suffix k of ce:media/{unit}-{k}; 0 when it has none.
std::size_t media_index(const Iri& media) {
  const std::string& s = media.str();
  auto dash = s.rfind('-');
  std::size_t k = 0;
  if (dash == std::string::npos) return 0;
  auto [end, ec] = std::from_chars(s.data() + dash + 1, s.data() + s.size(), k);
  return ec == std::errc() && end == s.data() + s.size() ? k : 0;
}

}  // namespace

std::string unit_id(const Iri& iri) { return local_or_full(iri, "unit"); }
std::string concept_id(const Iri& iri) { return local_or_full(iri, "concept"); }
std::string chapter_id(const Iri& iri) { return local_or_full(iri, "chapter"); }

Iri unit_ref(const std::string& id) { return ref(id, &v::unit); }
Iri concept_ref(const std::string& id) { return ref(id, &v::concept_iri); }
Iri chapter_ref(const std::string& id) { return ref(id, &v::chapter); }

std::string label_of(const kg::GraphStore& store, const Iri& subject) {
  auto labels = literal_objects(store, subject, v::label());
  return labels.empty() ? std::string() : labels.front();
}

Json unit_json(const kg::GraphStore& store, const Iri& unit, const ingest::LessonDoc* doc) {
  Json j;
  j["id"] = unit_id(unit);
  j["title"] = label_of(store, unit);
  auto chapters = iri_objects(store, unit, v::part_of());
  j["chapter"] = chapters.empty() ? Json(nullptr) : Json(chapter_id(*std::min_element(chapters.begin(), chapters.end())));
  j["order"] = integer_or_null(store, unit, v::order());
  j["studyTime"] = integer_or_null(store, unit, v::study_time());
  auto group = literal_of(store, unit, v::target_group());
  j["targetGroup"] = group ? Json(*group) : Json(nullptr);
  j["difficulty"] = integer_or_null(store, unit, v::difficulty());

  std::vector<const ingest::MediaRef*> doc_media;
  if (doc) {
    for (const auto& run : doc->body) {
      if (auto m = std::get_if<ingest::MediaRef>(&run)) doc_media.push_back(m);
    }
  }
  auto media = iri_objects(store, unit, v::has_media());
  std::stable_sort(media.begin(), media.end(),
                   [](const Iri& a, const Iri& b) { return media_index(a) < media_index(b); });
  Json media_json = Json::array();
  for (const Iri& m : media) {
    auto type = literal_of(store, m, v::media_type());
    std::size_t k = media_index(m);
    Json item;
    item["type"] = type ? Json(*type) : Json(nullptr);
    item["src"] = k >= 1 && k <= doc_media.size() ? doc_media[k - 1]->src : std::string();
    media_json.push_back(std::move(item));
  }
  j["media"] = std::move(media_json);
  j["teaches"] = sorted_ids(iri_objects(store, unit, v::teaches()), concept_id);
  j["recommendedReading"] = sorted_ids(iri_objects(store, unit, v::recommended_reading()), unit_id);
  auto next = iri_objects(store, unit, v::next());
  j["next"] = next.empty() ? Json(nullptr) : Json(unit_id(*std::min_element(next.begin(), next.end())));
  j["body"] = doc ? ingest::body_text(*doc) : std::string();
  return j;
}

Json concept_json(const kg::GraphStore& store, const Iri& c) {
  Json j;
  j["id"] = concept_id(c);
  j["label"] = label_of(store, c);
  j["synonyms"] = literal_objects(store, c, v::synonym());
  j["broader"] = sorted_ids(iri_objects(store, c, v::broader()), concept_id);
  j["requires"] = sorted_ids(iri_objects(store, c, v::requires_()), concept_id);
  j["requiredBy"] = sorted_ids(store.subjects(v::requires_(), c), concept_id);
  std::vector<Iri> teachers;
  for (const Iri& u : store.subjects(v::teaches(), c)) {
    if (store.has_type(u, v::learning_unit_class())) teachers.push_back(u);
  }
  j["taughtBy"] = sorted_ids(teachers, unit_id);
  j["alignedWith"] = sorted_ids(iri_objects(store, c, v::aligned_with()), [](const Iri& i) { return i.str(); });
  return j;
}

Json result_page_json(const search::ResultPage& page) {
  Json j;
  j["total"] = page.total;
  Json hits = Json::array();
  for (const auto& h : page.hits) {
    Json hit;
    hit["id"] = unit_id(h.unit);
    hit["title"] = h.title;
    hit["score"] = h.score;
    hits.push_back(std::move(hit));
  }
  j["hits"] = std::move(hits);
  Json facets = Json::object();
  for (search::Dimension d : search::kDimensions) {
    Json counts = Json::object();
    if (auto it = page.facet_counts.find(d); it != page.facet_counts.end()) {
      for (const auto& [value, n] : it->second) counts[value] = n;
    }
    facets[std::string(search::to_string(d))] = std::move(counts);
  }
  j["facets"] = std::move(facets);
  return j;
}

Json profile_json(const learner::UserProfile& profile) {
  Json j;
  Json mastery = Json::object();
  std::map<std::string, double> by_id;
  for (const auto& [c, m] : profile.mastery) by_id[concept_id(c)] = m;
  for (const auto& [id, m] : by_id) mastery[id] = m;
  j["mastery"] = std::move(mastery);
  j["eventCount"] = profile.event_count;
  j["registered"] = profile.registered;
  if (profile.user_id) j["userId"] = *profile.user_id;
  return j;
}

Json trajectory_json(const kg::GraphStore& store, const delt::Trajectory& t) {
  Json j;
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json step;
    step["unit"] = unit_id(s.unit);
    step["title"] = label_of(store, s.unit);
    step["minutes"] = s.study_time_minutes;
    std::vector<Iri> contributes(s.contributes.begin(), s.contributes.end());
    step["contributes"] = sorted_ids(contributes, concept_id);
    steps.push_back(std::move(step));
  }
  j["steps"] = std::move(steps);
  j["gaps"] = sorted_ids(std::vector<Iri>(t.gaps.begin(), t.gaps.end()), concept_id);
  j["totalMinutes"] = t.total_minutes;
  j["truncated"] = t.truncated;
  return j;
}

Json comparison_json(const delt::PathComparison& c) {
  auto ordered = [](const std::vector<Iri>& units) {
    Json a = Json::array();
    for (const Iri& u : units) a.push_back(unit_id(u));
    return a;
  };
  auto set = [](const std::set<Iri>& units) {
    return sorted_ids(std::vector<Iri>(units.begin(), units.end()), unit_id);
  };
  Json j;
  j["staticUnits"] = ordered(c.static_units);
  j["dynamicUnits"] = ordered(c.dynamic_units);
  j["sharedUnits"] = set(c.shared);
  j["skipped"] = set(c.skipped);
  j["added"] = set(c.added);
  j["orderInversions"] = c.order_inversions;
  return j;
}

Json stats_json(const ingest::CorpusStats& s) {
  Json j;
  j["pages"] = s.pages;
  j["chapters"] = s.chapters;
  j["mediaObjects"] = s.media_objects;
  j["concepts"] = s.concepts;
  j["triples"] = s.triples;
  return j;
}

}  // namespace chemdelt::service
