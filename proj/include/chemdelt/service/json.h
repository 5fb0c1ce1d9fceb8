#pragma once

#include <json.hpp>

#include <map>
#include <optional>
#include <string>

#include "chemdelt/delt/trajectory.h"
#include "chemdelt/ingest/clem.h"
#include "chemdelt/ingest/corpus.h"
#include "chemdelt/kg/graph_store.h"
#include "chemdelt/learner/profile.h"
#include "chemdelt/search/index.h"

// Engine result -> API JSON. Key order is fixed and documented in README.md.
// Resource IRIs under ce:unit/, ce:concept/ and ce:chapter/ are rendered as
// their local ids; any other IRI is rendered in full.
namespace chemdelt::service {

using Json = nlohmann::ordered_json;

std::string unit_id(const kg::Iri& iri);
std::string concept_id(const kg::Iri& iri);
std::string chapter_id(const kg::Iri& iri);

/// Accepts a local id or a full IRI.
kg::Iri unit_ref(const std::string& id);
kg::Iri concept_ref(const std::string& id);
kg::Iri chapter_ref(const std::string& id);

/// {id, title, chapter, order, studyTime, targetGroup, difficulty,
///  media:[{type,src}], teaches, recommendedReading, next, body}.
/// Media src and body come from `doc` when given, else "".
Json unit_json(const kg::GraphStore& store, const kg::Iri& unit, const ingest::LessonDoc* doc);

/// {id, label, synonyms, broader, requires, requiredBy, taughtBy, alignedWith}
Json concept_json(const kg::GraphStore& store, const kg::Iri& concept_iri);

/// {total, hits:[{id,title,score}], facets:{dim:{value:count}}}
Json result_page_json(const search::ResultPage& page);

/// {mastery:{conceptId:value}, eventCount, registered[, userId]}
Json profile_json(const learner::UserProfile& profile);

/// {steps:[{unit,title,minutes,contributes}], gaps, totalMinutes, truncated}
Json trajectory_json(const kg::GraphStore& store, const delt::Trajectory& trajectory);

/// {staticUnits, dynamicUnits, sharedUnits, skipped, added, orderInversions}
Json comparison_json(const delt::PathComparison& comparison);

/// {pages, chapters, mediaObjects, concepts, triples}
Json stats_json(const ingest::CorpusStats& stats);

/// ce:label of `subject`, or "" when absent.
std::string label_of(const kg::GraphStore& store, const kg::Iri& subject);

}  // namespace chemdelt::service
