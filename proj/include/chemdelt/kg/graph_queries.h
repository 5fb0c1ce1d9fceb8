#pragma once

#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemdelt/kg/graph_store.h"

namespace chemdelt::kg {

class QueryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using MasteredPredicate = std::function<bool(const Iri&)>;

/// Smallest set containing `goal` that is closed under ce:requires for every
/// non-mastered member. Mastered concepts are kept when reached but not
/// expanded. Throws QueryError if `goal` is not a ce:Concept.
std::set<Iri> prerequisite_closure(const GraphStore& store, const Iri& goal,
                                   const MasteredPredicate& mastered);

/// Direct ce:requires objects of `concept` (IRIs only).
std::vector<Iri> direct_prerequisites(const GraphStore& store, const Iri& concept_iri);

struct Violation {
  Iri subject;
  std::string rule;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
  friend auto operator<=>(const Violation&, const Violation&) = default;
};

// Rule identifiers reported by validate_schema.
namespace rules {
inline constexpr const char* kTeachesRange = "teaches-range";
inline constexpr const char* kRequiresDomain = "requires-domain";
inline constexpr const char* kRequiresRange = "requires-range";
inline constexpr const char* kRequiresAcyclic = "requires-acyclic";
inline constexpr const char* kStudyTime = "studytime-literal";
inline constexpr const char* kDifficulty = "difficulty-range";
inline constexpr const char* kNextOut = "next-out-degree";
inline constexpr const char* kNextIn = "next-in-degree";
inline constexpr const char* kNextChapter = "next-chapter";
inline constexpr const char* kNextCycle = "next-cycle";
}  // namespace rules

/// Schema checks over the whole store. Violations are sorted by
/// (subject, rule, message); every ce:requires cycle is reported once, as a
/// single violation per strongly connected component.
std::vector<Violation> validate_schema(const GraphStore& store);

/// One elementary ce:requires cycle among concepts (optionally restricted to
/// `restrict_to`), starting at its smallest IRI; empty when acyclic.
std::vector<Iri> find_requires_cycle(const GraphStore& store,
                                     const std::set<Iri>* restrict_to = nullptr);

/// Renders a cycle as "a -> b -> a".
std::string format_cycle(const std::vector<Iri>& cycle);

}  // namespace chemdelt::kg
