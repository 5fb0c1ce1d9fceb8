#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chemdelt/kg/graph_store.h"
#include "chemdelt/learner/profile.h"

namespace chemdelt::delt {

inline constexpr double kBeta = 0.25;  // difficulty-mismatch weight
inline constexpr int kDefaultLevel = 3;

class TrajectoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Goal is not a ce:Concept.
class UnknownConceptError : public TrajectoryError {
 public:
  using TrajectoryError::TrajectoryError;
};

class CyclicPrerequisitesError : public TrajectoryError {
 public:
  explicit CyclicPrerequisitesError(std::vector<kg::Iri> cycle);
  const std::vector<kg::Iri>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<kg::Iri> cycle_;
};

/// Chapter unknown or its ce:next links do not form a single chain.
class StaticPathError : public TrajectoryError {
 public:
  using TrajectoryError::TrajectoryError;
};

/// Level outside 1..5, theta outside (0, 1], negative budget.
class RequestError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TrajectoryRequest {
  kg::Iri goal;
  learner::UserProfile profile;
  int level = kDefaultLevel;
  double theta = learner::kTheta;
  std::optional<long long> max_minutes;
};

struct Step {
  kg::Iri unit;
  std::set<kg::Iri> contributes;
  long long study_time_minutes = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Trajectory {
  std::vector<Step> steps;
  std::set<kg::Iri> gaps;
  long long total_minutes = 0;
  bool truncated = false;

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct PathComparison {
  std::vector<kg::Iri> static_units;
  std::vector<kg::Iri> dynamic_units;
  std::set<kg::Iri> shared;
  std::set<kg::Iri> skipped;
  std::set<kg::Iri> added;
  std::size_t order_inversions = 0;

  friend bool operator==(const PathComparison&, const PathComparison&) = default;
};

/// Closure of `goal` under ce:requires (not expanded past mastered concepts)
/// minus the mastered concepts, in Kahn order with the smallest available IRI
/// first. Throws UnknownConceptError, or CyclicPrerequisitesError naming one
/// cycle among the required concepts.
std::vector<kg::Iri> required_concepts(const kg::GraphStore& store, const kg::Iri& goal,
                                       const learner::UserProfile& profile, double theta = learner::kTheta);

/// ce:studyTime and ce:difficulty of a unit (defaults 10 and 3 when absent).
long long unit_study_time(const kg::GraphStore& store, const kg::Iri& unit);
int unit_difficulty(const kg::GraphStore& store, const kg::Iri& unit);

/// studyTime * (1 + beta * |difficulty - level|)
double unit_cost(const kg::GraphStore& store, const kg::Iri& unit, int level);

/// Greedy cover over `ordered` (topologically sorted). Each uncovered concept
/// anchors a step with its cheapest unused ce:LearningUnit (ties by IRI) or
/// becomes a gap. The step also absorbs every later uncovered concept taught
/// by that unit whose required prerequisites are all covered already; gap
/// prerequisites do not count as covered.
Trajectory select_units(const kg::GraphStore& store, const std::vector<kg::Iri>& ordered, int level);

/// required_concepts then select_units; with a budget, keeps the longest
/// prefix whose cumulative minutes fit and moves dropped concepts to gaps.
Trajectory generate_trajectory(const kg::GraphStore& store, const TrajectoryRequest& request);

/// Units of `chapter` along its ce:next chain. Throws StaticPathError if the
/// chapter has no units or the links branch, cycle or leave units out.
std::vector<kg::Iri> static_path(const kg::GraphStore& store, const kg::Iri& chapter);

PathComparison compare_with_static(const kg::GraphStore& store, const Trajectory& trajectory,
                                   const kg::Iri& chapter);

}  // namespace chemdelt::delt
