#include "chemdelt/delt/trajectory.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "chemdelt/kg/graph_queries.h"
#include "chemdelt/kg/vocabulary.h"

namespace chemdelt::delt {

namespace v = kg::vocab;
using kg::Iri;

CyclicPrerequisitesError::CyclicPrerequisitesError(std::vector<Iri> cycle)
    : TrajectoryError("cyclic prerequisites: " + kg::format_cycle(cycle)), cycle_(std::move(cycle)) {}

std::vector<Iri> required_concepts(const kg::GraphStore& store, const Iri& goal, const learner::UserProfile& profile,
                                   double theta) {
  if (!store.has_type(goal, v::concept_class())) throw UnknownConceptError("unknown concept " + goal.str());
  std::set<Iri> mastered = learner::mastered_set(profile, theta);
  std::set<Iri> closure =
      kg::prerequisite_closure(store, goal, [&](const Iri& c) { return mastered.contains(c); });
  std::set<Iri> required;
  for (const Iri& c : closure) {
    if (!mastered.contains(c)) required.insert(c);
  }

  // Kahn over requires edges inside `required`: prerequisites first.
  std::map<Iri, std::size_t> pending;
  std::map<Iri, std::vector<Iri>> dependents;
  for (const Iri& c : required) {
    std::set<Iri> pre;
    for (const Iri& p : kg::direct_prerequisites(store, c)) {
      if (required.contains(p)) pre.insert(p);
    }
    pending[c] = pre.size();
    for (const Iri& p : pre) dependents[p].push_back(c);
  }
  std::set<Iri> ready;
  for (const auto& [c, n] : pending) {
    if (n == 0) ready.insert(c);
  }
  std::vector<Iri> order;
  while (!ready.empty()) {
    Iri c = *ready.begin();
    ready.erase(ready.begin());
    for (const Iri& d : dependents[c]) {
      if (--pending[d] == 0) ready.insert(d);
    }
    order.push_back(std::move(c));
  }
  if (order.size() != required.size()) throw CyclicPrerequisitesError(kg::find_requires_cycle(store, &required));
  return order;
}

namespace {

std::optional<long long> integer_value(const kg::GraphStore& store, const Iri& s, const Iri& p) {
  auto t = store.first_object(s, p);
  if (!t || !t->is_literal()) return std::nullopt;
  const std::string& lex = t->literal().lexical();
  long long n = 0;
  auto [end, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), n);
  if (ec != std::errc() || end != lex.data() + lex.size()) return std::nullopt;
  return n;
}

}  // namespace

long long unit_study_time(const kg::GraphStore& store, const Iri& unit) {
  return integer_value(store, unit, v::study_time()).value_or(10);
}

int unit_difficulty(const kg::GraphStore& store, const Iri& unit) {
  return static_cast<int>(integer_value(store, unit, v::difficulty()).value_or(3));
}

double unit_cost(const kg::GraphStore& store, const Iri& unit, int level) {
  return static_cast<double>(unit_study_time(store, unit)) *
         (1.0 + kBeta * std::abs(unit_difficulty(store, unit) - level));
}

Trajectory select_units(const kg::GraphStore& store, const std::vector<Iri>& ordered, int level) {
  std::set<Iri> required(ordered.begin(), ordered.end());
  std::map<Iri, std::vector<Iri>> prereqs;
  for (const Iri& c : ordered) {
    for (const Iri& p : kg::direct_prerequisites(store, c)) {
      if (required.contains(p)) prereqs[c].push_back(p);
    }
  }

  Trajectory t;
  std::set<Iri> covered;
  std::set<Iri> used;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const Iri& c = ordered[i];
    if (covered.contains(c) || t.gaps.contains(c)) continue;

    std::optional<Iri> best;
    double best_cost = 0;
    for (const Iri& u : store.subjects(v::teaches(), c)) {
      if (used.contains(u) || !store.has_type(u, v::learning_unit_class())) continue;
      double cost = unit_cost(store, u, level);
      if (!best || cost < best_cost || (cost == best_cost && u < *best)) {
        best = u;
        best_cost = cost;
      }
    }
    if (!best) {
      t.gaps.insert(c);
      continue;
    }

    Step step{*best, {c}, unit_study_time(store, *best)};
    covered.insert(c);
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      const Iri& other = ordered[j];
      if (covered.contains(other) || t.gaps.contains(other)) continue;
      if (!store.contains(kg::Triple{*best, v::teaches(), other})) continue;
      const auto& pre = prereqs[other];
      if (std::all_of(pre.begin(), pre.end(), [&](const Iri& p) { return covered.contains(p); })) {
        step.contributes.insert(other);
        covered.insert(other);
      }
    }
    used.insert(*best);
    t.total_minutes += step.study_time_minutes;
    t.steps.push_back(std::move(step));
  }
  return t;
}

Trajectory generate_trajectory(const kg::GraphStore& store, const TrajectoryRequest& request) {
  if (request.level < 1 || request.level > 5) throw RequestError("level must be in 1..5");
  if (!(request.theta > 0.0 && request.theta <= 1.0)) throw RequestError("theta must be in (0, 1]");
  if (request.max_minutes && *request.max_minutes < 0) throw RequestError("maxMinutes must be non-negative");

  auto ordered = required_concepts(store, request.goal, request.profile, request.theta);
  Trajectory t = select_units(store, ordered, request.level);
  if (!request.max_minutes) return t;

  long long budget = *request.max_minutes;
  long long cumulative = 0;
  std::size_t keep = 0;
  while (keep < t.steps.size() && cumulative + t.steps[keep].study_time_minutes <= budget) {
    cumulative += t.steps[keep].study_time_minutes;
    ++keep;
  }
  if (keep < t.steps.size()) {
    for (std::size_t i = keep; i < t.steps.size(); ++i) {
      t.gaps.insert(t.steps[i].contributes.begin(), t.steps[i].contributes.end());
    }
    t.steps.erase(t.steps.begin() + static_cast<std::ptrdiff_t>(keep), t.steps.end());
    t.truncated = true;
  }
  t.total_minutes = cumulative;
  return t;
}

std::vector<Iri> static_path(const kg::GraphStore& store, const Iri& chapter) {
  std::set<Iri> units;
  for (const Iri& u : store.subjects(v::part_of(), chapter)) {
    if (store.has_type(u, v::learning_unit_class())) units.insert(u);
  }
  if (units.empty()) throw StaticPathError("chapter has no units: " + chapter.str());

  std::map<Iri, Iri> next;
  std::map<Iri, std::size_t> in_degree;
  for (const Iri& u : units) {
    std::vector<Iri> outs;
    for (const kg::Term& n : store.objects(u, v::next())) {
      if (n.is_iri() && units.contains(n.iri())) outs.push_back(n.iri());
    }
    if (outs.size() > 1) throw StaticPathError("unit branches in ce:next chain: " + u.str());
    if (!outs.empty()) {
      next.emplace(u, outs[0]);
      ++in_degree[outs[0]];
    }
  }
  std::vector<Iri> roots;
  for (const Iri& u : units) {
    if (in_degree[u] > 1) throw StaticPathError("unit has several predecessors: " + u.str());
    if (in_degree[u] == 0) roots.push_back(u);
  }
  if (roots.size() != 1) {
    throw StaticPathError("chapter needs exactly one chain start, found " + std::to_string(roots.size()));
  }
  std::vector<Iri> path{roots[0]};
  for (auto it = next.find(roots[0]); it != next.end(); it = next.find(it->second)) path.push_back(it->second);
  if (path.size() != units.size()) throw StaticPathError("ce:next chain does not reach every unit");
  return path;
}

PathComparison compare_with_static(const kg::GraphStore& store, const Trajectory& trajectory, const Iri& chapter) {
  PathComparison c;
  c.static_units = static_path(store, chapter);
  for (const Step& s : trajectory.steps) c.dynamic_units.push_back(s.unit);
  std::set<Iri> stat(c.static_units.begin(), c.static_units.end());
  std::set<Iri> dyn(c.dynamic_units.begin(), c.dynamic_units.end());
  std::set_intersection(stat.begin(), stat.end(), dyn.begin(), dyn.end(), std::inserter(c.shared, c.shared.end()));
  std::set_difference(stat.begin(), stat.end(), dyn.begin(), dyn.end(), std::inserter(c.skipped, c.skipped.end()));
  std::set_difference(dyn.begin(), dyn.end(), stat.begin(), stat.end(), std::inserter(c.added, c.added.end()));

  std::map<Iri, std::size_t> dyn_pos;
  for (std::size_t i = 0; i < c.dynamic_units.size(); ++i) dyn_pos.emplace(c.dynamic_units[i], i);
  std::vector<std::size_t> shared_dyn;  // dynamic positions in static order
  for (const Iri& u : c.static_units) {
    if (c.shared.contains(u)) shared_dyn.push_back(dyn_pos[u]);
  }
  for (std::size_t i = 0; i < shared_dyn.size(); ++i) {
    for (std::size_t j = i + 1; j < shared_dyn.size(); ++j) c.order_inversions += shared_dyn[i] > shared_dyn[j];
  }
  return c;
}

}  // namespace chemdelt::delt
