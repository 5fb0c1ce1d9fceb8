#include "chemdelt/kg/graph_queries.h"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "chemdelt/kg/ntriples.h"
#include "chemdelt/kg/vocabulary.h"

namespace chemdelt::kg {

namespace {

// Directed graph over IRIs with deterministic (sorted) node and edge order.
struct Digraph {
  std::vector<Iri> nodes;
  std::vector<std::vector<std::size_t>> out;

  std::size_t add_node(const Iri& iri, std::map<Iri, std::size_t>& ids) {
    auto [it, inserted] = ids.emplace(iri, nodes.size());
    if (inserted) {
      nodes.push_back(iri);
      out.emplace_back();
    }
    return it->second;
  }
};

Digraph build_digraph(const std::vector<std::pair<Iri, Iri>>& edges) {
  std::map<Iri, std::size_t> ids;
  std::set<Iri> all;
  for (const auto& [a, b] : edges) {
    all.insert(a);
    all.insert(b);
  }
  Digraph g;
  for (const Iri& n : all) g.add_node(n, ids);
  for (const auto& [a, b] : edges) g.out[ids.at(a)].push_back(ids.at(b));
  for (auto& adj : g.out) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return g;
}

// Iterative Tarjan; returns strongly connected components.
std::vector<std::vector<std::size_t>> strongly_connected(const Digraph& g) {
  const std::size_t n = g.nodes.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < g.out[f.node].size()) {
        std::size_t w = g.out[f.node][f.edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      std::size_t v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

// Shortest cycle through the smallest node of a cyclic component.
std::vector<Iri> cycle_in_component(const Digraph& g, const std::vector<std::size_t>& comp) {
  std::set<std::size_t> members(comp.begin(), comp.end());
  std::size_t start = comp.front();  // node ids follow IRI order
  std::unordered_map<std::size_t, std::size_t> parent;
  std::deque<std::size_t> queue{start};
  bool closed = false;
  std::size_t last = start;
  while (!queue.empty() && !closed) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : g.out[v]) {
      if (!members.contains(w)) continue;
      if (w == start) {
        last = v;
        closed = true;
        break;
      }
      if (parent.emplace(w, v).second) queue.push_back(w);
    }
  }
  std::vector<Iri> cycle;
  if (!closed) return cycle;
  std::vector<std::size_t> rev;
  for (std::size_t v = last; v != start; v = parent.at(v)) rev.push_back(v);
  cycle.push_back(g.nodes[start]);
  for (auto it = rev.rbegin(); it != rev.rend(); ++it) cycle.push_back(g.nodes[*it]);
  cycle.push_back(g.nodes[start]);
  return cycle;
}

bool is_cyclic_component(const Digraph& g, const std::vector<std::size_t>& comp) {
  if (comp.size() > 1) return true;
  const auto& adj = g.out[comp.front()];
  return std::find(adj.begin(), adj.end(), comp.front()) != adj.end();
}

std::vector<std::pair<Iri, Iri>> concept_requires_edges(const GraphStore& store,
                                                        const std::set<Iri>* restrict_to) {
  std::vector<std::pair<Iri, Iri>> edges;
  for (const Triple& t : store.match(std::nullopt, vocab::requires_(), std::nullopt)) {
    const Iri* o = t.object.if_iri();
    if (!o) continue;
    if (restrict_to) {
      if (!restrict_to->contains(t.subject) || !restrict_to->contains(*o)) continue;
    } else if (!store.has_type(t.subject, vocab::concept_class()) ||
               !store.has_type(*o, vocab::concept_class())) {
      continue;
    }
    edges.emplace_back(t.subject, *o);
  }
  return edges;
}

bool is_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_integer_literal(const Term& term) {
  const Literal* l = term.if_literal();
  return l && l->datatype() && *l->datatype() == vocab::xsd_integer() && is_digits(l->lexical());
}

}  // namespace

std::vector<Iri> direct_prerequisites(const GraphStore& store, const Iri& concept_iri) {
  std::vector<Iri> out;
  for (const Term& o : store.objects(concept_iri, vocab::requires_())) {
    if (const Iri* iri = o.if_iri()) out.push_back(*iri);
  }
  return out;
}

std::set<Iri> prerequisite_closure(const GraphStore& store, const Iri& goal,
                                   const MasteredPredicate& mastered) {
  if (!store.has_type(goal, vocab::concept_class())) {
    throw QueryError("not a ce:Concept: " + goal.str());
  }
  std::set<Iri> closure{goal};
  std::vector<Iri> frontier{goal};
  while (!frontier.empty()) {
    Iri c = std::move(frontier.back());
    frontier.pop_back();
    if (mastered && mastered(c)) continue;
    for (Iri& pre : direct_prerequisites(store, c)) {
      if (closure.insert(pre).second) frontier.push_back(std::move(pre));
    }
  }
  return closure;
}

std::string format_cycle(const std::vector<Iri>& cycle) {
  std::string s;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) s += " -> ";
    s += cycle[i].str();
  }
  return s;
}

std::vector<Iri> find_requires_cycle(const GraphStore& store, const std::set<Iri>* restrict_to) {
  Digraph g = build_digraph(concept_requires_edges(store, restrict_to));
  auto comps = strongly_connected(g);
  // Report the cyclic component holding the smallest IRI.
  const std::vector<std::size_t>* best = nullptr;
  for (const auto& comp : comps) {
    if (is_cyclic_component(g, comp) && (!best || comp.front() < best->front())) best = &comp;
  }
  if (!best) return {};
  return cycle_in_component(g, *best);
}

std::vector<Violation> validate_schema(const GraphStore& store) {
  std::vector<Violation> out;
  const Iri& concept_cls = vocab::concept_class();
  auto describe = [](const Term& t) { return t.is_iri() ? t.iri().str() : std::string("literal"); };

  for (const Triple& t : store.match(std::nullopt, vocab::teaches(), std::nullopt)) {
    const Iri* o = t.object.if_iri();
    if (!o || !store.has_type(*o, concept_cls)) {
      out.push_back({t.subject, rules::kTeachesRange,
                     "ce:teaches object " + describe(t.object) + " is not a ce:Concept"});
    }
  }

  for (const Triple& t : store.match(std::nullopt, vocab::requires_(), std::nullopt)) {
    if (!store.has_type(t.subject, concept_cls)) {
      out.push_back({t.subject, rules::kRequiresDomain, "ce:requires subject is not a ce:Concept"});
    }
    const Iri* o = t.object.if_iri();
    if (!o || !store.has_type(*o, concept_cls)) {
      out.push_back({t.subject, rules::kRequiresRange,
                     "ce:requires object " + describe(t.object) + " is not a ce:Concept"});
    }
  }

  for (const Triple& t : store.match(std::nullopt, vocab::study_time(), std::nullopt)) {
    if (!is_integer_literal(t.object)) {
      out.push_back({t.subject, rules::kStudyTime,
                     "ce:studyTime must be a non-negative xsd:integer, got " + to_ntriples(t.object)});
    }
  }

  for (const Triple& t : store.match(std::nullopt, vocab::difficulty(), std::nullopt)) {
    bool ok = is_integer_literal(t.object) && t.object.literal().lexical().size() == 1 &&
              t.object.literal().lexical()[0] >= '1' && t.object.literal().lexical()[0] <= '5';
    if (!ok) {
      out.push_back({t.subject, rules::kDifficulty,
                     "ce:difficulty must be an integer in 1..5, got " + to_ntriples(t.object)});
    }
  }

  // Static paths: at most one ce:next out and in per unit, same chapter, no cycles.
  std::map<Iri, std::size_t> out_degree, in_degree;
  std::vector<std::pair<Iri, Iri>> next_edges;
  for (const Triple& t : store.match(std::nullopt, vocab::next(), std::nullopt)) {
    ++out_degree[t.subject];
    const Iri* o = t.object.if_iri();
    if (!o) {
      out.push_back({t.subject, rules::kNextChapter, "ce:next object is a literal"});
      continue;
    }
    ++in_degree[*o];
    next_edges.emplace_back(t.subject, *o);
    auto ch_a = store.objects(t.subject, vocab::part_of());
    auto ch_b = store.objects(*o, vocab::part_of());
    if (ch_a.empty() || ch_a != ch_b) {
      out.push_back({t.subject, rules::kNextChapter, "ce:next to " + o->str() + " leaves the chapter"});
    }
  }
  for (const auto& [unit, n] : out_degree) {
    if (n > 1) out.push_back({unit, rules::kNextOut, std::to_string(n) + " outgoing ce:next links"});
  }
  for (const auto& [unit, n] : in_degree) {
    if (n > 1) out.push_back({unit, rules::kNextIn, std::to_string(n) + " incoming ce:next links"});
  }
  {
    Digraph g = build_digraph(next_edges);
    for (const auto& comp : strongly_connected(g)) {
      if (!is_cyclic_component(g, comp)) continue;
      auto cycle = cycle_in_component(g, comp);
      out.push_back({g.nodes[comp.front()], rules::kNextCycle, "ce:next cycle: " + format_cycle(cycle)});
    }
  }

  {
    Digraph g = build_digraph(concept_requires_edges(store, nullptr));
    for (const auto& comp : strongly_connected(g)) {
      if (!is_cyclic_component(g, comp)) continue;
      auto cycle = cycle_in_component(g, comp);
      out.push_back({g.nodes[comp.front()], rules::kRequiresAcyclic,
                     "ce:requires cycle: " + format_cycle(cycle)});
    }
  }

  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace chemdelt::kg
