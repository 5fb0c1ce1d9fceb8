#include "chemdelt/kg/graph_store.h"

#include <algorithm>

namespace chemdelt::kg {

namespace {

int sign(std::strong_ordering o) { return o < 0 ? -1 : (o > 0 ? 1 : 0); }

// Bound prefixes for each index order. compare() returns key <=> triple over
// the bound components only, so equal_range yields the prefix block.
struct SpoPrefix {
  const Iri* s = nullptr;
  const Iri* p = nullptr;
  const Term* o = nullptr;
  int compare(const Triple& t) const {
    if (!s) return 0;
    if (int c = sign(*s <=> t.subject)) return c;
    if (!p) return 0;
    if (int c = sign(*p <=> t.predicate)) return c;
    if (!o) return 0;
    return sign(*o <=> t.object);
  }
};

struct PosPrefix {
  const Iri* p = nullptr;
  const Term* o = nullptr;
  int compare(const Triple& t) const {
    if (!p) return 0;
    if (int c = sign(*p <=> t.predicate)) return c;
    if (!o) return 0;
    return sign(*o <=> t.object);
  }
};

struct OspPrefix {
  const Term* o = nullptr;
  const Iri* s = nullptr;
  int compare(const Triple& t) const {
    if (!o) return 0;
    if (int c = sign(*o <=> t.object)) return c;
    if (!s) return 0;
    return sign(*s <=> t.subject);
  }
};

bool matches(const Pattern& q, const Triple& t) {
  if (q.subject && *q.subject != t.subject) return false;
  if (q.predicate && *q.predicate != t.predicate) return false;
  if (q.object && *q.object != t.object) return false;
  return true;
}

}  // namespace

bool GraphStore::PosLess::operator()(const Triple* a, const Triple* b) const {
  if (auto c = a->predicate <=> b->predicate; c != 0) return c < 0;
  if (auto c = a->object <=> b->object; c != 0) return c < 0;
  return a->subject < b->subject;
}

bool GraphStore::OspLess::operator()(const Triple* a, const Triple* b) const {
  if (auto c = a->object <=> b->object; c != 0) return c < 0;
  if (auto c = a->subject <=> b->subject; c != 0) return c < 0;
  return a->predicate < b->predicate;
}

GraphStore::GraphStore(const GraphStore& other) {
  for (const Triple& t : other.spo_) insert(t);
}

GraphStore& GraphStore::operator=(const GraphStore& other) {
  if (this != &other) {
    GraphStore copy(other);
    *this = std::move(copy);
  }
  return *this;
}

bool GraphStore::insert(Triple triple) {
  auto [it, inserted] = spo_.insert(std::move(triple));
  if (!inserted) return false;
  pos_.insert(&*it);
  osp_.insert(&*it);
  return true;
}

bool GraphStore::insert(const Term& subject, const Term& predicate, Term object) {
  return insert(Triple::make(subject, predicate, std::move(object)));
}

template <class Fn>
void GraphStore::scan(const Pattern& q, Fn&& fn) const {
  const Iri* s = q.subject ? &*q.subject : nullptr;
  const Iri* p = q.predicate ? &*q.predicate : nullptr;
  const Term* o = q.object ? &*q.object : nullptr;

  if (s && !p && o) {
    auto [lo, hi] = osp_.equal_range(OspPrefix{o, s});
    for (auto it = lo; it != hi; ++it) fn(**it);
    return;
  }
  if (s) {
    auto [lo, hi] = spo_.equal_range(SpoPrefix{s, p, p ? o : nullptr});
    for (auto it = lo; it != hi; ++it) {
      if (matches(q, *it)) fn(*it);
    }
    return;
  }
  if (p) {
    auto [lo, hi] = pos_.equal_range(PosPrefix{p, o});
    for (auto it = lo; it != hi; ++it) fn(**it);
    return;
  }
  if (o) {
    auto [lo, hi] = osp_.equal_range(OspPrefix{o, nullptr});
    for (auto it = lo; it != hi; ++it) fn(**it);
    return;
  }
  for (const Triple& t : spo_) fn(t);
}

std::vector<Triple> GraphStore::match(const Pattern& q) const {
  std::vector<Triple> out;
  scan(q, [&](const Triple& t) { out.push_back(t); });
  // Only SPO-driven scans come out in total order already.
  if (!q.subject || (!q.predicate && q.object)) std::sort(out.begin(), out.end());
  return out;
}

std::size_t GraphStore::count(const Pattern& q) const {
  std::size_t n = 0;
  scan(q, [&](const Triple&) { ++n; });
  return n;
}

std::vector<Term> GraphStore::objects(const Iri& subject, const Iri& predicate) const {
  std::vector<Term> out;
  auto [lo, hi] = spo_.equal_range(SpoPrefix{&subject, &predicate, nullptr});
  for (auto it = lo; it != hi; ++it) out.push_back(it->object);
  return out;
}

std::vector<Iri> GraphStore::subjects(const Iri& predicate, const Term& object) const {
  std::vector<Iri> out;
  auto [lo, hi] = pos_.equal_range(PosPrefix{&predicate, &object});
  for (auto it = lo; it != hi; ++it) out.push_back((*it)->subject);
  return out;
}

std::optional<Term> GraphStore::first_object(const Iri& subject, const Iri& predicate) const {
  auto it = spo_.lower_bound(SpoPrefix{&subject, &predicate, nullptr});
  if (it == spo_.end() || it->subject != subject || it->predicate != predicate) return std::nullopt;
  return it->object;
}

bool GraphStore::has_type(const Iri& subject, const Iri& cls) const {
  static const Iri rdf_type("http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
  const Term object(cls);
  return spo_.contains(SpoPrefix{&subject, &rdf_type, &object});
}

std::vector<Triple> GraphStore::enumerate(IndexOrder order) const {
  std::vector<Triple> out;
  out.reserve(spo_.size());
  switch (order) {
    case IndexOrder::kSpo:
      out.assign(spo_.begin(), spo_.end());
      break;
    case IndexOrder::kPos:
      for (const Triple* t : pos_) out.push_back(*t);
      break;
    case IndexOrder::kOsp:
      for (const Triple* t : osp_) out.push_back(*t);
      break;
  }
  return out;
}

StoreStatistics GraphStore::statistics() const {
  StoreStatistics st;
  st.triples = spo_.size();
  const Iri* prev = nullptr;
  for (const Triple& t : spo_) {
    if (!prev || *prev != t.subject) ++st.distinct_subjects;
    prev = &t.subject;
  }
  prev = nullptr;
  for (const Triple* t : pos_) {
    if (!prev || *prev != t->predicate) ++st.distinct_predicates;
    prev = &t->predicate;
  }
  return st;
}

}  // namespace chemdelt::kg
