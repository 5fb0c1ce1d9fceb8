#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "chemdelt/kg/term.h"

namespace chemdelt::kg {

/// A triple pattern; unset positions are wildcards.
struct Pattern {
  std::optional<Iri> subject;
  std::optional<Iri> predicate;
  std::optional<Term> object;
};

enum class IndexOrder { kSpo, kPos, kOsp };

struct StoreStatistics {
  std::size_t triples = 0;
  std::size_t distinct_subjects = 0;
  std::size_t distinct_predicates = 0;
};

/// In-memory triple set with SPO, POS and OSP indexes.
///
/// Triples are owned by the SPO index (a node-based set); the POS and OSP
/// indexes hold pointers into it, so nodes never move while the store lives.
/// Not internally synchronized: callers guarantee many-readers or one-writer.
/// A store may be moved between threads.
class GraphStore {
 public:
  GraphStore() = default;
  GraphStore(const GraphStore& other);
  GraphStore& operator=(const GraphStore& other);
  GraphStore(GraphStore&&) noexcept = default;
  GraphStore& operator=(GraphStore&&) noexcept = default;
  ~GraphStore() = default;

  /// Returns true iff the triple was not present before.
  bool insert(Triple triple);

  /// Validating overload: throws TermError("literal in subject position") and
  /// the like for ill-placed literals.
  bool insert(const Term& subject, const Term& predicate, Term object);

  bool contains(const Triple& triple) const { return spo_.contains(triple); }
  std::size_t size() const noexcept { return spo_.size(); }
  bool empty() const noexcept { return spo_.empty(); }

  /// Triples matching every bound position, in total Triple order. The index
  /// whose bound prefix is longest drives the scan.
  std::vector<Triple> match(const Pattern& pattern) const;
  std::vector<Triple> match(const std::optional<Iri>& s, const std::optional<Iri>& p,
                            const std::optional<Term>& o) const {
    return match(Pattern{s, p, o});
  }

  /// Number of matches without materializing them.
  std::size_t count(const Pattern& pattern) const;

  std::vector<Term> objects(const Iri& subject, const Iri& predicate) const;
  std::vector<Iri> subjects(const Iri& predicate, const Term& object) const;
  std::optional<Term> first_object(const Iri& subject, const Iri& predicate) const;
  bool has_type(const Iri& subject, const Iri& cls) const;

  /// Enumerates one index in its own order (used by coherence checks).
  std::vector<Triple> enumerate(IndexOrder order) const;

  StoreStatistics statistics() const;

  auto begin() const { return spo_.begin(); }
  auto end() const { return spo_.end(); }

  struct SpoLess {
    using is_transparent = void;
    bool operator()(const Triple& a, const Triple& b) const { return a < b; }
    template <class Key>
    bool operator()(const Triple& a, const Key& k) const { return k.compare(a) > 0; }
    template <class Key>
    bool operator()(const Key& k, const Triple& a) const { return k.compare(a) < 0; }
  };
  struct PosLess {
    using is_transparent = void;
    bool operator()(const Triple* a, const Triple* b) const;
    template <class Key>
    bool operator()(const Triple* a, const Key& k) const { return k.compare(*a) > 0; }
    template <class Key>
    bool operator()(const Key& k, const Triple* a) const { return k.compare(*a) < 0; }
  };
  struct OspLess {
    using is_transparent = void;
    bool operator()(const Triple* a, const Triple* b) const;
    template <class Key>
    bool operator()(const Triple* a, const Key& k) const { return k.compare(*a) > 0; }
    template <class Key>
    bool operator()(const Key& k, const Triple* a) const { return k.compare(*a) < 0; }
  };

 private:
  template <class Fn>
  void scan(const Pattern& pattern, Fn&& fn) const;

  std::set<Triple, SpoLess> spo_;
  std::set<const Triple*, PosLess> pos_;
  std::set<const Triple*, OspLess> osp_;
};

}  // namespace chemdelt::kg
