#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chemdelt/ingest/clem.h"

namespace chemdelt::ingest {

/// xorshift64* (Vigna 2014): state ^= state >> 12; ^= << 25; ^= >> 27;
/// output = state * 0x2545F4914F6CDD1D. The seed is passed through one
/// splitmix64 step first so that small seeds give well-mixed states.
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform integer in [0, n) via the high half of a 128-bit product.
  std::uint64_t below(std::uint64_t n);
  /// Uniform double in [0, 1) from the top 53 bits.
  double unit();
  bool chance(double p) { return unit() < p; }

 private:
  std::uint64_t state_;
};

struct GeneratorParams {
  std::uint64_t seed = 1;
  int chapters = 170;
  double mean_pages_per_chapter = 10.6;
  int concepts = 400;
  double prereq_density = 0.5;
};

struct GeneratedCorpus {
  std::vector<LessonDoc> lessons;
  std::vector<ConceptDoc> concepts;

  /// (relative path, file content) pairs in path order: "concepts.xml" and
  /// "lessons/<id>.xml".
  std::vector<std::pair<std::string, std::string>> files() const;
};

/// Deterministic synthetic corpus. Page total is round(chapters * mean),
/// each chapter gets at least one page and the rest are spread uniformly.
/// The ce:requires graph is a DAG: concepts are placed in a random
/// permutation and each one draws up to three earlier concepts, keeping each
/// with probability `prereq_density`. Roughly 30% of concept occurrences in
/// body text are left untagged for the entity linker; every generated
/// reference resolves. Throws std::invalid_argument on out-of-range params.
GeneratedCorpus generate_corpus(const GeneratorParams& params);

}  // namespace chemdelt::ingest
