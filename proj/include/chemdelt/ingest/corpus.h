#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "chemdelt/ingest/clem.h"
#include "chemdelt/kg/graph_store.h"

namespace chemdelt::ingest {

struct CorpusStats {
  std::size_t pages = 0;
  std::size_t chapters = 0;
  std::size_t media_objects = 0;
  std::size_t concepts = 0;
  std::size_t triples = 0;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

/// Pages, chapters and concepts are subjects typed ce:LearningUnit,
/// ce:Chapter and ce:Concept. Media objects are untyped by the mapping, so
/// they are the distinct ce:hasMedia objects together with any subject typed
/// ce:MediaObject.
CorpusStats corpus_stats(const kg::GraphStore& store);

struct LoadedCorpus {
  std::vector<LessonDoc> lessons;
  std::vector<ConceptDoc> concepts;
  std::size_t files_parsed = 0;
  std::vector<std::string> errors;  // "<path>: <message>"
};

/// Parses every *.xml file below `dir` (recursive, sorted by path). Files
/// whose root is <conceptScheme> are concept schemes; everything else is
/// parsed as a lesson. Per-file failures are collected, not thrown. Throws
/// std::runtime_error if `dir` is not a readable directory.
LoadedCorpus load_corpus_dir(const std::filesystem::path& dir);

/// Lesson id -> document, for consumers that need the body text.
std::map<std::string, LessonDoc> index_lessons(std::vector<LessonDoc> lessons);

std::string read_file(const std::filesystem::path& path);

}  // namespace chemdelt::ingest
