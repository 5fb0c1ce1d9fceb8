#include "chemdelt/ingest/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "chemdelt/ingest/xml_reader.h"
#include "chemdelt/kg/vocabulary.h"

namespace chemdelt::ingest {

namespace fs = std::filesystem;
namespace v = kg::vocab;

CorpusStats corpus_stats(const kg::GraphStore& store) {
  CorpusStats s;
  s.pages = store.subjects(v::type(), v::learning_unit_class()).size();
  s.chapters = store.subjects(v::type(), v::chapter_class()).size();
  s.concepts = store.subjects(v::type(), v::concept_class()).size();
  std::set<kg::Term> media;
  for (const kg::Triple& t : store.match(std::nullopt, v::has_media(), std::nullopt)) media.insert(t.object);
  for (const kg::Iri& m : store.subjects(v::type(), v::media_object_class())) media.insert(m);
  s.media_objects = media.size();
  s.triples = store.size();
  return s;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read " + path.string());
  return ss.str();
}

LoadedCorpus load_corpus_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw std::runtime_error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(dir, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".xml") files.push_back(it->path());
  }
  if (ec) throw std::runtime_error("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  LoadedCorpus out;
  for (const fs::path& f : files) {
    std::string rel = fs::relative(f, dir).generic_string();
    try {
      std::string text = read_file(f);
      if (parse_xml(text).name == "conceptScheme") {
        auto concepts = parse_concept_scheme_xml(text);
        out.concepts.insert(out.concepts.end(), std::make_move_iterator(concepts.begin()),
                            std::make_move_iterator(concepts.end()));
      } else {
        out.lessons.push_back(parse_lesson_xml(text));
      }
      ++out.files_parsed;
    } catch (const std::exception& e) {
      out.errors.push_back(rel + ": " + e.what());
    }
  }
  return out;
}

std::map<std::string, LessonDoc> index_lessons(std::vector<LessonDoc> lessons) {
  std::map<std::string, LessonDoc> out;
  for (LessonDoc& l : lessons) {
    std::string id = l.id;
    out.emplace(std::move(id), std::move(l));
  }
  return out;
}

}  // namespace chemdelt::ingest
