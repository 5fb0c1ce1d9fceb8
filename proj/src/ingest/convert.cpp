#include "chemdelt/ingest/convert.h"

#include <algorithm>
#include <map>
#include <set>

#include "chemdelt/kg/vocabulary.h"
#include "chemdelt/linker/entity_linker.h"

namespace chemdelt::ingest {

namespace v = kg::vocab;
using kg::Iri;
using kg::Literal;
using kg::Triple;

std::string ConversionReport::to_text() const {
  std::string out;
  out += "filesParsed=" + std::to_string(files_parsed) + "\n";
  out += "triplesEmitted=" + std::to_string(triples_emitted) + "\n";
  out += "mentionsLinked=" + std::to_string(mentions_linked) + "\n";
  out += "mentionsAmbiguous=" + std::to_string(mentions_ambiguous) + "\n";
  out += "danglingRefs=" + std::to_string(dangling_refs) + "\n";
  for (const auto& d : diagnostics) out += "diagnostic: " + d + "\n";
  return out;
}

namespace {

class Emitter {
 public:
  explicit Emitter(ConversionResult& result) : result_(result) {}

  void emit(Iri s, const Iri& p, kg::Term o) {
    if (result_.store.insert(Triple{std::move(s), p, std::move(o)})) ++result_.report.triples_emitted;
  }

  void dangling(const std::string& doc, const std::string& what) {
    ++result_.report.dangling_refs;
    result_.report.diagnostics.push_back(doc + ": dangling " + what);
  }

 private:
  ConversionResult& result_;
};

void check_unique_ids(std::span<const LessonDoc> lessons, std::span<const ConceptDoc> concepts) {
  std::set<std::string> ids;
  std::set<std::pair<std::string, int>> slots;
  for (const LessonDoc& l : lessons) {
    if (!ids.insert(l.id).second) throw ConversionError("duplicate lesson id '" + l.id + "'");
    if (!slots.emplace(l.chapter_id, l.order).second) {
      throw ConversionError("duplicate order " + std::to_string(l.order) + " in chapter '" + l.chapter_id + "'");
    }
  }
  ids.clear();
  for (const ConceptDoc& c : concepts) {
    if (!ids.insert(c.id).second) throw ConversionError("duplicate concept id '" + c.id + "'");
  }
}

}  // namespace

ConversionResult convert_corpus(std::span<const LessonDoc> lessons, std::span<const ConceptDoc> concepts,
                                const ConvertOptions& options) {
  check_unique_ids(lessons, concepts);

  ConversionResult result;
  Emitter out(result);

  std::vector<const ConceptDoc*> concept_order;
  std::set<std::string> concept_ids;
  for (const ConceptDoc& c : concepts) {
    concept_order.push_back(&c);
    concept_ids.insert(c.id);
  }
  std::sort(concept_order.begin(), concept_order.end(),
            [](const ConceptDoc* a, const ConceptDoc* b) { return a->id < b->id; });

  for (const ConceptDoc* c : concept_order) {
    Iri ci = v::concept_iri(c->id);
    out.emit(ci, v::type(), v::concept_class());
    out.emit(ci, v::label(), Literal(c->label));
    for (const auto& s : c->synonyms) out.emit(ci, v::synonym(), Literal(s));
    for (const auto& b : c->broader) {
      if (concept_ids.contains(b)) out.emit(ci, v::broader(), v::concept_iri(b));
      else out.dangling(c->id, "broader ref '" + b + "'");
    }
    for (const auto& r : c->requires_ids) {
      if (concept_ids.contains(r)) out.emit(ci, v::requires_(), v::concept_iri(r));
      else out.dangling(c->id, "requires ref '" + r + "'");
    }
    if (c->external_id) out.emit(ci, v::external_id(), Literal(*c->external_id));
  }

  linker::Lexicon built;
  const linker::Lexicon* lexicon = options.lexicon;
  if (options.link_text && !lexicon) {
    built = linker::build_lexicon(result.store);
    lexicon = &built;
  }

  std::vector<const LessonDoc*> lesson_order;
  std::set<std::string> lesson_ids;
  for (const LessonDoc& l : lessons) {
    lesson_order.push_back(&l);
    lesson_ids.insert(l.id);
  }
  std::sort(lesson_order.begin(), lesson_order.end(), [](const LessonDoc* a, const LessonDoc* b) {
    return std::tie(a->chapter_id, a->order) < std::tie(b->chapter_id, b->order);
  });

  std::set<Iri> chapter_context;
  for (std::size_t i = 0; i < lesson_order.size(); ++i) {
    const LessonDoc& l = *lesson_order[i];
    bool chapter_start = i == 0 || lesson_order[i - 1]->chapter_id != l.chapter_id;
    Iri unit = v::unit(l.id);
    Iri chapter = v::chapter(l.chapter_id);
    if (chapter_start) {
      chapter_context.clear();
      out.emit(chapter, v::type(), v::chapter_class());
    }

    out.emit(unit, v::type(), v::learning_unit_class());
    out.emit(unit, v::label(), Literal(l.title));
    out.emit(unit, v::part_of(), chapter);
    out.emit(unit, v::order(), Literal::integer(l.order));
    out.emit(unit, v::study_time(), Literal::integer(l.study_time_minutes));
    out.emit(unit, v::target_group(), Literal(std::string(to_string(l.target_group))));
    out.emit(unit, v::difficulty(), Literal::integer(l.difficulty));
    for (const auto& ref : l.recommended_reading) {
      if (lesson_ids.contains(ref)) out.emit(unit, v::recommended_reading(), v::unit(ref));
      else out.dangling(l.id, "recommendedReading ref '" + ref + "'");
    }

    std::size_t media_k = 0;
    for (const BodyRun& run : l.body) {
      if (const auto* m = std::get_if<MediaRef>(&run)) {
        Iri media = v::media(l.id, ++media_k);
        out.emit(unit, v::has_media(), media);
        out.emit(media, v::media_type(), Literal(std::string(to_string(m->type))));
      } else if (const auto* c = std::get_if<ChemRef>(&run)) {
        if (!concept_ids.contains(c->concept_id)) {
          out.dangling(l.id, "chem ref '" + c->concept_id + "'");
          continue;
        }
        Iri ci = v::concept_iri(c->concept_id);
        out.emit(unit, v::teaches(), ci);
        chapter_context.insert(ci);
      } else if (lexicon) {
        const auto& text = std::get<TextRun>(run).text;
        for (const linker::Mention& m : linker::link_entities(text, *lexicon, chapter_context)) {
          ++result.report.mentions_linked;
          if (m.ambiguous) ++result.report.mentions_ambiguous;
          out.emit(unit, v::teaches(), m.concept_iri);
          chapter_context.insert(m.concept_iri);
        }
      }
    }

    bool chapter_end = i + 1 == lesson_order.size() || lesson_order[i + 1]->chapter_id != l.chapter_id;
    if (!chapter_end) out.emit(unit, v::next(), v::unit(lesson_order[i + 1]->id));
  }
  return result;
}

std::size_t expected_triple_count(std::span<const LessonDoc> lessons, std::span<const ConceptDoc> concepts,
                                  std::size_t teaches_links) {
  std::size_t pages = lessons.size();
  std::set<std::string> chapters;
  std::size_t media = 0;
  std::size_t readings = 0;
  for (const LessonDoc& l : lessons) {
    chapters.insert(l.chapter_id);
    readings += std::set<std::string>(l.recommended_reading.begin(), l.recommended_reading.end()).size();
    for (const BodyRun& run : l.body) media += std::holds_alternative<MediaRef>(run) ? 1 : 0;
  }
  std::size_t concept_block = 0;
  for (const ConceptDoc& c : concepts) {
    concept_block += 2;
    concept_block += std::set<std::string>(c.synonyms.begin(), c.synonyms.end()).size();
    concept_block += std::set<std::string>(c.broader.begin(), c.broader.end()).size();
    concept_block += std::set<std::string>(c.requires_ids.begin(), c.requires_ids.end()).size();
    concept_block += c.external_id ? 1 : 0;
  }
  std::size_t c = chapters.size();
  return 7 * pages + c + (pages - c) + 2 * media + readings + teaches_links + concept_block;
}

}  // namespace chemdelt::ingest
