#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chemdelt::ingest {

/// Document does not conform to the lesson or concept-scheme schema.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string element, const std::string& message);
  const std::string& element() const noexcept { return element_; }

 private:
  std::string element_;
};

enum class TargetGroup { kTeachers, kStudents, kPupils, kTrainees };
enum class MediaType { kVideo, kAnimation, kImage, kApplet };

std::string_view to_string(TargetGroup g);
std::string_view to_string(MediaType t);
std::optional<TargetGroup> parse_target_group(std::string_view s);
std::optional<MediaType> parse_media_type(std::string_view s);

struct TextRun {
  std::string text;
  std::size_t paragraph = 0;
  friend bool operator==(const TextRun&, const TextRun&) = default;
};

struct ChemRef {
  std::string concept_id;
  std::string surface;
  std::size_t paragraph = 0;
  friend bool operator==(const ChemRef&, const ChemRef&) = default;
};

struct MediaRef {
  MediaType type = MediaType::kImage;
  std::string src;
  friend bool operator==(const MediaRef&, const MediaRef&) = default;
};

using BodyRun = std::variant<TextRun, ChemRef, MediaRef>;

// Defaults applied when <meta> omits a field.
inline constexpr int kDefaultStudyTime = 10;
inline constexpr int kDefaultDifficulty = 3;
inline constexpr TargetGroup kDefaultTargetGroup = TargetGroup::kStudents;

struct LessonDoc {
  std::string id;
  std::string chapter_id;
  int order = 1;
  std::string title;
  int study_time_minutes = kDefaultStudyTime;
  TargetGroup target_group = kDefaultTargetGroup;
  int difficulty = kDefaultDifficulty;
  std::vector<std::string> recommended_reading;
  std::vector<BodyRun> body;

  friend bool operator==(const LessonDoc&, const LessonDoc&) = default;
};

struct ConceptDoc {
  std::string id;
  std::string label;
  std::vector<std::string> synonyms;
  std::vector<std::string> broader;
  std::vector<std::string> requires_ids;
  std::optional<std::string> external_id;

  friend bool operator==(const ConceptDoc&, const ConceptDoc&) = default;
};

/// Lesson file:
///   <lesson id chapter order>
///     <title/>
///     <meta>?  <studyTime minutes/>? <targetGroup/>? <difficulty level/>?
///              <recommendedReading ref/>*  </meta>
///     <body> (<p> text | <chem ref>surface</chem> </p> | <media type src/>)* </body>
///   </lesson>
/// The schema is closed: unknown elements or attributes, misplaced elements
/// and stray character data are errors. Throws XmlError or SchemaError.
LessonDoc parse_lesson_xml(std::string_view input);

/// <conceptScheme> (<concept id externalId?> <label/> <synonym/>* <broader ref/>*
///   <requires ref/>* </concept>)* </conceptScheme>
std::vector<ConceptDoc> parse_concept_scheme_xml(std::string_view input);

/// Paragraph texts joined by a blank line; chem runs contribute their surface.
std::string body_text(const LessonDoc& doc);

/// Inverse of the parsers, used by the corpus generator.
std::string write_lesson_xml(const LessonDoc& doc);
std::string write_concept_scheme_xml(const std::vector<ConceptDoc>& concepts);

bool is_token(std::string_view s) noexcept;

}  // namespace chemdelt::ingest
