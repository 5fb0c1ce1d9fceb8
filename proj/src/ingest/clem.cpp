#include "chemdelt/ingest/clem.h"

#include <algorithm>
#include <charconv>
#include <set>

#include "chemdelt/ingest/xml_reader.h"

namespace chemdelt::ingest {

SchemaError::SchemaError(std::string element, const std::string& message)
    : std::runtime_error("schema: <" + element + ">: " + message), element_(std::move(element)) {}

std::string_view to_string(TargetGroup g) {
  switch (g) {
    case TargetGroup::kTeachers: return "teachers";
    case TargetGroup::kStudents: return "students";
    case TargetGroup::kPupils: return "pupils";
    case TargetGroup::kTrainees: return "trainees";
  }
  return "students";
}

std::string_view to_string(MediaType t) {
  switch (t) {
    case MediaType::kVideo: return "video";
    case MediaType::kAnimation: return "animation";
    case MediaType::kImage: return "image";
    case MediaType::kApplet: return "applet";
  }
  return "image";
}

std::optional<TargetGroup> parse_target_group(std::string_view s) {
  for (auto g : {TargetGroup::kTeachers, TargetGroup::kStudents, TargetGroup::kPupils, TargetGroup::kTrainees}) {
    if (to_string(g) == s) return g;
  }
  return std::nullopt;
}

std::optional<MediaType> parse_media_type(std::string_view s) {
  for (auto t : {MediaType::kVideo, MediaType::kAnimation, MediaType::kImage, MediaType::kApplet}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

bool is_token(std::string_view s) noexcept {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.';
  });
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Checks that `el` carries exactly the required attributes plus any of the
// optional ones.
void check_attributes(const XmlElement& el, std::initializer_list<std::string_view> required,
                      std::initializer_list<std::string_view> optional = {}) {
  for (const auto& [key, value] : el.attributes) {
    bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                 std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) throw SchemaError(el.name, "unknown attribute '" + key + "'");
  }
  for (std::string_view key : required) {
    if (!el.attribute(key)) throw SchemaError(el.name, "missing attribute '" + std::string(key) + "'");
  }
}

const std::string& token_attribute(const XmlElement& el, std::string_view key) {
  const std::string* v = el.attribute(key);
  if (!is_token(*v)) throw SchemaError(el.name, "attribute '" + std::string(key) + "' is not a token: '" + *v + "'");
  return *v;
}

int int_attribute(const XmlElement& el, std::string_view key, int lo, int hi) {
  const std::string& v = *el.attribute(key);
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size() || v[0] == '-' || v[0] == '+' || out < lo ||
      out > hi) {
    throw SchemaError(el.name, "attribute '" + std::string(key) + "' must be an integer in " + std::to_string(lo) +
                                   ".." + std::to_string(hi) + ", got '" + v + "'");
  }
  return out;
}

// Child elements of a structural element; only whitespace may sit between them.
std::vector<const XmlElement*> element_children(const XmlElement& el) {
  std::vector<const XmlElement*> out;
  for (const auto& child : el.children) {
    if (const auto* text = std::get_if<XmlText>(&child)) {
      if (!is_blank(text->text)) throw SchemaError(el.name, "character data is not allowed here");
      continue;
    }
    out.push_back(&std::get<XmlElement>(child));
  }
  return out;
}

void expect_empty(const XmlElement& el) {
  if (!el.children.empty()) throw SchemaError(el.name, "must be empty");
}

// Text-only content (no child elements).
std::string text_content(const XmlElement& el) {
  std::string out;
  for (const auto& child : el.children) {
    if (const auto* e = std::get_if<XmlElement>(&child)) {
      throw SchemaError(e->name, "is not allowed in <" + el.name + ">");
    }
    out += std::get<XmlText>(child).text;
  }
  return out;
}

// Walks a child list against an ordered content model.
class Sequence {
 public:
  explicit Sequence(const XmlElement& parent) : parent_(parent), children_(element_children(parent)) {}

  const XmlElement* optional(std::string_view name) {
    if (i_ < children_.size() && children_[i_]->name == name) return children_[i_++];
    return nullptr;
  }

  const XmlElement& required(std::string_view name) {
    if (const XmlElement* e = optional(name)) return *e;
    if (i_ < children_.size()) {
      throw SchemaError(children_[i_]->name, "unexpected here; <" + std::string(name) + "> required in <" +
                                                 parent_.name + ">");
    }
    throw SchemaError(parent_.name, "missing <" + std::string(name) + ">");
  }

  std::vector<const XmlElement*> repeated(std::string_view name) {
    std::vector<const XmlElement*> out;
    while (const XmlElement* e = optional(name)) out.push_back(e);
    return out;
  }

  void finish() const {
    if (i_ < children_.size()) {
      throw SchemaError(children_[i_]->name, "is not allowed in <" + parent_.name + "> at this position");
    }
  }

 private:
  const XmlElement& parent_;
  std::vector<const XmlElement*> children_;
  std::size_t i_ = 0;
};

void parse_meta(const XmlElement& meta, LessonDoc& doc) {
  check_attributes(meta, {});
  Sequence seq(meta);
  if (const XmlElement* e = seq.optional("studyTime")) {
    check_attributes(*e, {"minutes"});
    expect_empty(*e);
    doc.study_time_minutes = int_attribute(*e, "minutes", 0, 100000);
  }
  if (const XmlElement* e = seq.optional("targetGroup")) {
    check_attributes(*e, {});
    std::string value = trim(text_content(*e));
    auto g = parse_target_group(value);
    if (!g) throw SchemaError("targetGroup", "unknown target group '" + value + "'");
    doc.target_group = *g;
  }
  if (const XmlElement* e = seq.optional("difficulty")) {
    check_attributes(*e, {"level"});
    expect_empty(*e);
    doc.difficulty = int_attribute(*e, "level", 1, 5);
  }
  for (const XmlElement* e : seq.repeated("recommendedReading")) {
    check_attributes(*e, {"ref"});
    expect_empty(*e);
    doc.recommended_reading.push_back(token_attribute(*e, "ref"));
  }
  seq.finish();
}

void parse_paragraph(const XmlElement& p, std::size_t index, LessonDoc& doc) {
  check_attributes(p, {});
  for (const auto& child : p.children) {
    if (const auto* text = std::get_if<XmlText>(&child)) {
      doc.body.emplace_back(TextRun{text->text, index});
      continue;
    }
    const XmlElement& chem = std::get<XmlElement>(child);
    if (chem.name != "chem") throw SchemaError(chem.name, "is not allowed in <p>");
    check_attributes(chem, {"ref"});
    std::string surface = text_content(chem);
    if (surface.empty()) throw SchemaError("chem", "surface text must not be empty");
    doc.body.emplace_back(ChemRef{token_attribute(chem, "ref"), std::move(surface), index});
  }
}

void parse_body(const XmlElement& body, LessonDoc& doc) {
  check_attributes(body, {});
  std::size_t paragraph = 0;
  for (const XmlElement* e : element_children(body)) {
    if (e->name == "p") {
      parse_paragraph(*e, paragraph++, doc);
    } else if (e->name == "media") {
      check_attributes(*e, {"type", "src"});
      expect_empty(*e);
      auto type = parse_media_type(*e->attribute("type"));
      if (!type) throw SchemaError("media", "unknown media type '" + *e->attribute("type") + "'");
      if (e->attribute("src")->empty()) throw SchemaError("media", "empty src");
      doc.body.emplace_back(MediaRef{*type, *e->attribute("src")});
    } else {
      throw SchemaError(e->name, "is not allowed in <body>");
    }
  }
}

}  // namespace

LessonDoc parse_lesson_xml(std::string_view input) {
  XmlElement root = parse_xml(input);
  if (root.name != "lesson") throw SchemaError(root.name, "root element must be <lesson>");
  check_attributes(root, {"id", "chapter", "order"});
  LessonDoc doc;
  doc.id = token_attribute(root, "id");
  doc.chapter_id = token_attribute(root, "chapter");
  doc.order = int_attribute(root, "order", 1, 1000000);

  Sequence seq(root);
  const XmlElement& title = seq.required("title");
  check_attributes(title, {});
  doc.title = text_content(title);
  if (is_blank(doc.title)) throw SchemaError("title", "must not be empty");
  if (const XmlElement* meta = seq.optional("meta")) parse_meta(*meta, doc);
  parse_body(seq.required("body"), doc);
  seq.finish();
  return doc;
}

std::vector<ConceptDoc> parse_concept_scheme_xml(std::string_view input) {
  XmlElement root = parse_xml(input);
  if (root.name != "conceptScheme") throw SchemaError(root.name, "root element must be <conceptScheme>");
  check_attributes(root, {});
  std::vector<ConceptDoc> out;
  for (const XmlElement* c : element_children(root)) {
    if (c->name != "concept") throw SchemaError(c->name, "is not allowed in <conceptScheme>");
    check_attributes(*c, {"id"}, {"externalId"});
    ConceptDoc doc;
    doc.id = token_attribute(*c, "id");
    if (const std::string* ext = c->attribute("externalId")) {
      if (ext->empty()) throw SchemaError("concept", "empty externalId");
      doc.external_id = *ext;
    }
    Sequence seq(*c);
    const XmlElement& label = seq.required("label");
    check_attributes(label, {});
    doc.label = text_content(label);
    if (is_blank(doc.label)) throw SchemaError("label", "must not be empty");
    for (const XmlElement* s : seq.repeated("synonym")) {
      check_attributes(*s, {});
      doc.synonyms.push_back(text_content(*s));
    }
    for (const XmlElement* b : seq.repeated("broader")) {
      check_attributes(*b, {"ref"});
      expect_empty(*b);
      doc.broader.push_back(token_attribute(*b, "ref"));
    }
    for (const XmlElement* r : seq.repeated("requires")) {
      check_attributes(*r, {"ref"});
      expect_empty(*r);
      const std::string& ref = token_attribute(*r, "ref");
      if (ref == doc.id) throw SchemaError("requires", "concept '" + doc.id + "' requires itself");
      doc.requires_ids.push_back(ref);
    }
    seq.finish();
    out.push_back(std::move(doc));
  }
  return out;
}

std::string body_text(const LessonDoc& doc) {
  std::string out;
  std::optional<std::size_t> current;
  for (const BodyRun& run : doc.body) {
    std::size_t paragraph;
    const std::string* text;
    if (const auto* t = std::get_if<TextRun>(&run)) {
      paragraph = t->paragraph;
      text = &t->text;
    } else if (const auto* c = std::get_if<ChemRef>(&run)) {
      paragraph = c->paragraph;
      text = &c->surface;
    } else {
      continue;
    }
    if (current && *current != paragraph) out += "\n\n";
    current = paragraph;
    out += *text;
  }
  return out;
}

std::string write_lesson_xml(const LessonDoc& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<lesson id=\"" + escape_xml_attribute(doc.id) + "\" chapter=\"" + escape_xml_attribute(doc.chapter_id) +
         "\" order=\"" + std::to_string(doc.order) + "\">\n";
  out += "  <title>" + escape_xml_text(doc.title) + "</title>\n";
  out += "  <meta>\n";
  out += "    <studyTime minutes=\"" + std::to_string(doc.study_time_minutes) + "\"/>\n";
  out += "    <targetGroup>" + std::string(to_string(doc.target_group)) + "</targetGroup>\n";
  out += "    <difficulty level=\"" + std::to_string(doc.difficulty) + "\"/>\n";
  for (const auto& ref : doc.recommended_reading) {
    out += "    <recommendedReading ref=\"" + escape_xml_attribute(ref) + "\"/>\n";
  }
  out += "  </meta>\n  <body>\n";
  std::optional<std::size_t> open;
  auto close = [&] {
    if (open) out += "</p>\n";
    open.reset();
  };
  auto ensure_open = [&](std::size_t paragraph) {
    if (open && *open == paragraph) return;
    close();
    out += "    <p>";
    open = paragraph;
  };
  for (const BodyRun& run : doc.body) {
    if (const auto* t = std::get_if<TextRun>(&run)) {
      ensure_open(t->paragraph);
      out += escape_xml_text(t->text);
    } else if (const auto* c = std::get_if<ChemRef>(&run)) {
      ensure_open(c->paragraph);
      out += "<chem ref=\"" + escape_xml_attribute(c->concept_id) + "\">" + escape_xml_text(c->surface) + "</chem>";
    } else {
      const auto& m = std::get<MediaRef>(run);
      close();
      out += "    <media type=\"" + std::string(to_string(m.type)) + "\" src=\"" + escape_xml_attribute(m.src) +
             "\"/>\n";
    }
  }
  close();
  out += "  </body>\n</lesson>\n";
  return out;
}

std::string write_concept_scheme_xml(const std::vector<ConceptDoc>& concepts) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<conceptScheme>\n";
  for (const ConceptDoc& c : concepts) {
    out += "  <concept id=\"" + escape_xml_attribute(c.id) + "\"";
    if (c.external_id) out += " externalId=\"" + escape_xml_attribute(*c.external_id) + "\"";
    out += ">\n    <label>" + escape_xml_text(c.label) + "</label>\n";
    for (const auto& s : c.synonyms) out += "    <synonym>" + escape_xml_text(s) + "</synonym>\n";
    for (const auto& b : c.broader) out += "    <broader ref=\"" + escape_xml_attribute(b) + "\"/>\n";
    for (const auto& r : c.requires_ids) out += "    <requires ref=\"" + escape_xml_attribute(r) + "\"/>\n";
    out += "  </concept>\n";
  }
  out += "</conceptScheme>\n";
  return out;
}

}  // namespace chemdelt::ingest
