#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chemdelt::ingest {

/// Malformed XML. `offset` is the byte offset where the problem was found.
class XmlError : public std::runtime_error {
 public:
  XmlError(std::size_t offset, const std::string& message);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

struct XmlElement;

struct XmlText {
  std::string text;  // entities decoded
  std::size_t offset = 0;
};

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;  // document order
  std::vector<std::variant<XmlElement, XmlText>> children;
  std::size_t offset = 0;

  const std::string* attribute(std::string_view key) const;
};

/// Small non-validating XML 1.0 reader for the content files: elements,
/// attributes, character data, CDATA, comments, the predefined and numeric
/// entities, and an optional XML declaration. DOCTYPE and processing
/// instructions other than the declaration are rejected. Input must be UTF-8.
XmlElement parse_xml(std::string_view input);

std::string escape_xml_text(std::string_view text);
std::string escape_xml_attribute(std::string_view text);

}  // namespace chemdelt::ingest
