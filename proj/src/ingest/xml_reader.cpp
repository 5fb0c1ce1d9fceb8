#include "chemdelt/ingest/xml_reader.h"

#include <cstdint>

#include "chemdelt/kg/ntriples.h"

namespace chemdelt::ingest {

XmlError::XmlError(std::size_t offset, const std::string& message)
    : std::runtime_error("byte " + std::to_string(offset) + ": " + message), offset_(offset) {}

const std::string* XmlElement::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

bool is_name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == ':' ||
         (static_cast<unsigned char>(c) >= 0x80);
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  XmlElement document() {
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    if (in_.substr(pos_, 5) == "<?xml") {
      std::size_t end = in_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_misc();
    if (at_end() || peek() != '<') fail("expected root element");
    XmlElement root = element();
    skip_misc();
    if (!at_end()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw XmlError(pos_, message); }

  bool at_end() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void skip_space() {
    while (!at_end() && is_space(peek())) ++pos_;
  }

  // Whitespace and comments outside the root element.
  void skip_misc() {
    while (true) {
      skip_space();
      if (starts_with("<!--")) {
        comment();
      } else if (starts_with("<!DOCTYPE")) {
        fail("DOCTYPE is not supported");
      } else if (starts_with("<?")) {
        fail("processing instructions are not supported");
      } else {
        return;
      }
    }
  }

  void comment() {
    std::size_t end = in_.find("-->", pos_ + 4);
    if (end == std::string_view::npos) fail("unterminated comment");
    pos_ = end + 3;
  }

  std::string name() {
    if (at_end() || !is_name_start(peek())) fail("expected a name");
    std::size_t start = pos_;
    while (!at_end() && is_name_char(peek())) ++pos_;
    return std::string(in_.substr(start, pos_ - start));
  }

  void entity(std::string& out) {
    std::size_t start = pos_;
    std::size_t semi = in_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("unterminated entity reference");
    std::string_view ref = in_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (ref == "lt") out.push_back('<');
    else if (ref == "gt") out.push_back('>');
    else if (ref == "amp") out.push_back('&');
    else if (ref == "quot") out.push_back('"');
    else if (ref == "apos") out.push_back('\'');
    else if (!ref.empty() && ref[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ref.size() > 1 && ref[1] == 'x';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      if (digits.empty()) {
        pos_ = start;
        fail("empty character reference");
      }
      for (char c : digits) {
        int d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
        else {
          pos_ = start;
          fail("bad character reference");
        }
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        if (cp > 0x10FFFF) break;
      }
      if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        pos_ = start;
        fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      pos_ = start;
      fail("unknown entity '&" + std::string(ref) + ";'");
    }
  }

  std::string attribute_value() {
    if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
    char quote = in_[pos_++];
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated attribute value");
      char c = peek();
      if (c == quote) {
        ++pos_;
        return value;
      }
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        entity(value);
        continue;
      }
      value.push_back(c);
      ++pos_;
    }
  }

  XmlElement element() {
    XmlElement el;
    el.offset = pos_;
    ++pos_;  // '<'
    el.name = name();
    while (true) {
      bool had_space = !at_end() && is_space(peek());
      skip_space();
      if (at_end()) fail("unterminated start tag <" + el.name + ">");
      if (starts_with("/>")) {
        pos_ += 2;
        return el;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      if (!had_space) fail("expected whitespace before attribute in <" + el.name + ">");
      std::string key = name();
      skip_space();
      if (at_end() || peek() != '=') fail("expected '=' after attribute '" + key + "'");
      ++pos_;
      skip_space();
      std::string value = attribute_value();
      if (el.attribute(key)) fail("duplicate attribute '" + key + "' in <" + el.name + ">");
      el.attributes.emplace_back(std::move(key), std::move(value));
    }
    content(el);
    return el;
  }

  void content(XmlElement& el) {
    XmlText text;
    text.offset = pos_;
    auto flush = [&] {
      if (!text.text.empty()) el.children.emplace_back(std::move(text));
      text = XmlText{};
      text.offset = pos_;
    };
    while (true) {
      if (at_end()) fail("missing end tag </" + el.name + ">");
      char c = peek();
      if (c == '<') {
        if (starts_with("</")) {
          flush();
          std::size_t tag_start = pos_;
          pos_ += 2;
          std::string closing = name();
          if (closing != el.name) {
            throw XmlError(tag_start, "mismatched end tag </" + closing + "> for <" + el.name + ">");
          }
          skip_space();
          if (at_end() || peek() != '>') fail("malformed end tag");
          ++pos_;
          return;
        }
        if (starts_with("<!--")) {
          comment();
          continue;
        }
        if (starts_with("<![CDATA[")) {
          std::size_t end = in_.find("]]>", pos_);
          if (end == std::string_view::npos) fail("unterminated CDATA section");
          if (text.text.empty()) text.offset = pos_;
          text.text.append(in_.substr(pos_ + 9, end - pos_ - 9));
          pos_ = end + 3;
          continue;
        }
        if (starts_with("<?") || starts_with("<!")) fail("unsupported markup declaration");
        flush();
        el.children.emplace_back(element());
        text.offset = pos_;
        continue;
      }
      if (text.text.empty()) text.offset = pos_;
      if (c == '&') {
        entity(text.text);
        continue;
      }
      if (c == '>' && pos_ >= 2 && in_.substr(pos_ - 2, 2) == "]]") fail("']]>' in character data");
      text.text.push_back(c);
      ++pos_;
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

std::string escape(std::string_view text, bool attribute) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

XmlElement parse_xml(std::string_view input) {
  if (!kg::is_valid_utf8(input)) throw XmlError(0, "input is not valid UTF-8");
  return Reader(input).document();
}

std::string escape_xml_text(std::string_view text) { return escape(text, false); }
std::string escape_xml_attribute(std::string_view text) { return escape(text, true); }

}  // namespace chemdelt::ingest
