#include "chemdelt/kg/ntriples.h"

#include <cstdint>
#include <optional>

namespace chemdelt::kg {

namespace {

class LineParser {
 public:
  explicit LineParser(std::string_view line) : s_(line) {}

  // Returns nullopt for blank/comment lines. Throws std::string on error.
  std::optional<Triple> parse() {
    skip_ws();
    if (at_end() || peek() == '#') return std::nullopt;
    Iri subject = parse_resource("subject");
    skip_ws();
    Iri predicate = parse_resource("predicate");
    skip_ws();
    Term object = parse_object();
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' terminator");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected content after '.'");
    return Triple{std::move(subject), std::move(predicate), std::move(object)};
  }

 private:
  [[noreturn]] static void fail(std::string message) { throw std::move(message); }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  Iri parse_resource(const char* position) {
    if (at_end()) fail(std::string("missing ") + position);
    if (s_.substr(pos_, 2) == "_:") fail("blank nodes unsupported");
    if (peek() == '"') fail(std::string("literal in ") + position + " position");
    if (peek() != '<') fail(std::string("expected IRI in ") + position + " position");
    return parse_iri();
  }

  Term parse_object() {
    if (at_end()) fail("missing object");
    if (s_.substr(pos_, 2) == "_:") fail("blank nodes unsupported");
    if (peek() == '<') return parse_iri();
    if (peek() == '"') return parse_literal();
    fail("expected IRI or literal in object position");
  }

  Iri parse_iri() {
    ++pos_;  // '<'
    std::string value;
    while (true) {
      if (at_end()) fail("unterminated IRI");
      char c = s_[pos_++];
      if (c == '>') break;
      if (c == '\\') {
        if (at_end()) fail("dangling escape in IRI");
        char e = s_[pos_++];
        if (e == 'u') {
          append_utf8(value, read_hex(4));
        } else if (e == 'U') {
          append_utf8(value, read_hex(8));
        } else {
          fail("invalid escape in IRI");
        }
        continue;
      }
      value.push_back(c);
    }
    if (!Iri::is_valid(value)) fail("invalid IRI <" + value + ">");
    return Iri(std::move(value));
  }

  Literal parse_literal() {
    ++pos_;  // '"'
    std::string lexical;
    while (true) {
      if (at_end()) fail("unterminated literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        lexical.push_back(c);
        continue;
      }
      if (at_end()) fail("dangling escape in literal");
      char e = s_[pos_++];
      switch (e) {
        case 't': lexical.push_back('\t'); break;
        case 'b': lexical.push_back('\b'); break;
        case 'n': lexical.push_back('\n'); break;
        case 'r': lexical.push_back('\r'); break;
        case 'f': lexical.push_back('\f'); break;
        case '"': lexical.push_back('"'); break;
        case '\'': lexical.push_back('\''); break;
        case '\\': lexical.push_back('\\'); break;
        case 'u': append_utf8(lexical, read_hex(4)); break;
        case 'U': append_utf8(lexical, read_hex(8)); break;
        default: fail(std::string("invalid escape \\") + e + " in literal");
      }
    }
    if (!at_end() && peek() == '@') {
      ++pos_;
      std::size_t start = pos_;
      while (!at_end() && peek() != ' ' && peek() != '\t' && peek() != '.') ++pos_;
      // A trailing '.' may belong to the terminator; language tags never
      // contain dots.
      std::string tag(s_.substr(start, pos_ - start));
      if (!Literal::is_valid_language_tag(tag)) fail("invalid language tag '" + tag + "'");
      return Literal::with_language(std::move(lexical), std::move(tag));
    }
    if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (at_end() || peek() != '<') fail("expected datatype IRI after ^^");
      return Literal::typed(std::move(lexical), parse_iri());
    }
    return Literal(std::move(lexical));
  }

  std::uint32_t read_hex(int digits) {
    if (pos_ + digits > s_.size()) fail("truncated \\u escape");
    std::uint32_t v = 0;
    for (int i = 0; i < digits; ++i) {
      char c = s_[pos_++];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= c - '0';
      else if (c >= 'a' && c <= 'f') v |= c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v |= c - 'A' + 10;
      else fail("invalid hex digit in escape");
    }
    return v;
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if ((cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) fail("escape is not a Unicode scalar value");
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

  std::string_view s_;
  std::size_t pos_ = 0;
};

void append_escaped_literal(std::string& out, std::string_view lexical) {
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
}

void append_term(std::string& out, const Term& term) {
  if (const Iri* iri = term.if_iri()) {
    out.push_back('<');
    out += iri->str();
    out.push_back('>');
    return;
  }
  const Literal& l = term.literal();
  out.push_back('"');
  append_escaped_literal(out, l.lexical());
  out.push_back('"');
  if (l.language()) {
    out.push_back('@');
    out += *l.language();
  } else if (l.datatype()) {
    out += "^^<";
    out += l.datatype()->str();
    out.push_back('>');
  }
}

}  // namespace

bool is_valid_utf8(std::string_view text) noexcept {
  const auto* p = reinterpret_cast<const unsigned char*>(text.data());
  std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = p[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len;
    std::uint32_t cp;
    if ((c & 0xE0) == 0xC0) { len = 2; cp = c & 0x1F; }
    else if ((c & 0xF0) == 0xE0) { len = 3; cp = c & 0x0F; }
    else if ((c & 0xF8) == 0xF0) { len = 4; cp = c & 0x07; }
    else return false;
    if (i + len > n) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    // Overlong forms, surrogates, out of range.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000)) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

ParseResult parse_ntriples(std::string_view text) {
  if (!is_valid_utf8(text)) throw NTriplesError("input is not valid UTF-8");
  ParseResult result;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    try {
      if (auto t = LineParser(line).parse()) result.triples.push_back(std::move(*t));
    } catch (std::string& message) {
      result.errors.push_back({line_no, std::move(message)});
    }
    start = end + 1;
  }
  return result;
}

GraphStore load_ntriples(std::string_view text, std::vector<LineError>* errors) {
  ParseResult parsed = parse_ntriples(text);
  GraphStore store;
  for (Triple& t : parsed.triples) store.insert(std::move(t));
  if (errors) *errors = std::move(parsed.errors);
  return store;
}

std::string to_ntriples(const Term& term) {
  std::string out;
  append_term(out, term);
  return out;
}

std::string serialize_ntriples(const GraphStore& store) {
  std::string out;
  for (const Triple& t : store) {
    append_term(out, t.subject);
    out.push_back(' ');
    append_term(out, t.predicate);
    out.push_back(' ');
    append_term(out, t.object);
    out += " .\n";
  }
  return out;
}

}  // namespace chemdelt::kg
