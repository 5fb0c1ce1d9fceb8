#include "chemdelt/kg/term.h"

#include <string>

namespace chemdelt::kg {

namespace {

bool is_scheme_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool is_scheme_char(char c) {
  return is_scheme_start(c) || (c >= '0' && c <= '9') || c == '+' || c == '.' || c == '-';
}

bool is_forbidden_iri_byte(unsigned char c) {
  if (c <= 0x20) return true;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}':
    case '|': case '^': case '`': case '\\':
      return true;
    default:
      return false;
  }
}

// 0 = none, 1 = language, 2 = datatype
int literal_kind(const Literal& l) {
  if (l.language()) return 1;
  if (l.datatype()) return 2;
  return 0;
}

}  // namespace

Iri::Iri(std::string value) : value_(std::move(value)) {
  if (!is_valid(value_)) throw TermError("invalid IRI: '" + value_ + "'");
}

bool Iri::is_valid(std::string_view value) noexcept {
  if (value.empty() || !is_scheme_start(value[0])) return false;
  std::size_t i = 1;
  while (i < value.size() && is_scheme_char(value[i])) ++i;
  if (i >= value.size() || value[i] != ':') return false;
  for (char c : value) {
    if (is_forbidden_iri_byte(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool Literal::is_valid_language_tag(std::string_view tag) noexcept {
  // [a-zA-Z]+ ('-' [a-zA-Z0-9]+)*
  if (tag.empty()) return false;
  bool first_segment = true;
  std::size_t seg_len = 0;
  for (char c : tag) {
    if (c == '-') {
      if (seg_len == 0) return false;
      first_segment = false;
      seg_len = 0;
      continue;
    }
    bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    bool digit = c >= '0' && c <= '9';
    if (!(alpha || (!first_segment && digit))) return false;
    ++seg_len;
  }
  return seg_len > 0;
}

Literal Literal::with_language(std::string lexical, std::string tag) {
  if (!is_valid_language_tag(tag)) throw TermError("invalid language tag: '" + tag + "'");
  Literal l(std::move(lexical));
  l.language_ = std::move(tag);
  return l;
}

Literal Literal::typed(std::string lexical, Iri datatype) {
  Literal l(std::move(lexical));
  l.datatype_ = std::move(datatype);
  return l;
}

Literal Literal::integer(long long value) {
  return typed(std::to_string(value), Iri("http://www.w3.org/2001/XMLSchema#integer"));
}

std::strong_ordering operator<=>(const Literal& a, const Literal& b) noexcept {
  if (auto c = a.lexical_.compare(b.lexical_) <=> 0; c != 0) return c;
  int ka = literal_kind(a);
  int kb = literal_kind(b);
  if (ka != kb) return ka <=> kb;
  if (ka == 1) return a.language_->compare(*b.language_) <=> 0;
  if (ka == 2) return *a.datatype_ <=> *b.datatype_;
  return std::strong_ordering::equal;
}

const Iri& Term::iri() const {
  if (const Iri* i = if_iri()) return *i;
  throw TermError("term is a literal, not an IRI");
}

const Literal& Term::literal() const {
  if (const Literal* l = if_literal()) return *l;
  throw TermError("term is an IRI, not a literal");
}

std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
  if (a.value_.index() != b.value_.index()) return a.value_.index() <=> b.value_.index();
  if (a.is_iri()) return *a.if_iri() <=> *b.if_iri();
  return *a.if_literal() <=> *b.if_literal();
}

Triple Triple::make(const Term& subject, const Term& predicate, Term object) {
  if (subject.is_literal()) throw TermError("literal in subject position");
  if (predicate.is_literal()) throw TermError("literal in predicate position");
  return Triple{subject.iri(), predicate.iri(), std::move(object)};
}

std::strong_ordering operator<=>(const Triple& a, const Triple& b) noexcept {
  if (auto c = a.subject <=> b.subject; c != 0) return c;
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return a.object <=> b.object;
}

std::size_t hash_value(const Term& term) noexcept {
  std::hash<std::string> h;
  if (const Iri* iri = term.if_iri()) return h(iri->str());
  const Literal& l = *term.if_literal();
  std::size_t seed = h(l.lexical()) ^ 0x9e3779b97f4a7c15ULL;
  if (l.language()) seed ^= h(*l.language()) + 0x9e3779b9 + (seed << 6) + (seed >> 2);
  if (l.datatype()) seed ^= h(l.datatype()->str()) + 0x7f4a7c15 + (seed << 6) + (seed >> 2);
  return seed;
}

}  // namespace chemdelt::kg
