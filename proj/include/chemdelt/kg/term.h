#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace chemdelt::kg {

/// Raised when a term or triple violates its structural invariants.
class TermError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Absolute IRI. Construction validates: a scheme (`[A-Za-z][A-Za-z0-9+.-]*`)
/// followed by ':', and none of the characters N-Triples forbids inside
/// angle brackets (controls, space, `<>"{}|^\``).
class Iri {
 public:
  explicit Iri(std::string value);

  static bool is_valid(std::string_view value) noexcept;

  const std::string& str() const noexcept { return value_; }

  friend bool operator==(const Iri&, const Iri&) = default;
  friend std::strong_ordering operator<=>(const Iri& a, const Iri& b) noexcept {
    return a.value_.compare(b.value_) <=> 0;
  }

 private:
  std::string value_;
};

/// RDF literal. Lexical form is kept byte-exact; at most one of language tag
/// and datatype is set. Datatyped literals compare by (lexical, datatype), so
/// "01" and "1" are distinct integers.
class Literal {
 public:
  explicit Literal(std::string lexical) : lexical_(std::move(lexical)) {}

  static Literal with_language(std::string lexical, std::string tag);
  static Literal typed(std::string lexical, Iri datatype);
  static Literal integer(long long value);

  static bool is_valid_language_tag(std::string_view tag) noexcept;

  const std::string& lexical() const noexcept { return lexical_; }
  const std::optional<std::string>& language() const noexcept { return language_; }
  const std::optional<Iri>& datatype() const noexcept { return datatype_; }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) noexcept;

 private:
  std::string lexical_;
  std::optional<std::string> language_;
  std::optional<Iri> datatype_;
};

/// Object-position term. IRIs order before literals.
class Term {
 public:
  Term(Iri iri) : value_(std::move(iri)) {}          // NOLINT(google-explicit-constructor)
  Term(Literal literal) : value_(std::move(literal)) {}  // NOLINT(google-explicit-constructor)

  bool is_iri() const noexcept { return value_.index() == 0; }
  bool is_literal() const noexcept { return value_.index() == 1; }

  const Iri& iri() const;
  const Literal& literal() const;

  const Iri* if_iri() const noexcept { return std::get_if<Iri>(&value_); }
  const Literal* if_literal() const noexcept { return std::get_if<Literal>(&value_); }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept;

 private:
  std::variant<Iri, Literal> value_;
};

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  /// Builds a triple from arbitrary terms, rejecting literals in subject or
  /// predicate position.
  static Triple make(const Term& subject, const Term& predicate, Term object);

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple& a, const Triple& b) noexcept;
};

std::size_t hash_value(const Term& term) noexcept;

}  // namespace chemdelt::kg

template <>
struct std::hash<chemdelt::kg::Iri> {
  std::size_t operator()(const chemdelt::kg::Iri& iri) const noexcept {
    return std::hash<std::string>{}(iri.str());
  }
};

template <>
struct std::hash<chemdelt::kg::Term> {
  std::size_t operator()(const chemdelt::kg::Term& term) const noexcept {
    return chemdelt::kg::hash_value(term);
  }
};
