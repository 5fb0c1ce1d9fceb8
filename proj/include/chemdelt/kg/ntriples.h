#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemdelt/kg/graph_store.h"
#include "chemdelt/kg/term.h"

namespace chemdelt::kg {

/// Hard failure of the whole input (currently: invalid UTF-8).
class NTriplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;

  friend bool operator==(const LineError&, const LineError&) = default;
};

struct ParseResult {
  std::vector<Triple> triples;
  std::vector<LineError> errors;
};

/// Line-oriented N-Triples subset: IRIs, plain / language-tagged / datatyped
/// literals, `#` comments and blank lines. Lines that fail to parse are
/// reported and skipped. Blank nodes are rejected per line.
ParseResult parse_ntriples(std::string_view text);

/// Parses and loads into a fresh store; per-line errors are returned through
/// `errors` when given.
GraphStore load_ntriples(std::string_view text, std::vector<LineError>* errors = nullptr);

/// Canonical form: triples in total order, one per line, `\n` endings.
std::string serialize_ntriples(const GraphStore& store);

/// Single-term rendering used by the serializer (e.g. `<http://a>`,
/// `"x\n"@de`).
std::string to_ntriples(const Term& term);

bool is_valid_utf8(std::string_view text) noexcept;

}  // namespace chemdelt::kg
