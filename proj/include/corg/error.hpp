#ifndef CORG_ERROR_HPP
#define CORG_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corg {

// Every failure raised by the library derives from Error. The kind() tag
// mirrors the error names used throughout the module docs so callers (the
// CLI in particular) can branch without a dynamic_cast ladder.
enum class ErrorKind {
  io,
  malformed_line,
  no_triples_loaded,
  invalid_config,
  negated_unsupported,
  unsupported_fragment,
  syntax_error,
  arity_clash,
  dimension_mismatch,
  absent,
  empty_goal,
  non_horn_clause,
  non_range_restricted_clause,
  atom_not_in_model,
  bad_cardinality,
  xml_error,
  missing_field,
  missing_formula,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::io: return "Io";
    case ErrorKind::malformed_line: return "MalformedLine";
    case ErrorKind::no_triples_loaded: return "NoTriplesLoaded";
    case ErrorKind::invalid_config: return "InvalidConfig";
    case ErrorKind::negated_unsupported: return "NegatedUnsupported";
    case ErrorKind::unsupported_fragment: return "UnsupportedFragment";
    case ErrorKind::syntax_error: return "SyntaxError";
    case ErrorKind::arity_clash: return "ArityClash";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::absent: return "Absent";
    case ErrorKind::empty_goal: return "EmptyGoal";
    case ErrorKind::non_horn_clause: return "NonHornClause";
    case ErrorKind::non_range_restricted_clause: return "NonRangeRestrictedClause";
    case ErrorKind::atom_not_in_model: return "AtomNotInModel";
    case ErrorKind::bad_cardinality: return "BadCardinality";
    case ErrorKind::xml_error: return "XmlError";
    case ErrorKind::missing_field: return "MissingField";
    case ErrorKind::missing_formula: return "MissingFormula";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Errors that point at a position in some input (line number or character
// offset, depending on the producer).
class PositionedError : public Error {
 public:
  PositionedError(ErrorKind kind, std::size_t position, const std::string& what)
      : Error(kind, what), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace corg

#endif  // CORG_ERROR_HPP
