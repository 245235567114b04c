#pragma once

#include <stdexcept>
#include <string>

namespace manifold {

enum class Errc {
  empty_text,
  invalid_sector,
  unknown_id,
  invalid_factor,
  invalid_range,
  unknown_scorer,
  unknown_concept,
  unknown_budget_key,
  duplicate_rule_id,
  non_plan_sector,
  sink_write_failure,
  io_error,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::empty_text: return "empty-text";
    case Errc::invalid_sector: return "invalid-sector";
    case Errc::unknown_id: return "unknown-id";
    case Errc::invalid_factor: return "invalid-factor";
    case Errc::invalid_range: return "invalid-range";
    case Errc::unknown_scorer: return "unknown-scorer";
    case Errc::unknown_concept: return "unknown-concept";
    case Errc::unknown_budget_key: return "unknown-budget-key";
    case Errc::duplicate_rule_id: return "duplicate-rule-id";
    case Errc::non_plan_sector: return "non-plan-sector";
    case Errc::sink_write_failure: return "sink-write-failure";
    case Errc::io_error: return "io-error";
  }
  return "?";
}

// Engine-level failure. `what()` carries the human-readable message,
// `code()` the machine-checkable category.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

enum class ParseErrorKind {
  syntax,
  duplicate_id,
  invalid_threshold,
  invalid_factor,
  unknown_keyword,
  unterminated_string,
};

inline const char* parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::syntax: return "syntax";
    case ParseErrorKind::duplicate_id: return "duplicate-id";
    case ParseErrorKind::invalid_threshold: return "invalid-threshold";
    case ParseErrorKind::invalid_factor: return "invalid-factor";
    case ParseErrorKind::unknown_keyword: return "unknown-keyword";
    case ParseErrorKind::unterminated_string: return "unterminated-string";
  }
  return "?";
}

// Positioned error from the rule DSL or the knowledge file loader.
// Line and column are 1-based and point at the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, ParseErrorKind kind, std::string message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " +
                           parse_error_kind_name(kind) + ": " + message),
        line_(line),
        column_(column),
        kind_(kind) {}

  int line() const { return line_; }
  int column() const { return column_; }
  ParseErrorKind kind() const { return kind_; }

 private:
  int line_;
  int column_;
  ParseErrorKind kind_;
};

}  // namespace manifold
