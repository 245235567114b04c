#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace manifold {

// Raised by Pattern::compile; offset is the byte position of the problem
// inside the pattern source.
class PatternSyntaxError : public std::runtime_error {
 public:
  PatternSyntaxError(std::size_t offset, std::string message)
      : std::runtime_error(std::move(message)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Small matching language, kept auditable on purpose:
//   c      literal character
//   .      any character
//   \d     any digit
//   x*     zero or more of the previous atom
//   (\d+)  capture one or more digits (numeric matchers only, at most one)
//   \c     escaped metacharacter (\. \* \( \) \\)
// Matching is unanchored substring search. No full regular-expression
// dialect behind this; what you read in a rule file is all there is.
class Pattern {
 public:
  Pattern() = default;

  static Pattern compile(std::string_view source, bool allow_capture);

  // True if the pattern matches anywhere in text.
  bool search(std::string_view text) const;

  // Digits captured by (\d+) at the leftmost match, or nullopt when the
  // pattern does not match. Requires a pattern compiled with a capture.
  std::optional<std::string> capture_first(std::string_view text) const;

  bool has_capture() const { return has_capture_; }
  const std::string& source() const { return source_; }

  bool operator==(const Pattern& other) const { return source_ == other.source_; }

 private:
  struct Atom {
    enum class Kind { literal, any, digit, capture };
    Kind kind = Kind::literal;
    char ch = 0;
    bool starred = false;
  };

  bool match_at(std::size_t atom_index, std::string_view text, std::size_t pos,
                std::size_t* capture_begin, std::size_t* capture_len) const;

  std::vector<Atom> atoms_;
  std::string source_;
  bool has_capture_ = false;
};

}  // namespace manifold
