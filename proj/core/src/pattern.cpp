#include "manifold/pattern.hpp"

#include <cctype>

namespace manifold {

namespace {

constexpr std::size_t kMaxAtoms = 4096;

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Pattern Pattern::compile(std::string_view source, bool allow_capture) {
  Pattern p;
  p.source_.assign(source.begin(), source.end());

  std::size_t i = 0;
  while (i < source.size()) {
    char c = source[i];
    Atom atom;
    std::size_t atom_start = i;

    if (c == '\\') {
      if (i + 1 >= source.size())
        throw PatternSyntaxError(i, "dangling escape at end of pattern");
      char esc = source[i + 1];
      if (esc == 'd') {
        atom.kind = Atom::Kind::digit;
      } else if (esc == '.' || esc == '*' || esc == '(' || esc == ')' || esc == '\\') {
        atom.kind = Atom::Kind::literal;
        atom.ch = esc;
      } else {
        throw PatternSyntaxError(i, std::string("unknown escape '\\") + esc + "'");
      }
      i += 2;
    } else if (c == '.') {
      atom.kind = Atom::Kind::any;
      i += 1;
    } else if (c == '*') {
      if (p.atoms_.empty())
        throw PatternSyntaxError(i, "'*' with no preceding atom");
      Atom& prev = p.atoms_.back();
      if (prev.starred) throw PatternSyntaxError(i, "'*' applied twice");
      if (prev.kind == Atom::Kind::capture)
        throw PatternSyntaxError(i, "capture group cannot be repeated");
      prev.starred = true;
      i += 1;
      continue;
    } else if (c == '(') {
      if (source.substr(i, 5) != "(\\d+)")
        throw PatternSyntaxError(i, "only the capture group '(\\d+)' is supported");
      if (!allow_capture)
        throw PatternSyntaxError(i, "capture group not allowed in this pattern");
      if (p.has_capture_)
        throw PatternSyntaxError(i, "at most one capture group per pattern");
      atom.kind = Atom::Kind::capture;
      p.has_capture_ = true;
      i += 5;
    } else if (c == ')') {
      throw PatternSyntaxError(i, "unmatched ')'");
    } else {
      atom.kind = Atom::Kind::literal;
      atom.ch = c;
      i += 1;
    }

    if (p.atoms_.size() >= kMaxAtoms)
      throw PatternSyntaxError(atom_start, "pattern too long");
    p.atoms_.push_back(atom);
  }
  return p;
}

bool Pattern::match_at(std::size_t atom_index, std::string_view text, std::size_t pos,
                       std::size_t* capture_begin, std::size_t* capture_len) const {
  if (atom_index == atoms_.size()) return true;
  const Atom& a = atoms_[atom_index];

  auto single = [&](char c) {
    switch (a.kind) {
      case Atom::Kind::literal: return c == a.ch;
      case Atom::Kind::any: return true;
      case Atom::Kind::digit: return is_digit(c);
      case Atom::Kind::capture: return false;  // handled separately
    }
    return false;
  };

  if (a.kind == Atom::Kind::capture) {
    std::size_t run = 0;
    while (pos + run < text.size() && is_digit(text[pos + run])) ++run;
    // greedy, then give digits back if the tail needs them
    for (std::size_t take = run; take >= 1; --take) {
      if (match_at(atom_index + 1, text, pos + take, capture_begin, capture_len)) {
        if (capture_begin) {
          *capture_begin = pos;
          *capture_len = take;
        }
        return true;
      }
    }
    return false;
  }

  if (a.starred) {
    std::size_t run = 0;
    while (pos + run < text.size() && single(text[pos + run])) ++run;
    for (std::size_t take = run + 1; take-- > 0;) {
      if (match_at(atom_index + 1, text, pos + take, capture_begin, capture_len))
        return true;
    }
    return false;
  }

  if (pos >= text.size() || !single(text[pos])) return false;
  return match_at(atom_index + 1, text, pos + 1, capture_begin, capture_len);
}

bool Pattern::search(std::string_view text) const {
  if (atoms_.empty()) return true;
  for (std::size_t start = 0; start <= text.size(); ++start) {
    if (match_at(0, text, start, nullptr, nullptr)) return true;
  }
  return false;
}

std::optional<std::string> Pattern::capture_first(std::string_view text) const {
  if (!has_capture_) return std::nullopt;
  for (std::size_t start = 0; start <= text.size(); ++start) {
    std::size_t begin = 0, len = 0;
    if (match_at(0, text, start, &begin, &len)) {
      return std::string(text.substr(begin, len));
    }
  }
  return std::nullopt;
}

}  // namespace manifold
