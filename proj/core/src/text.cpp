#include "manifold/text.hpp"

#include <cctype>

namespace manifold {

namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_control(unsigned char c) { return c < 0x20 || c == 0x7f; }

std::string clean(std::string_view raw, bool fold_case) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (is_ascii_space(c)) {
      pending_space = true;
      continue;
    }
    if (is_control(c)) continue;  // non-whitespace control bytes are dropped
    if (pending_space) {
      if (!out.empty()) out.push_back(' ');
      pending_space = false;
    }
    if (fold_case && c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    out.push_back(static_cast<char>(c));
  }
  return out;
}

}  // namespace

std::string normalize_text(std::string_view raw) { return clean(raw, true); }

std::string sanitize_text(std::string_view raw) { return clean(raw, false); }

std::vector<std::string> tokenize(std::string_view text) {
  std::string norm = normalize_text(text);
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : norm) {
    bool word = std::isalnum(c) != 0 || c >= 0x80;
    if (word) {
      current.push_back(static_cast<char>(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace manifold
