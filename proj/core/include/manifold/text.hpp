#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace manifold {

// Shared text normalization used for all linguistic matching:
// lowercase (ASCII), collapse whitespace runs to single spaces, trim,
// drop control characters. Non-ASCII UTF-8 bytes pass through unchanged.
// Idempotent: normalize_text(normalize_text(x)) == normalize_text(x).
std::string normalize_text(std::string_view raw);

// Display-form cleanup: same whitespace collapse and control-character
// removal as normalize_text but case is preserved. Fragments store this
// form; matching always goes through normalize_text.
std::string sanitize_text(std::string_view raw);

// Tokens are maximal runs of letters/digits (bytes >= 0x80 count as
// letters). Input is normalized first.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace manifold
