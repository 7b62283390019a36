#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace maser {

// Canonical text normalization used everywhere field values are compared:
// folds full-width ASCII (U+FF01..U+FF5E) and ideographic space (U+3000) to
// their half-width forms, collapses every whitespace run to a single space,
// and trims. Idempotent; bytes that are not valid UTF-8 pass through.
std::string normalize_field(std::string_view raw);

// Weaker normalization for end-marker detection: collapses spaces and tabs
// within a line but keeps line breaks, so a marker split across lines does
// not match.
std::string collapse_inline_ws(std::string_view text);

std::string trim(std::string_view text);

bool contains(std::string_view haystack, std::string_view needle);

std::vector<std::string> split(std::string_view text, char sep);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string to_lower_ascii(std::string_view text);

}  // namespace maser
