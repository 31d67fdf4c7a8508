#pragma once

// UTF-8 and delimited-text helpers shared by the readers.

#include <string>
#include <string_view>
#include <vector>

namespace polcov::text {

/// Lower-cases Latin (incl. Latin-1 Supplement and Extended-A), Greek and
/// Cyrillic letters. Other code points pass through unchanged. Invalid UTF-8
/// bytes are copied verbatim.
std::string fold_case(std::string_view s);

/// Removes leading/trailing ASCII punctuation, Unicode quotes, dashes and
/// ellipses, plus whitespace.
std::string_view strip_edge_punct(std::string_view s);

std::string_view trim(std::string_view s);
std::string_view strip_bom(std::string_view s);

/// Splits on a single delimiter, keeping empty fields.
std::vector<std::string_view> split(std::string_view s, char delim);

/// Splits on runs of ASCII whitespace, dropping empty fields.
std::vector<std::string_view> split_ws(std::string_view s);

bool is_numeric(std::string_view s);       // digits with optional separators
bool has_letter(std::string_view s);       // any letter (ASCII or non-ASCII)
bool looks_like_url(std::string_view s);

/// Lower-cased, edge-stripped, whitespace-split tokens (for names and
/// jurisdictions given as free text).
std::vector<std::string> normalize_phrase(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace polcov::text
