#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pulse {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Collapse runs of whitespace (space, tab, CR, LF) into single spaces and trim.
std::string collapse_whitespace(std::string_view s);

/// Title normalization used for citation matching: case-fold ASCII, drop
/// everything that is not alphanumeric, collapse whitespace runs to single
/// spaces. Bytes >= 0x80 pass through unchanged so identical UTF-8 sequences
/// still compare equal.
std::string normalize_title(std::string_view s);

/// Lowercase alphanumeric tokens, split on everything else.
std::vector<std::string> tokenize(std::string_view s);

/// Split into lines, each retaining its trailing newline (if present).
std::vector<std::string> split_lines_keep_ends(std::string_view s);

bool contains_ci(std::string_view haystack, std::string_view needle);

/// Parse a full cell/token as a number: optional sign, digits, optional
/// decimal part, optional trailing '%'. Returns nullopt for anything else.
struct NumericToken {
  double value;
  bool percent;
};
std::optional<NumericToken> parse_numeric(std::string_view s);

/// Greedy word wrap at `width` characters; words longer than `width`
/// are hard-broken.
std::vector<std::string> wrap_text(std::string_view s, std::size_t width);

/// Fixed-point decimal formatting, locale independent ("12.34", "-0.50").
std::string format_fixed(double v, int decimals);

}  // namespace pulse
