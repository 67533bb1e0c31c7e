#include "core/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace pulse {

namespace {

inline bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }
inline bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_alnum_ascii(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline char lower_ascii(unsigned char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : char(c); }

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) out.push_back(lower_ascii(c));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::string normalize_title(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (is_alnum_ascii(c) || c >= 0x80) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(lower_ascii(c));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : s) {
    if (is_alnum_ascii(c)) {
      cur.push_back(lower_ascii(c));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<std::string> split_lines_keep_ends(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\n') {
      lines.emplace_back(s.substr(start, i - start + 1));
      start = i + 1;
    }
  }
  if (start < s.size()) lines.emplace_back(s.substr(start));
  return lines;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  if (needle.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    bool hit = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (lower_ascii(static_cast<unsigned char>(haystack[i + j])) !=
          lower_ascii(static_cast<unsigned char>(needle[j]))) {
        hit = false;
        break;
      }
    }
    if (hit) return true;
  }
  return false;
}

std::optional<NumericToken> parse_numeric(std::string_view s) {
  std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  bool percent = false;
  if (t.back() == '%') {
    percent = true;
    t.pop_back();
    while (!t.empty() && is_space(static_cast<unsigned char>(t.back()))) t.pop_back();
  }
  if (t.empty()) return std::nullopt;
  std::size_t i = 0;
  if (t[i] == '+' || t[i] == '-') ++i;
  std::size_t digits = 0;
  while (i < t.size() && is_digit(static_cast<unsigned char>(t[i]))) { ++i; ++digits; }
  if (i < t.size() && t[i] == '.') {
    ++i;
    while (i < t.size() && is_digit(static_cast<unsigned char>(t[i]))) { ++i; ++digits; }
  }
  if (digits == 0 || i != t.size()) return std::nullopt;
  double value = std::strtod(t.c_str(), nullptr);
  if (!std::isfinite(value)) return std::nullopt;
  return NumericToken{value, percent};
}

std::vector<std::string> wrap_text(std::string_view s, std::size_t width) {
  std::vector<std::string> lines;
  if (width == 0) width = 1;
  std::string line;
  std::string word;
  auto flush_word = [&]() {
    if (word.empty()) return;
    while (word.size() > width) {
      // hard break over-long words
      if (!line.empty()) {
        lines.push_back(line);
        line.clear();
      }
      lines.push_back(word.substr(0, width));
      word.erase(0, width);
    }
    if (word.empty()) return;
    if (line.empty()) {
      line = word;
    } else if (line.size() + 1 + word.size() <= width) {
      line.push_back(' ');
      line += word;
    } else {
      lines.push_back(line);
      line = word;
    }
    word.clear();
  };
  for (unsigned char c : s) {
    if (is_space(c)) {
      flush_word();
    } else {
      word.push_back(static_cast<char>(c));
    }
  }
  flush_word();
  if (!line.empty()) lines.push_back(line);
  if (lines.empty()) lines.push_back("");
  return lines;
}

std::string format_fixed(double v, int decimals) {
  if (decimals < 0) decimals = 0;
  double scale = std::pow(10.0, decimals);
  long long scaled = static_cast<long long>(std::llround(v * scale));
  bool negative = scaled < 0;
  unsigned long long mag = negative ? static_cast<unsigned long long>(-scaled)
                                    : static_cast<unsigned long long>(scaled);
  unsigned long long unit = static_cast<unsigned long long>(scale);
  std::string out = negative ? "-" : "";
  out += std::to_string(mag / unit);
  if (decimals > 0) {
    std::string frac = std::to_string(mag % unit);
    out.push_back('.');
    out.append(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace pulse
