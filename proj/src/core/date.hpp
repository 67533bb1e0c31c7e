#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace pulse {

/// Calendar date, UTC day precision.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;
};

/// Strict "YYYY-MM-DD" parse; year must lie in 1900-2099.
std::optional<Date> parse_date(std::string_view s);

std::string format_date(const Date& d);

}  // namespace pulse
