#include "core/date.hpp"

namespace pulse {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

int days_in_month(int year, int month) {
  static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return table[month - 1];
}

}  // namespace

std::optional<Date> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  Date d;
  if (!parse_int(s.substr(0, 4), d.year) || !parse_int(s.substr(5, 2), d.month) ||
      !parse_int(s.substr(8, 2), d.day)) {
    return std::nullopt;
  }
  if (d.year < 1900 || d.year > 2099) return std::nullopt;
  if (d.month < 1 || d.month > 12) return std::nullopt;
  if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
  return d;
}

std::string format_date(const Date& d) {
  char buf[16];
  buf[0] = char('0' + (d.year / 1000) % 10);
  buf[1] = char('0' + (d.year / 100) % 10);
  buf[2] = char('0' + (d.year / 10) % 10);
  buf[3] = char('0' + d.year % 10);
  buf[4] = '-';
  buf[5] = char('0' + (d.month / 10) % 10);
  buf[6] = char('0' + d.month % 10);
  buf[7] = '-';
  buf[8] = char('0' + (d.day / 10) % 10);
  buf[9] = char('0' + d.day % 10);
  return std::string(buf, 10);
}

}  // namespace pulse
