#include "culturestream/timeutil.hpp"

#include <fmt/format.h>

#include <charconv>
#include <chrono>
#include <stdexcept>

namespace culturestream {

namespace {

[[noreturn]] void bad(std::string_view text) {
  throw std::invalid_argument("invalid timestamp '" + std::string(text) + "'");
}

int digits(std::string_view text, std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) bad(text);
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') bad(text);
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) bad(text);

  if (s.find('-', 1) == std::string_view::npos) {
    Timestamp v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad(text);
    return v;
  }

  using namespace std::chrono;
  int y = digits(text, s, 0, 4);
  if (s.size() < 10 || s[4] != '-' || s[7] != '-') bad(text);
  int mo = digits(text, s, 5, 2);
  int d = digits(text, s, 8, 2);
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad(text);

  int hh = 0, mm = 0, ss = 0;
  std::size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
    hh = digits(text, s, pos + 1, 2);
    if (pos + 3 >= s.size() || s[pos + 3] != ':') bad(text);
    mm = digits(text, s, pos + 4, 2);
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
      ss = digits(text, s, pos + 1, 2);
      pos += 3;
      if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
        ++pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      }
    }
    if (hh > 23 || mm > 59 || ss > 60) bad(text);
  }

  int offset = 0;
  if (pos < s.size()) {
    if (s[pos] == 'Z' && pos + 1 == s.size()) {
      pos += 1;
    } else if (s[pos] == '+' || s[pos] == '-') {
      int sign = s[pos] == '-' ? -1 : 1;
      int oh = digits(text, s, pos + 1, 2);
      std::size_t mpos = pos + 3;
      if (mpos < s.size() && s[mpos] == ':') ++mpos;
      int om = digits(text, s, mpos, 2);
      if (mpos + 2 != s.size()) bad(text);
      offset = sign * (oh * 3600 + om * 60);
    } else {
      bad(text);
    }
  }

  auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<Timestamp>(days) * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  Timestamp day_count = ts >= 0 ? ts / 86400 : -((-ts + 86399) / 86400);
  Timestamp secs = ts - day_count * 86400;
  year_month_day ymd{sys_days{days{day_count}}};
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     secs / 3600, (secs / 60) % 60, secs % 60);
}

}  // namespace culturestream
