#include "dfbench/timestamp.hpp"

#include <chrono>
#include <cstdio>

#include "dfbench/text.hpp"

namespace dfbench {

namespace {

bool ReadDigits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::optional<Timestamp> ParseTimestamp(std::string_view text) {
  const std::string_view s = Trim(text);
  if (s.empty()) return std::nullopt;
  if (auto epoch = ParseInt(s)) return Timestamp{*epoch};

  int year, month, day, hour, minute, second;
  if (!ReadDigits(s, 0, 4, year) || s.size() < 19 || s[4] != '-' ||
      !ReadDigits(s, 5, 2, month) || s[7] != '-' ||
      !ReadDigits(s, 8, 2, day) || (s[10] != 'T' && s[10] != ' ') ||
      !ReadDigits(s, 11, 2, hour) || s[13] != ':' ||
      !ReadDigits(s, 14, 2, minute) || s[16] != ':' ||
      !ReadDigits(s, 17, 2, second)) {
    return std::nullopt;
  }
  if (hour > 23 || minute > 59 || second > 60) return std::nullopt;

  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year},
                           std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) return std::nullopt;
  }
  std::int64_t offset = 0;
  if (pos < s.size()) {
    const std::string_view zone = Trim(s.substr(pos));
    if (zone == "Z" || zone == "z" || zone == "UTC") {
      offset = 0;
    } else if ((zone.size() == 6 && zone[3] == ':') || zone.size() == 5) {
      const int sign = zone[0] == '+' ? 1 : (zone[0] == '-' ? -1 : 0);
      int oh, om;
      const std::size_t mpos = zone.size() == 6 ? 4 : 3;
      if (sign == 0 || !ReadDigits(zone, 1, 2, oh) ||
          !ReadDigits(zone, mpos, 2, om)) {
        return std::nullopt;
      }
      offset = sign * (oh * 3600 + om * 60);
    } else {
      return std::nullopt;
    }
  }

  const std::int64_t days = sys_days(ymd).time_since_epoch().count();
  return Timestamp{days * 86400 + hour * 3600 + minute * 60 + second - offset};
}

std::string FormatTimestamp(Timestamp ts) {
  using namespace std::chrono;
  std::int64_t days = ts.seconds / 86400;
  std::int64_t rem = ts.seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
  return buf;
}

Timestamp Now() {
  using namespace std::chrono;
  return Timestamp{
      duration_cast<seconds>(system_clock::now().time_since_epoch()).count()};
}

}  // namespace dfbench
