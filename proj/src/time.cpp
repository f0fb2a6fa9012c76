#include "holmes/time.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <utility>

#include "holmes/error.hpp"

namespace holmes {

namespace {

using namespace std::chrono;

[[noreturn]] void bad_time(std::string_view text, const char* what) {
  throw Error(ErrorCode::InvalidValue,
              std::string(what) + " '" + std::string(text) + "'");
}

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return res.ec == std::errc{};
}

Timestamp make_timestamp(std::string_view text, int y, int mo, int d, int h,
                         int mi, int s) {
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) bad_time(text, "invalid date");
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

}  // namespace

Timestamp parse_iso8601(std::string_view text) {
  int y, mo, d, h, mi, s;
  if (text.size() < 20 || !read_int(text, 0, 4, y) || text[4] != '-' ||
      !read_int(text, 5, 2, mo) || text[7] != '-' ||
      !read_int(text, 8, 2, d) || (text[10] != 'T' && text[10] != 't') ||
      !read_int(text, 11, 2, h) || text[13] != ':' ||
      !read_int(text, 14, 2, mi) || text[16] != ':' ||
      !read_int(text, 17, 2, s)) {
    bad_time(text, "bad timestamp");
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }
  const std::string_view zone = text.substr(pos);
  if (zone != "Z" && zone != "z" && zone != "+00:00") {
    bad_time(text, "timestamp must be UTC");
  }
  return make_timestamp(text, y, mo, d, h, mi, s);
}

std::string format_iso8601(Timestamp ts) {
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss tod{ts - day_point};
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf.data();
}

Duration parse_duration(std::string_view text) {
  if (text.empty()) bad_time(text, "empty duration");
  long long value = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || value <= 0) bad_time(text, "bad duration");
  const std::string_view unit(res.ptr, text.data() + text.size() - res.ptr);
  long long scale = 0;
  if (unit.empty() || unit == "s") scale = 1;
  else if (unit == "m") scale = 60;
  else if (unit == "h") scale = 3600;
  else if (unit == "d") scale = 86400;
  else bad_time(text, "bad duration unit");
  return Duration{value * scale};
}

Timestamp parse_rfc5322_date(std::string_view text) {
  // [day-of-week ","] day month year hour ":" minute [":" second] zone
  std::string cleaned;
  for (char c : text) cleaned.push_back(c == ',' ? ' ' : c);
  std::array<char, 16> mon{}, zone{};
  int d = 0, y = 0, h = 0, mi = 0, s = 0;
  const char* p = cleaned.c_str();
  while (*p == ' ' || *p == '\t') ++p;
  if (std::isalpha(static_cast<unsigned char>(*p))) {
    while (*p && *p != ' ') ++p;
  }
  int n = std::sscanf(p, "%d %15s %d %d:%d:%d %15s", &d, mon.data(), &y, &h,
                      &mi, &s, zone.data());
  if (n < 6) {
    s = 0;
    n = std::sscanf(p, "%d %15s %d %d:%d %15s", &d, mon.data(), &y, &h, &mi,
                    zone.data());
    if (n < 5) bad_time(text, "bad date header");
  }
  static constexpr std::array<std::string_view, 12> names = {
      "jan", "feb", "mar", "apr", "may", "jun",
      "jul", "aug", "sep", "oct", "nov", "dec"};
  std::string m(mon.data());
  for (auto& c : m) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  int month_index = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (m.substr(0, 3) == names[i]) month_index = static_cast<int>(i) + 1;
  }
  if (month_index == 0) bad_time(text, "bad month");
  if (y < 50) y += 2000;
  else if (y < 1000) y += 1900;

  Timestamp local = make_timestamp(text, y, month_index, d, h, mi, s);
  const std::string_view z(zone.data());
  int offset_minutes = 0;
  if (!z.empty() && (z[0] == '+' || z[0] == '-') && z.size() >= 5) {
    int hh = 0, mm = 0;
    if (!read_int(z, 1, 2, hh) || !read_int(z, 3, 2, mm)) {
      bad_time(text, "bad zone");
    }
    offset_minutes = (hh * 60 + mm) * (z[0] == '-' ? -1 : 1);
  } else {
    static constexpr std::array<std::pair<std::string_view, int>, 8> zones = {{
        {"EST", -300}, {"EDT", -240}, {"CST", -360}, {"CDT", -300},
        {"MST", -420}, {"MDT", -360}, {"PST", -480}, {"PDT", -420}}};
    for (const auto& [name, off] : zones) {
      if (z == name) offset_minutes = off;
    }
  }
  return local - minutes{offset_minutes};
}

Timestamp floor_to(Timestamp ts, Duration step) {
  const auto count = ts.time_since_epoch().count();
  const auto width = step.count();
  auto q = count / width;
  if (count % width != 0 && count < 0) --q;
  return Timestamp{Duration{q * width}};
}

}  // namespace holmes
