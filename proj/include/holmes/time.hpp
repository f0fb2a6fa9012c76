#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace holmes {

using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

// Parses "YYYY-MM-DDTHH:MM:SSZ". Fractional seconds are truncated and a
// "+00:00" suffix is accepted in place of "Z". Throws Error(InvalidValue).
Timestamp parse_iso8601(std::string_view text);

// Canonical "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(Timestamp ts);

// "90s", "30m", "24h", "2d" or a bare number of seconds.
Duration parse_duration(std::string_view text);

// Parses an RFC 5322 Date header value such as "Tue, 1 Dec 2020 10:00:00 +0100".
// Obsolete zone names (GMT, UT, EST, ...) are understood.
Timestamp parse_rfc5322_date(std::string_view text);

// Largest multiple of `step` since the epoch that is <= ts.
Timestamp floor_to(Timestamp ts, Duration step);

}  // namespace holmes
