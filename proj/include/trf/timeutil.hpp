#pragma once

#include <cstdint>
#include <string>

namespace trf {

// Timestamps are UTC seconds since the Unix epoch.  We only need a thin
// slice of calendar arithmetic (parse, format, hour-of-day), so this is
// done directly rather than through the locale-dependent parts of <chrono>.

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, int m, int d);

// Inverse of days_from_civil.
void civil_from_days(std::int64_t z, int& y, int& m, int& d);

// Parses "YYYY-MM-DDTHH:MM:SSZ" (a space instead of 'T' and a missing
// trailing 'Z' are tolerated).  Throws std::invalid_argument on malformed
// input or out-of-range fields.
std::int64_t parse_iso8601(const std::string& s);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t t);

// Hour-of-day label in {1, ..., 24} for the step starting at `t`.  The hour
// covering [00:00, 01:00) is labelled 1 and [23:00, 24:00) is labelled 24,
// so all sub-hourly steps within one clock hour share a label.
int hour_of_day(std::int64_t t);

} // namespace trf
