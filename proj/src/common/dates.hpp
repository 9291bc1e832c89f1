#pragma once

#include <chrono>
#include <string>

namespace ca {

// Calendar day in UTC. All series in the engine are keyed by Date or by a
// 0-based week index relative to a dataset epoch.
using Date = std::chrono::sys_days;
using Weekday = std::chrono::weekday;

// "YYYY-MM-DD" -> Date. Throws Error(Input) on malformed text.
Date parse_date(const std::string& text);

std::string format_date(Date d);

// Day-of-week that closes a week. Default per engine config is Sunday, so a
// week covers Monday..Sunday.
Weekday parse_weekday(const std::string& name);
std::string weekday_name(Weekday w);

// First date >= d that falls on `boundary` (the week-end day).
Date next_week_end(Date d, Weekday boundary);

// Number of whole weeks between two week-end dates (b - a)/7; requires both
// on the same boundary grid.
long weeks_between(Date a, Date b);

inline Date add_days(Date d, int n) { return d + std::chrono::days{n}; }

}  // namespace ca
