#include "common/dates.hpp"

#include <array>
#include <cctype>
#include <cstdio>

#include "common/error.hpp"

namespace ca {

using namespace std::chrono;

Date parse_date(const std::string& text) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3) {
        throw Error(ErrorKind::Input, "bad date '" + text + "', expected YYYY-MM-DD");
    }
    year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw Error(ErrorKind::Input, "invalid calendar date '" + text + "'");
    }
    return sys_days{ymd};
}

std::string format_date(Date d) {
    year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

namespace {
const std::array<std::string, 7> kWeekdayNames = {
    "sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"};
}

Weekday parse_weekday(const std::string& name) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(c)));
    for (unsigned i = 0; i < kWeekdayNames.size(); ++i) {
        if (kWeekdayNames[i] == lower) return Weekday{i};
    }
    throw Error(ErrorKind::Input, "unknown weekday '" + name + "'");
}

std::string weekday_name(Weekday w) {
    return kWeekdayNames[w.c_encoding()];
}

Date next_week_end(Date d, Weekday boundary) {
    Weekday wd{d};
    auto delta = (boundary - wd).count();
    return d + days{delta};
}

long weeks_between(Date a, Date b) {
    auto diff = (b - a).count();
    if (diff % 7 != 0) {
        throw Error(ErrorKind::Input, "dates not on the same weekly grid");
    }
    return diff / 7;
}

}  // namespace ca
