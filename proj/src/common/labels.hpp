#pragma once

#include <array>
#include <string>

#include "common/error.hpp"

namespace ca {

enum class Trend { Rise, Fall };

inline const char* trend_text(Trend t) { return t == Trend::Rise ? "Rise" : "Fall"; }

inline Trend trend_from_text(const std::string& s) {
    if (s == "Rise") return Trend::Rise;
    if (s == "Fall") return Trend::Fall;
    throw Error(ErrorKind::Parse, "unknown trend label '" + s + "'");
}

// Ordered VeryLow < Low < Medium < High < VeryHigh.
enum class QuintileLabel { VeryLow = 0, Low = 1, Medium = 2, High = 3, VeryHigh = 4 };

inline const char* quintile_text(QuintileLabel q) {
    static const std::array<const char*, 5> kNames = {"Very Low", "Low", "Medium", "High",
                                                      "Very High"};
    return kNames[static_cast<int>(q)];
}

inline constexpr std::array<QuintileLabel, 5> kQuintileOrder = {
    QuintileLabel::VeryLow, QuintileLabel::Low, QuintileLabel::Medium, QuintileLabel::High,
    QuintileLabel::VeryHigh};

}  // namespace ca
