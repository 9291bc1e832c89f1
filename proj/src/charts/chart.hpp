#pragma once

#include <map>
#include <string>
#include <vector>

#include "common/dates.hpp"
#include "market_data/types.hpp"

namespace ca::charts {

struct ChartSpec {
    std::string asset_id;
    Date end_date{};
    int window_days = 30;
    int width = 900;
    int height = 600;
    std::string style = "default";  // white bg, green up / red down, blue MA
};

enum class DayStyle { Up, Down, Flat };

// Trailing moving average with warm-up: point i averages the last
// min(i+1, window) closes.
std::vector<double> compute_moving_average(const std::vector<double>& closes, int window);

// Body/wick style per day, exposed so tests can check geometry without
// decoding pixels.
std::vector<DayStyle> classify_day_styles(const std::vector<md::Candle>& candles);

struct RenderedChart {
    std::string png;   // encoded bytes
    std::string hash;  // sha256 of png
};

// Candlestick chart with a volume panel and a 30-day MA overlay. Requires
// exactly spec.window_days chronological, invariant-satisfying candles.
// Byte-deterministic for a given (spec, candles).
RenderedChart render_chart(const ChartSpec& spec, const std::vector<md::Candle>& candles);

struct ChartRef {
    std::string path;
    std::string hash;
};

// index.json mapping "asset/week" -> {path, hash}.
void write_chart_index(const std::string& path, const std::map<std::string, ChartRef>& index);
std::map<std::string, ChartRef> read_chart_index(const std::string& path);

}  // namespace ca::charts
