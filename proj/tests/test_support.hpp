#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "common/dates.hpp"
#include "market_data/types.hpp"

namespace ca::test {

// Unique scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("ca_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string str() const { return path_.string(); }
    std::filesystem::path path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline md::Candle candle(ca::Date date, double open, double high, double low, double close,
                         double volume) {
    md::Candle c;
    c.date = date;
    c.open = open;
    c.high = high;
    c.low = low;
    c.close = close;
    c.volume = volume;
    return c;
}

inline md::Candle flat_candle(ca::Date date, double price, double volume) {
    return candle(date, price, price, price, price, volume);
}

// n consecutive flat days starting at `start`.
inline std::vector<md::DailyRow> flat_days(ca::Date start, int n, double price, double volume) {
    std::vector<md::DailyRow> rows;
    for (int i = 0; i < n; ++i) {
        md::DailyRow row;
        row.candle = flat_candle(start + std::chrono::days{i}, price, volume);
        rows.push_back(row);
    }
    return rows;
}

inline std::string source_dir() { return CA_SOURCE_DIR; }

}  // namespace ca::test
