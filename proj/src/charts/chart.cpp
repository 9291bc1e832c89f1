#include "charts/chart.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "charts/png.hpp"
#include "common/error.hpp"
#include "common/fsio.hpp"
#include "common/hash.hpp"

namespace ca::charts {

using nlohmann::json;

std::vector<double> compute_moving_average(const std::vector<double>& closes, int window) {
    if (window < 1) throw Error(ErrorKind::Input, "moving average window must be >= 1");
    std::vector<double> out;
    out.reserve(closes.size());
    double running = 0.0;
    for (size_t i = 0; i < closes.size(); ++i) {
        running += closes[i];
        if (i >= static_cast<size_t>(window)) running -= closes[i - window];
        size_t n = std::min(i + 1, static_cast<size_t>(window));
        out.push_back(running / static_cast<double>(n));
    }
    return out;
}

std::vector<DayStyle> classify_day_styles(const std::vector<md::Candle>& candles) {
    std::vector<DayStyle> out;
    out.reserve(candles.size());
    for (const auto& c : candles) {
        if (c.close > c.open) out.push_back(DayStyle::Up);
        else if (c.close < c.open) out.push_back(DayStyle::Down);
        else out.push_back(DayStyle::Flat);
    }
    return out;
}

namespace {

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kFrame{120, 120, 120};
constexpr Rgb kUp{22, 163, 74};
constexpr Rgb kDown{220, 38, 38};
constexpr Rgb kFlat{107, 114, 128};
constexpr Rgb kMa{37, 99, 235};
constexpr Rgb kVolume{96, 125, 199};

Rgb style_color(DayStyle s) {
    switch (s) {
        case DayStyle::Up: return kUp;
        case DayStyle::Down: return kDown;
        case DayStyle::Flat: return kFlat;
    }
    return kFlat;
}

}  // namespace

RenderedChart render_chart(const ChartSpec& spec, const std::vector<md::Candle>& candles) {
    if (static_cast<int>(candles.size()) != spec.window_days) {
        throw Error(ErrorKind::Input, "render_chart expects " + std::to_string(spec.window_days) +
                                          " candles, got " + std::to_string(candles.size()));
    }
    if (spec.width <= 0 || spec.height <= 0) {
        throw Error(ErrorKind::Input, "chart dimensions must be positive");
    }
    for (size_t i = 0; i < candles.size(); ++i) {
        if (!candles[i].valid()) {
            throw Error(ErrorKind::Input,
                        "candle " + std::to_string(i) + " violates OHLC/volume invariants");
        }
        if (i > 0 && !(candles[i - 1].date < candles[i].date)) {
            throw Error(ErrorKind::Input, "candles must be chronological");
        }
    }

    std::vector<double> closes;
    closes.reserve(candles.size());
    for (const auto& c : candles) closes.push_back(c.close);
    std::vector<double> ma = compute_moving_average(closes, spec.window_days);

    // Panel layout: price on top, volume strip below, shared left/right frame.
    const int left = 10, right = spec.width - 11, top = 10;
    const int vol_h = spec.height / 5;
    const int vol_y1 = spec.height - 11;
    const int vol_y0 = vol_y1 - vol_h;
    const int price_y0 = top;
    const int price_y1 = vol_y0 - 15;

    double price_lo = candles[0].low, price_hi = candles[0].high;
    for (const auto& c : candles) {
        price_lo = std::min(price_lo, c.low);
        price_hi = std::max(price_hi, c.high);
    }
    for (double v : ma) {
        price_lo = std::min(price_lo, v);
        price_hi = std::max(price_hi, v);
    }
    double price_span = price_hi - price_lo;
    if (price_span <= 0.0) price_span = 1.0;  // flat series: center everything

    double vol_hi = 0.0;
    for (const auto& c : candles) vol_hi = std::max(vol_hi, c.volume);

    auto price_to_y = [&](double p) {
        double frac = (p - price_lo) / price_span;
        return price_y1 - static_cast<int>(std::lround(frac * (price_y1 - price_y0)));
    };
    auto vol_to_y = [&](double v) {
        if (vol_hi <= 0.0) return vol_y1;
        double frac = v / vol_hi;
        return vol_y1 - static_cast<int>(std::lround(frac * (vol_y1 - vol_y0)));
    };

    Canvas canvas(spec.width, spec.height, kWhite);
    canvas.hline(price_y0 - 1, left, right, kFrame);
    canvas.hline(price_y1 + 1, left, right, kFrame);
    canvas.hline(vol_y0 - 1, left, right, kFrame);
    canvas.hline(vol_y1 + 1, left, right, kFrame);
    canvas.vline(left - 1, price_y0 - 1, vol_y1 + 1, kFrame);
    canvas.vline(right + 1, price_y0 - 1, vol_y1 + 1, kFrame);

    const int n = spec.window_days;
    const double slot = static_cast<double>(right - left + 1) / n;
    auto slot_x0 = [&](int i) { return left + static_cast<int>(std::floor(i * slot)); };
    auto slot_x1 = [&](int i) { return left + static_cast<int>(std::floor((i + 1) * slot)) - 2; };

    std::vector<DayStyle> styles = classify_day_styles(candles);
    for (int i = 0; i < n; ++i) {
        const md::Candle& c = candles[i];
        Rgb color = style_color(styles[i]);
        int x0 = slot_x0(i), x1 = std::max(slot_x0(i), slot_x1(i));
        int cx = (x0 + x1) / 2;

        canvas.vline(cx, price_to_y(c.high), price_to_y(c.low), color);
        int body_top = price_to_y(std::max(c.open, c.close));
        int body_bot = price_to_y(std::min(c.open, c.close));
        canvas.fill_rect(x0, body_top, x1, body_bot, color);

        if (c.volume > 0.0) {
            canvas.fill_rect(x0, vol_to_y(c.volume), x1, vol_y1, kVolume);
        }
    }

    for (int i = 1; i < n; ++i) {
        int x_prev = (slot_x0(i - 1) + std::max(slot_x0(i - 1), slot_x1(i - 1))) / 2;
        int x_cur = (slot_x0(i) + std::max(slot_x0(i), slot_x1(i))) / 2;
        canvas.line(x_prev, price_to_y(ma[i - 1]), x_cur, price_to_y(ma[i]), kMa);
    }

    RenderedChart out;
    out.png = encode_png(canvas);
    out.hash = sha256_hex(out.png);
    return out;
}

void write_chart_index(const std::string& path, const std::map<std::string, ChartRef>& index) {
    json j = json::object();
    for (const auto& [key, ref] : index) {
        j[key] = {{"path", ref.path}, {"hash", ref.hash}};
    }
    fsio::write_text(path, j.dump(2) + "\n");
}

std::map<std::string, ChartRef> read_chart_index(const std::string& path) {
    std::map<std::string, ChartRef> out;
    json j = json::parse(fsio::read_text(path));
    for (auto it = j.begin(); it != j.end(); ++it) {
        out[it.key()] = ChartRef{it.value().at("path").get<std::string>(),
                                 it.value().at("hash").get<std::string>()};
    }
    return out;
}

}  // namespace ca::charts
