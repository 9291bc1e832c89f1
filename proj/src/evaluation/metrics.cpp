#include "evaluation/metrics.hpp"

#include <cmath>

#include "common/error.hpp"
#include "common/stats.hpp"

namespace ca::eval {

double accuracy(const ConfusionCounts& counts) {
    if (counts.total() == 0) throw Error(ErrorKind::Input, "accuracy of empty counts");
    return static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
}

double mcc(const ConfusionCounts& c) {
    if (c.total() == 0) throw Error(ErrorKind::Input, "MCC of empty counts");
    double f1 = static_cast<double>(c.tp + c.fp);
    double f2 = static_cast<double>(c.tp + c.fn);
    double f3 = static_cast<double>(c.tn + c.fp);
    double f4 = static_cast<double>(c.tn + c.fn);
    if (f1 == 0.0 || f2 == 0.0 || f3 == 0.0 || f4 == 0.0) return 0.0;
    double num = static_cast<double>(c.tp) * c.tn - static_cast<double>(c.fp) * c.fn;
    return num / std::sqrt(f1 * f2 * f3 * f4);
}

WeeklyStats weekly_stats(const std::vector<double>& returns) {
    if (returns.size() < 2) throw Error(ErrorKind::Input, "weekly stats need >= 2 returns");
    return {stats::mean(returns), stats::stddev_pop(returns)};
}

double cumulative_return(const std::vector<double>& returns) {
    double level = 1.0;
    for (double r : returns) level *= 1.0 + r;
    return level - 1.0;
}

std::optional<double> sharpe_ratio(double mean, double std_dev, double rf_weekly, bool annualize) {
    if (std_dev == 0.0) return std::nullopt;
    double ratio = (mean - rf_weekly) / std_dev;
    return annualize ? ratio * std::sqrt(52.0) : ratio;
}

const char* regime_kind_name(RegimeKind k) {
    switch (k) {
        case RegimeKind::Boom: return "Boom";
        case RegimeKind::Bust: return "Bust";
        case RegimeKind::Neither: return "Neither";
    }
    return "Neither";
}

std::vector<RegimeSegment> detect_regimes(const std::vector<double>& levels, double threshold) {
    std::vector<RegimeSegment> out;
    const long n = static_cast<long>(levels.size());
    if (n < 2) {
        if (n == 1) out.push_back({0, 0, RegimeKind::Neither, 0.0});
        return out;
    }

    enum class Mode { Unknown, Up, Down };
    Mode mode = Mode::Unknown;
    long seg_start = 0;
    double anchor = levels[0];  // level at the last emitted extremum
    long min_idx = 0, max_idx = 0;
    long extremum = 0;  // candidate peak (Up) or trough (Down)

    auto emit = [&](RegimeKind kind, long end_idx) {
        out.push_back({seg_start, end_idx, kind, levels[end_idx] / anchor - 1.0});
        seg_start = end_idx + 1;
        anchor = levels[end_idx];
    };

    for (long t = 1; t < n; ++t) {
        double level = levels[t];
        switch (mode) {
            case Mode::Unknown:
                if (level < levels[min_idx]) min_idx = t;
                if (level > levels[max_idx]) max_idx = t;
                if (level / levels[min_idx] - 1.0 > threshold) {
                    if (min_idx > seg_start) emit(RegimeKind::Neither, min_idx);
                    mode = Mode::Up;
                    extremum = t;
                } else if (level / levels[max_idx] - 1.0 < -threshold) {
                    if (max_idx > seg_start) emit(RegimeKind::Neither, max_idx);
                    mode = Mode::Down;
                    extremum = t;
                }
                break;
            case Mode::Up:
                if (level > levels[extremum]) {
                    extremum = t;
                } else if (level / levels[extremum] - 1.0 < -threshold) {
                    emit(RegimeKind::Boom, extremum);
                    mode = Mode::Down;
                    extremum = t;
                }
                break;
            case Mode::Down:
                if (level < levels[extremum]) {
                    extremum = t;
                } else if (level / levels[extremum] - 1.0 > threshold) {
                    emit(RegimeKind::Bust, extremum);
                    mode = Mode::Up;
                    extremum = t;
                }
                break;
        }
    }

    if (mode == Mode::Up) {
        emit(RegimeKind::Boom, extremum);
        if (seg_start < n) emit(RegimeKind::Neither, n - 1);
    } else if (mode == Mode::Down) {
        emit(RegimeKind::Bust, extremum);
        if (seg_start < n) emit(RegimeKind::Neither, n - 1);
    } else if (seg_start < n) {
        emit(RegimeKind::Neither, n - 1);
    }
    return out;
}

RiseFallSplit rise_fall_split(const std::vector<Trend>& decisions,
                              const std::vector<double>& returns) {
    if (decisions.size() != returns.size()) {
        throw Error(ErrorKind::Input, "decisions and returns must be parallel");
    }
    std::vector<double> rise, fall;
    for (size_t i = 0; i < decisions.size(); ++i) {
        (decisions[i] == Trend::Rise ? rise : fall).push_back(returns[i]);
    }
    RiseFallSplit split;
    if (!rise.empty()) split.mean_rise = stats::mean(rise);
    if (!fall.empty()) split.mean_fall = stats::mean(fall);
    if (split.mean_rise && split.mean_fall) split.diff = *split.mean_rise - *split.mean_fall;
    return split;
}

std::optional<TTestResult> hml_significance(const std::vector<double>& hml_series) {
    if (hml_series.size() < 2) return std::nullopt;
    double sd = stats::stddev_sample(hml_series);
    if (sd == 0.0) return std::nullopt;
    double n = static_cast<double>(hml_series.size());
    TTestResult result;
    result.t_stat = stats::mean(hml_series) / (sd / std::sqrt(n));
    result.p_two_sided = stats::student_t_two_sided_p(result.t_stat, n - 1.0);
    if (result.p_two_sided < 0.01) result.stars = 3;
    else if (result.p_two_sided < 0.05) result.stars = 2;
    else if (result.p_two_sided < 0.10) result.stars = 1;
    return result;
}

}  // namespace ca::eval
