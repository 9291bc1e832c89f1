#pragma once

#include <optional>
#include <string>
#include <vector>

#include "common/labels.hpp"

namespace ca::eval {

struct ConfusionCounts {
    long tp = 0, tn = 0, fp = 0, fn = 0;
    long total() const { return tp + tn + fp + fn; }

    // Rise is the positive class.
    void add(Trend predicted, Trend truth) {
        if (predicted == Trend::Rise) (truth == Trend::Rise ? tp : fp) += 1;
        else (truth == Trend::Fall ? tn : fn) += 1;
    }
};

double accuracy(const ConfusionCounts& counts);

// Matthews correlation; any zero factor under the root maps to 0.
double mcc(const ConfusionCounts& counts);

struct WeeklyStats {
    double mean = 0.0;
    double std_dev = 0.0;  // population
};
WeeklyStats weekly_stats(const std::vector<double>& returns);

double cumulative_return(const std::vector<double>& returns);

// (mean - rf) / std, scaled by sqrt(52) when annualized. Zero std -> nullopt.
std::optional<double> sharpe_ratio(double mean, double std_dev, double rf_weekly,
                                   bool annualize = true);

enum class RegimeKind { Boom, Bust, Neither };

const char* regime_kind_name(RegimeKind k);

struct RegimeSegment {
    long start_week = 0;  // positions into the level series, inclusive
    long end_week = 0;
    RegimeKind kind = RegimeKind::Neither;
    double change = 0.0;  // level[end] / level[previous extremum] - 1
};

// Greedy first-crossing scan: a trough-to-peak move over +threshold closes a
// Boom, a peak-to-trough move under -threshold closes a Bust; spans that
// never cross are Neither. Segments partition [0, N).
std::vector<RegimeSegment> detect_regimes(const std::vector<double>& levels,
                                          double threshold = 0.15);

struct RiseFallSplit {
    std::optional<double> mean_rise;
    std::optional<double> mean_fall;
    std::optional<double> diff;
};

RiseFallSplit rise_fall_split(const std::vector<Trend>& decisions,
                              const std::vector<double>& returns);

struct TTestResult {
    double t_stat = 0.0;
    double p_two_sided = 1.0;
    int stars = 0;  // significance at 10/5/1% -> 1/2/3
};

// One-sample t-test of the weekly HML series against zero (sample std).
// Fewer than 2 points or zero variance -> nullopt.
std::optional<TTestResult> hml_significance(const std::vector<double>& hml_series);

}  // namespace ca::eval
