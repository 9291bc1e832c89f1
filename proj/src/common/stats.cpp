#include "common/stats.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace ca::stats {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw Error(ErrorKind::Input, "mean of empty series");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

namespace {
double sum_sq_dev(const std::vector<double>& xs) {
    double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s;
}
}  // namespace

double stddev_pop(const std::vector<double>& xs) {
    if (xs.empty()) throw Error(ErrorKind::Input, "stddev of empty series");
    return std::sqrt(sum_sq_dev(xs) / static_cast<double>(xs.size()));
}

double stddev_sample(const std::vector<double>& xs) {
    if (xs.size() < 2) throw Error(ErrorKind::Input, "sample stddev needs >= 2 points");
    return std::sqrt(sum_sq_dev(xs) / static_cast<double>(xs.size() - 1));
}

double order_statistic(std::vector<double> xs, std::size_t j) {
    if (j < 1 || j > xs.size()) throw Error(ErrorKind::Input, "order statistic out of range");
    std::nth_element(xs.begin(), xs.begin() + static_cast<long>(j - 1), xs.end());
    return xs[j - 1];
}

namespace {

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double betacf(double a, double b, double x) {
    const int kMaxIter = 300;
    const double kEps = 3e-14;
    const double kFpMin = 1e-300;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double ibeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                   a * std::log(x) + b * std::log(1.0 - x);
    double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * betacf(a, b, x) / a;
    }
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_sided_p(double t, double df) {
    if (df <= 0.0) throw Error(ErrorKind::Input, "t-test needs positive degrees of freedom");
    if (!std::isfinite(t)) return 0.0;
    double x = df / (df + t * t);
    return ibeta(df / 2.0, 0.5, x);
}

}  // namespace ca::stats
