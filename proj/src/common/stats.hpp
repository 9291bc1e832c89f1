#pragma once

#include <cstddef>
#include <vector>

namespace ca::stats {

double mean(const std::vector<double>& xs);

// Population standard deviation (divide by N). The engine uses this wherever
// a plain "standard deviation" is called for.
double stddev_pop(const std::vector<double>& xs);

// Sample standard deviation (divide by N-1); used by the HML t-test.
double stddev_sample(const std::vector<double>& xs);

// j-th order statistic (1-based) of the ascending sort. j in [1, N].
double order_statistic(std::vector<double> xs, std::size_t j);

// Two-sided p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace ca::stats
