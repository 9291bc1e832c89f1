#include <doctest.h>

#include "common/csv.hpp"
#include "common/dates.hpp"
#include "common/error.hpp"
#include "common/hash.hpp"
#include "common/numfmt.hpp"
#include "common/stats.hpp"
#include "test_support.hpp"

using namespace ca;

TEST_CASE("date round trip and weekday math") {
    Date d = parse_date("2023-06-05");
    CHECK(format_date(d) == "2023-06-05");
    CHECK(Weekday{d} == std::chrono::Monday);

    // 2023-06-05 is a Monday; the following Sunday is 2023-06-11.
    Date sunday = next_week_end(d, std::chrono::Sunday);
    CHECK(format_date(sunday) == "2023-06-11");
    CHECK(next_week_end(sunday, std::chrono::Sunday) == sunday);

    CHECK(weeks_between(sunday, sunday + std::chrono::days{21}) == 3);
    CHECK_THROWS_AS(weeks_between(sunday, sunday + std::chrono::days{3}), Error);
    CHECK_THROWS_AS(parse_date("2023-13-01"), Error);
    CHECK_THROWS_AS(parse_date("garbage"), Error);
    CHECK(parse_weekday("Sunday") == std::chrono::Sunday);
    CHECK(parse_weekday("monday") == std::chrono::Monday);
}

TEST_CASE("csv quoting round trip") {
    csv::Table t;
    t.header = {"a", "b"};
    t.rows.push_back({"plain", "with,comma"});
    t.rows.push_back({"with \"quote\"", "multi\nline"});
    csv::Table back = csv::parse(csv::serialize(t));
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0][1] == "with,comma");
    CHECK(back.rows[1][0] == "with \"quote\"");
    CHECK(back.rows[1][1] == "multi\nline");
    CHECK(back.column("b") == 1);
    CHECK(back.column("missing") == -1);
}

TEST_CASE("csv rejects ragged rows") {
    CHECK_THROWS_AS(csv::parse("a,b\n1,2,3\n"), Error);
}

TEST_CASE("numeric text is canonical and round-trips") {
    CHECK(num_to_string(0.1) == "0.1");
    CHECK(num_from_string("0.1") == 0.1);
    CHECK(num_from_string(num_to_string(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK_THROWS_AS(num_from_string("1.2.3"), Error);
}

TEST_CASE("population and sample stddev") {
    std::vector<double> xs = {0.8, 0.6};
    CHECK(stats::mean(xs) == doctest::Approx(0.7));
    CHECK(stats::stddev_pop(xs) == doctest::Approx(0.1));
    std::vector<double> series = {0.02, 0.00, 0.01, 0.01};
    CHECK(stats::stddev_sample(series) == doctest::Approx(0.008165).epsilon(1e-4));
}

TEST_CASE("order statistic") {
    std::vector<double> xs = {5, 1, 4, 2, 3};
    CHECK(stats::order_statistic(xs, 1) == 1);
    CHECK(stats::order_statistic(xs, 3) == 3);
    CHECK(stats::order_statistic(xs, 5) == 5);
    CHECK_THROWS_AS(stats::order_statistic(xs, 0), Error);
}

TEST_CASE("student t two-sided p-values match known quantiles") {
    // t=2.776 with df=4 sits at the two-sided 5% point.
    CHECK(stats::student_t_two_sided_p(2.776, 4) == doctest::Approx(0.05).epsilon(0.01));
    // t=1.96 with large df approaches the normal 5% point.
    CHECK(stats::student_t_two_sided_p(1.96, 1000) == doctest::Approx(0.05).epsilon(0.02));
    CHECK(stats::student_t_two_sided_p(0.0, 10) == doctest::Approx(1.0));
}

TEST_CASE("sha256 known vector") {
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(short_hash("abc") == "ba7816bf8f01");
}
