#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvar/suites.hpp"

using namespace pvar;

// Reduced sample counts here; the acceptance binary runs the full budgets.

TEST_CASE("every suite passes on a smoke budget") {
    CHECK(run_oracle_suite(40, 1).pass);
    CHECK(run_norm_axioms_suite(60, 2).pass);
    CHECK(run_inverse_suite(30, 3).pass);
    CHECK(run_inequality_suite(2000, 4).pass);
    CHECK(run_small_value_suite(20, 5).pass);
    CHECK(run_iteration_suite(10, 6).pass);
    CHECK(run_lifting_suite(20, 7).pass);
    CHECK(run_end_to_end_suite(8, 8).pass);
    CHECK(run_lambda_suite(25, 9).pass);
}

TEST_CASE("suite dispatch") {
    auto reports = run_suites("oracle", 10, 42);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].name == "oracle");
    CHECK(reports[0].seed == 42);
    CHECK(reports[0].pass);
    CHECK(reports[0].cases == 40);  // 10 functions x 4 exponents

    CHECK_THROWS_AS(run_suites("nosuchsuite"), std::invalid_argument);
    CHECK(suite_names().size() == 9);
}

TEST_CASE("same seed reproduces the same run") {
    auto a = run_oracle_suite(15, 77);
    auto b = run_oracle_suite(15, 77);
    CHECK(a.cases == b.cases);
    CHECK(a.stats.at("max_rel_diff") == b.stats.at("max_rel_diff"));

    auto ea = run_end_to_end_suite(5, 88);
    auto eb = run_end_to_end_suite(5, 88);
    CHECK(ea.stats.at("max_residual") == eb.stats.at("max_residual"));
    CHECK(ea.stats.at("max_steps") == eb.stats.at("max_steps"));
}

TEST_CASE("suite reports carry stats and timing") {
    auto report = run_small_value_suite(10, 11);
    CHECK(report.pass);
    CHECK(report.cases == 10);
    CHECK(report.stats.count("max_conservatism") == 1);
    CHECK(report.stats.at("max_conservatism") < 1.0);
    CHECK(report.duration_seconds >= 0.0);
}
