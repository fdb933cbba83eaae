// Acceptance suite: runs every property gate at its full budget and prints
// one pass/fail line per criterion. Exit code 0 only when all criteria hold.

#include <cstdio>
#include <string>
#include <vector>

#include "pvar/suites.hpp"

using pvar::SuiteReport;

namespace {

struct Criterion {
    std::string label;
    bool pass = false;
    std::string detail;
};

std::string summarize(const SuiteReport& report) {
    std::string out = std::to_string(report.cases) + " cases, " +
                      std::to_string(report.duration_seconds).substr(0, 6) + " s";
    if (!report.pass) {
        out += ", " + std::to_string(report.violations) + " violations";
        if (!report.failures.empty()) out += "; first: " + report.failures.front();
    }
    return out;
}

Criterion from_suite(std::string label, const SuiteReport& report,
                     double time_limit_seconds = 0.0) {
    Criterion c{std::move(label), report.pass, summarize(report)};
    if (time_limit_seconds > 0.0 && report.duration_seconds > time_limit_seconds) {
        c.pass = false;
        c.detail += " [exceeded " + std::to_string(time_limit_seconds) + " s limit]";
    }
    return c;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria;

    {
        auto report = pvar::run_oracle_suite(500, 1001);
        criteria.push_back(from_suite(
            "1 ORACLE SUITE: DP equals enumeration on 500 seeded functions", report, 30.0));
    }
    {
        auto report = pvar::run_norm_axioms_suite(1000, 1002);
        criteria.push_back(from_suite(
            "2 NORM AXIOMS: submultiplicativity, symmetry, embedding, scaling", report));
    }
    {
        auto report = pvar::run_inverse_suite(200, 1003);
        criteria.push_back(
            from_suite("3 INVERSE CLOSEDNESS: margin^-2 bound on 200 cases", report));
    }
    {
        auto inequalities = pvar::run_inequality_suite(100000, 1004);
        auto small_value = pvar::run_small_value_suite(100, 1005);
        Criterion c;
        c.label = "4 ELEMENTARY INEQUALITIES + SMALL-VALUE DELTA: 1e5 samples x 5 exponents, 100 deltas";
        c.pass = inequalities.pass && small_value.pass;
        c.detail = summarize(inequalities) + " | " + summarize(small_value);
        criteria.push_back(std::move(c));
    }
    {
        auto report = pvar::run_iteration_suite(100, 1006);
        criteria.push_back(from_suite(
            "5 ITERATION CERTIFICATION: claims, decay, 60-step convergence, distances",
            report));
    }
    {
        auto report = pvar::run_lifting_suite(200, 1007);
        criteria.push_back(from_suite(
            "6 LIFTING CERTIFICATION: product, margins, distances, idempotence", report));
    }
    {
        auto report = pvar::run_end_to_end_suite(100, 1008);
        criteria.push_back(from_suite(
            "7 END-TO-END: lift + factor on 100 arbitrary pairs with admissible h", report,
            120.0));
    }
    {
        auto report = pvar::run_lambda_suite(200, 1009);
        std::string stats;
        if (report.stats.count("probe_ratio_max")) {
            stats = " probe max dist/eps = " +
                    std::to_string(report.stats.at("probe_ratio_max")).substr(0, 6) +
                    ", factor converged " +
                    std::to_string(static_cast<int>(report.stats.at("probe_factor_converged"))) +
                    "/" + std::to_string(static_cast<int>(report.stats.at("probe_count")));
        }
        Criterion c = from_suite(
            "8 SHIBA-WATERMAN SUITE: rearrangement, p=1 identity, inverse, probe batch",
            report);
        c.detail += stats;
        criteria.push_back(std::move(c));
    }

    bool all_pass = true;
    for (const auto& criterion : criteria) {
        std::printf("[%s] criterion %s (%s)\n", criterion.pass ? "PASS" : "FAIL",
                    criterion.label.c_str(), criterion.detail.c_str());
        all_pass = all_pass && criterion.pass;
    }
    std::printf("%s\n", all_pass ? "ACCEPTANCE: all criteria passed"
                                 : "ACCEPTANCE: at least one criterion failed");
    return all_pass ? 0 : 1;
}
