#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pvar {

/// Aggregated result of one property suite run. The thresholds inside each
/// suite are fixed; callers choose only the sample count and seed.
struct SuiteReport {
    std::string name;
    bool pass = true;
    std::uint64_t seed = 0;
    std::size_t cases = 0;
    std::size_t violations = 0;
    double duration_seconds = 0.0;
    std::vector<std::string> failures;  // capped
    std::map<std::string, double> stats;
};

SuiteReport run_oracle_suite(std::size_t functions = 500, std::uint64_t seed = 1);
SuiteReport run_norm_axioms_suite(std::size_t pairs = 1000, std::uint64_t seed = 2);
SuiteReport run_inverse_suite(std::size_t cases = 200, std::uint64_t seed = 3);
SuiteReport run_inequality_suite(std::uint64_t samples = 100000, std::uint64_t seed = 4);
SuiteReport run_small_value_suite(std::size_t cases = 100, std::uint64_t seed = 5);
SuiteReport run_iteration_suite(std::size_t pairs = 100, std::uint64_t seed = 6);
SuiteReport run_lifting_suite(std::size_t pairs = 200, std::uint64_t seed = 7);
SuiteReport run_end_to_end_suite(std::size_t pairs = 100, std::uint64_t seed = 8);
SuiteReport run_lambda_suite(std::size_t cases = 200, std::uint64_t seed = 9);

const std::vector<std::string>& suite_names();

/// Runs one named suite ("all" runs every suite). Unknown names throw
/// std::invalid_argument. Empty optionals pick the suite defaults.
std::vector<SuiteReport> run_suites(const std::string& name,
                                    std::optional<std::size_t> samples = {},
                                    std::optional<std::uint64_t> seed = {});

}  // namespace pvar
