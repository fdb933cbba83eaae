#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "pvar/variation.hpp"

namespace pvar {

/// Constructive bound: any point selection on which |f| < delta has
/// p-variation sum below epsilon^p. delta = scale * min(component_etas).
struct SmallValueBound {
    double epsilon = 0.0;
    double delta = 0.0;
    /// Near-optimal partition behind the eta formula (the exact DP witness
    /// of the binding component).
    PartitionWitness witness;
    /// One eta per component of the positive-part decomposition; the
    /// single-component case stores {eta, 1, 1, 1}.
    std::array<double, 4> component_etas{1.0, 1.0, 1.0, 1.0};
    /// M = ||f||_inf (1 when no normalization was applied).
    double scale = 1.0;
};

struct InequalityViolation {
    std::string inequality;
    double lhs = 0.0;
    double rhs = 0.0;
    std::array<double, 4> inputs{};  // x | a,b | re/im of u,v magnitudes
};

struct InequalityReport {
    bool pass = true;
    double p = 1.0;
    std::uint64_t samples = 0;
    /// Smallest observed rhs - lhs per inequality (tightness).
    std::array<double, 3> min_slack{};
    /// Largest observed rhs - lhs per inequality.
    std::array<double, 3> max_slack{};
    std::optional<InequalityViolation> violation;
    std::uint64_t seed = 0;
};

/// Samples the three elementary power inequalities
///   (1+x)^p <= 1 + p 2^{p-1} x               for x in [0,1]
///   (a+b)^p <= a^p + max{p,2} 2^{p-1} b      for a,b in [0,1]
///   |u-v|^p >= |u|^p - max{p,2} 2^{p-1} |v|  for |u-v|,|v| <= 1
/// on seeded draws plus the {0,1} boundary cases. The inequalities hold for
/// every valid input, so any violation signals an arithmetic bug.
InequalityReport check_elementary_inequalities(const PExponent& p, std::uint64_t samples,
                                               std::uint64_t seed);

/// The nonnegative special case: f real with values in [0,1]. Returns
///   eta = min{1, epsilon^p / (n (p+2) 2^{p+1})}
/// where n is the point count of the exact variation witness, so that any
/// selection with f(x_j) < eta has p-variation sum < epsilon^p.
/// f identically 0 returns eta = 1.
SmallValueBound eta_for_nonnegative(const StepFunction& f, const PExponent& p, double epsilon);

/// Splits f0 (values in the closed unit disk) into nonnegative parts
/// w1 - w2 + i(w3 - w4) = f0 with 0 <= w_l <= 1; the identity is bit-exact.
std::array<StepFunction, 4> nonneg_decomposition(const StepFunction& f0);

/// The general bound: normalizes by M = ||f||_inf, splits into four
/// nonnegative parts, takes eta_l for target epsilon/(4M) each, and returns
/// delta = M * min eta_l. f identically 0 returns delta = 1.
SmallValueBound delta_for_function(const StepFunction& f, const PExponent& p, double epsilon);

enum class VerifyMode { Exhaustive, Sampled };

struct SmallValueReport {
    bool pass = true;
    /// Exact maximum selected p-sum over indices with |v| < delta (DP).
    double max_attained = 0.0;
    double threshold = 0.0;  // epsilon^p
    std::vector<std::size_t> worst_selection;
    /// max_attained / threshold; how much of the budget the bound uses.
    double conservatism = 0.0;
    VerifyMode mode = VerifyMode::Exhaustive;
    std::size_t small_index_count = 0;
    /// Cross-check value: full enumeration (exhaustive) or sampled subsets.
    double cross_check_max = 0.0;
    bool cross_check_ok = true;
    std::optional<std::uint64_t> seed;
};

/// Oracle for the small-value implication: maximizes the selected p-sum over
/// value indices with |v| < delta and compares against epsilon^p. Exhaustive
/// mode additionally enumerates all subsets (requires at most 2^20 of them);
/// sampled mode draws seeded random subsets instead.
SmallValueReport verify_small_value_sum(const StepFunction& f, const PExponent& p, double delta,
                                        double epsilon, VerifyMode mode = VerifyMode::Exhaustive,
                                        std::uint64_t seed = 0,
                                        std::uint64_t sample_count = 2000);

}  // namespace pvar
