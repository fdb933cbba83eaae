#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pvar/step_function.hpp"

namespace pvar {

/// Index subsequence 0 = j_0 < ... < j_k = m into a step function's values,
/// together with the p-variation sum it attains.
struct PartitionWitness {
    std::vector<std::size_t> indices;
    double attained = 0.0;
};

/// Sum over the witness of |v_{j_l} - v_{j_{l-1}}|^p, exactly the definition.
/// Throws on out-of-range or non-monotone indices, or when the witness is not
/// anchored at 0 and m.
double var_p_on_partition(const StepFunction& f, const PartitionWitness& witness,
                          const PExponent& p);

/// Total Wiener p-variation of f as an exact maximum over anchored index
/// subsequences (O(m^2) dynamic program), with an attaining witness.
/// Among optimal witnesses, the lexicographically smallest index sequence is
/// returned; the reported value is the forward-recomputed sum along it, so it
/// equals var_p_on_partition(f, witness, p) bit for bit.
std::pair<double, PartitionWitness> total_var_p(const StepFunction& f, const PExponent& p);

/// Exhaustive enumeration of all 2^(m-1) anchored index subsequences.
/// Independent oracle for total_var_p; refuses m > 20.
double brute_force_var_p(const StepFunction& f, const PExponent& p);

/// ||f||_inf + Var_p(f)^{1/p}.
double bvp_norm(const StepFunction& f, const PExponent& p);

struct InverseResult {
    StepFunction inverse;
    /// (inf|f|)^{-2} * ||f||_{BV_p}; the inverse-closedness certificate,
    /// an upper bound for bvp_norm(inverse, p).
    double norm_bound = 0.0;
};

/// Value-wise reciprocal on the same grid. Requires inf|f| > floor
/// (default 1e-12); otherwise throws "not bounded away from zero".
InverseResult pointwise_inverse(const StepFunction& f, const PExponent& p,
                                double margin_floor = 1e-12);

/// Maximum of sum |w_{x_{j+1}} - w_{x_j}|^p over all increasing index
/// selections from `values` (endpoints free, empty/singleton = 0).
/// Used by the small-value verifier and the local oscillation bound.
double max_selection_var_p(std::span<const complexd> values, const PExponent& p);

/// Same maximum, with the attaining selection (empty when the max is 0).
std::pair<double, std::vector<std::size_t>> max_selection_var_p_witness(
    std::span<const complexd> values, const PExponent& p);

}  // namespace pvar
