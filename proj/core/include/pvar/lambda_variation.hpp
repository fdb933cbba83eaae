#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pvar/openness.hpp"
#include "pvar/variation.hpp"

namespace pvar {

/// Nondecreasing positive weight sequence with divergent reciprocal sum.
class LambdaSequence {
  public:
    enum class Kind { Harmonic, Constant, Explicit };
    enum class Tail { Harmonic, Constant };

    static LambdaSequence harmonic() { return LambdaSequence(Kind::Harmonic); }
    static LambdaSequence constant() { return LambdaSequence(Kind::Constant); }
    /// Explicit prefix continued by a declared divergent tail rule:
    /// harmonic tail lambda_i = max(prefix.back(), i), constant tail keeps
    /// prefix.back(). Prefix must be positive and nondecreasing.
    static LambdaSequence explicit_prefix(std::vector<double> prefix, Tail tail);

    /// lambda_i for 1-based i.
    double operator()(std::size_t i) const;

    Kind kind() const { return kind_; }
    Tail tail() const { return tail_; }
    const std::vector<double>& prefix() const { return prefix_; }

  private:
    explicit LambdaSequence(Kind kind) : kind_(kind) {}
    Kind kind_;
    Tail tail_ = Tail::Harmonic;
    std::vector<double> prefix_;
};

/// Nonoverlapping closed intervals with grid endpoints; shared endpoints are
/// allowed. increments[i] = |f(sup I_i) - f(inf I_i)|.
struct IntervalFamily {
    struct Interval {
        double a = 0.0, b = 0.0;
        std::size_t from_index = 0, to_index = 0;
    };
    std::vector<Interval> intervals;
    std::vector<double> increments;
};

/// Value of a family under the optimal weight assignment: increments^p sorted
/// nonincreasing against the nondecreasing lambda (rearrangement optimality).
double family_value(std::vector<double> powered_increments, const LambdaSequence& lambda);

struct LambdaVarResult {
    double value = 0.0;
    IntervalFamily family;
    /// True when found by exhaustive search over all grid-endpoint families;
    /// false marks a certified lower bound (greedy with local exchange).
    bool exact = true;
};

/// Shiba-Waterman variation sup over nonoverlapping interval families of
/// sum |f(I_i)|^p / lambda_i. Exact for grids with at most 13 values
/// (exhaustive), certified lower bound beyond that.
LambdaVarResult lambda_var_p(const StepFunction& f, const LambdaSequence& lambda,
                             const PExponent& p, std::size_t max_intervals = 64);

/// The greedy-with-exchange search behind inexact results, on any grid size;
/// its value is always a certified lower bound (exact = false).
LambdaVarResult lambda_var_p_lower_bound(const StepFunction& f, const LambdaSequence& lambda,
                                         const PExponent& p, std::size_t max_intervals = 64);

struct LambdaNorm {
    double value = 0.0;
    bool exact = true;
};

/// ||f||_inf + Vap^{1/p}; flagged when the variation is a lower bound.
LambdaNorm lambda_bv_norm(const StepFunction& f, const LambdaSequence& lambda,
                          const PExponent& p);

NormFn lambda_norm_fn(const LambdaSequence& lambda, const PExponent& p);

struct LambdaInverseReport {
    bool pass = false;
    double margin = 0.0;
    double inverse_norm = 0.0;  // ||1/f||
    double bound = 0.0;         // margin^{-2} ||f||
    bool norms_exact = true;
    /// Worst violation of |(1/f)(I)| <= margin^{-2} |f(I)| over grid intervals.
    double worst_increment_excess = 0.0;
    bool increments_ok = true;
};

/// Inverse closedness in the Shiba-Waterman norm, checked both at norm level
/// and per grid interval. Requires inf|f| > 0.
LambdaInverseReport lambda_inverse_check(const StepFunction& f, const LambdaSequence& lambda,
                                         const PExponent& p);

struct ProbeReport {
    std::string lambda_kind;
    double p_value = 1.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    bool lift_identity = false;
    bool lift_zero_pair = false;
    double dist_F_lambda = 0.0, dist_G_lambda = 0.0;
    bool distances_exact = true;
    bool under_epsilon = false;  // both lambda distances < epsilon
    double lambda_radius = 0.0;  // admissible radius at (F1,G1), lambda norm
    bool factor_ran = false;
    bool factor_converged = false;
    bool factor_claims_ok = false;
    std::size_t factor_steps = 0;
    double factor_dist_F = 0.0, factor_dist_G = 0.0;
    double factor_residual = 0.0;
    /// Always set: the report is evidence, not a theorem.
    std::string note;
};

/// Runs the lifting construction on (F, G), measures the Shiba-Waterman
/// distances against epsilon, then factors a seeded admissible perturbation
/// at the lifted pair using the Shiba-Waterman norm throughout. Gathers
/// evidence for the open conjecture; claims nothing.
ProbeReport conjecture_probe(const StepFunction& F, const StepFunction& G,
                             const LambdaSequence& lambda, const PExponent& p, double epsilon,
                             std::uint64_t seed = 0);

}  // namespace pvar
