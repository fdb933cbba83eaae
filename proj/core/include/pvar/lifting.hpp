#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "pvar/small_value_bounds.hpp"
#include "pvar/variation.hpp"

namespace pvar {

/// Discontinuity points of f: breakpoints where adjacent values differ, plus
/// the point 1 when the distinguished value differs from the last piece.
std::vector<double> jump_set(const StepFunction& f);

/// Maximal run of pieces on which |F|+|G| stays below a threshold, with the
/// attained interval statistics. The open interval is (a, b); `contains_one`
/// records that the run reaches the right edge and the distinguished value at
/// 1 is also below the threshold (so 1 is relative-interior and belongs).
struct IntervalStats {
    double a = 0.0, b = 0.0;
    std::size_t first_index = 0, last_index = 0;  // value-index run, inclusive
    bool contains_one = false;
    double inf_h = 0.0, sup_h = 0.0;  // of |F|+|G|
    double sup_abs_F = 0.0, sup_abs_G = 0.0;
};

struct IntervalCollection {
    std::vector<IntervalStats> intervals;
    std::size_t size() const { return intervals.size(); }
    bool empty() const { return intervals.empty(); }
};

/// Maximal open intervals of the interior of {|F|+|G| < eta}, filtered to
/// those whose infimum is below eta/2 (the A0 collection).
IntervalCollection locate_small_intervals(const StepFunction& F, const StepFunction& G,
                                          double eta);

struct LocalSupReport {
    bool applicable = false;  // inf over (a,b) of |f| < rho
    bool pass = true;
    double inf_f = 0.0;
    double sup_f = 0.0;
    /// sup over closed subintervals of (a,b) of Var_p^{1/p}, exact on the grid.
    double local_var_root = 0.0;
    double bound = 0.0;  // rho + local_var_root
};

/// Oscillation bound: a function dipping below rho on (a,b) has
/// sup_{(a,b)} |f| <= rho + sup_{[alpha,beta] subset (a,b)} Var_p^{1/p}.
/// Vacuous pass when the dip precondition fails.
LocalSupReport local_sup_bound_check(const StepFunction& f, const PExponent& p, double a,
                                     double b, double rho);

/// Audit trail of the nondegenerate lifting construction.
struct ApproxPlan {
    double epsilon = 0.0;
    double p_value = 1.0;
    bool zero_pair = false;  // F = G = 0 special case
    bool identity = false;   // joint margin >= eta, nothing modified
    double small_value_delta = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    IntervalCollection a0;  // N = a0.size()
    IntervalCollection a;   // n = a.size()
    std::vector<double> c, d;
    std::vector<double> j_eta, j_eta_s, j_eta_0;  // breakpoint locations
    std::vector<std::size_t> j_eta_0_indices;     // value indices behind j_eta_0
    std::size_t k = 0;
    /// I1..I6; +infinity for an empty set.
    std::array<double, 6> margins{};
    double joint_margin_after = 0.0;
    double dist_F = 0.0, dist_G = 0.0;     // BV_p distances to (F1, G1), measured
    double dist_F_f = 0.0, dist_F1_f = 0.0;  // pieces of the F distance chain
};

struct LiftResult {
    StepFunction F1, G1;
    ApproxPlan plan;
};

/// Replaces (F, G) by a jointly nondegenerate pair with the same pointwise
/// product and BV_p distance < epsilon from the originals. Identity (bit-exact
/// inputs returned) when the pair already has joint margin >= eta.
LiftResult lift_pair(const StepFunction& F, const StepFunction& G, const PExponent& p,
                     double epsilon);

struct AuditReport {
    bool pass = true;
    std::array<double, 6> margins{};
    std::array<double, 6> margin_bounds{};
    double product_residual = 0.0;  // max pointwise |F1 G1 - F G| / (1 + |F G|)
    double joint_margin = 0.0;
    double dist_F = 0.0, dist_G = 0.0;
    double dist_F_f = 0.0, dist_F_f_bound = 0.0;    // < 7 eps / 8
    double dist_F1_f = 0.0, dist_F1_f_bound = 0.0;  // <= (2k+1)/(24k) eps
    bool separation_ok = true;  // consecutive A0 intervals separated by h >= eta
    std::vector<std::string> violations;
};

/// Recomputes the margins and distance chains of a lift from first
/// principles; failures are reported, not thrown.
AuditReport audit_plan(const ApproxPlan& plan, const StepFunction& F, const StepFunction& G,
                       const StepFunction& F1, const StepFunction& G1, const PExponent& p,
                       double epsilon);

constexpr double kMarginInfinity = std::numeric_limits<double>::infinity();

}  // namespace pvar
