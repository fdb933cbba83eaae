#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pvar/lifting.hpp"
#include "pvar/variation.hpp"

namespace pvar {

/// Norm of the ambient algebra; defaults to the BV_p norm. The Shiba-Waterman
/// probe swaps in its own norm.
using NormFn = std::function<double(const StepFunction&)>;

NormFn bvp_norm_fn(const PExponent& p);

/// Constants of the factorization iteration at a jointly nondegenerate pair.
struct OpennessConfig {
    double requested_epsilon = 0.0;
    double epsilon = 0.0;  // effective value in (0,1)
    bool epsilon_clamped = false;
    double delta = 0.0;  // min{1, joint_margin/2}
    double K = 2.0;      // 2 max{||F||, ||G||, 1}
    double C = 1.0;      // embedding constant of the algebra
    double eta = 0.0;    // eps delta^8 / (128 C K^6), the admissible radius
    double p_value = 1.0;
};

/// Thrown when a perturbation lies outside the guaranteed radius.
class RadiusError : public std::runtime_error {
  public:
    RadiusError(double h_norm, double radius)
        : std::runtime_error("perturbation norm " + std::to_string(h_norm) +
                             " outside the admissible radius " + std::to_string(radius)),
          h_norm_(h_norm),
          radius_(radius) {}
    double h_norm() const { return h_norm_; }
    double radius() const { return radius_; }

  private:
    double h_norm_, radius_;
};

OpennessConfig make_openness_config(const StepFunction& F, const StepFunction& G,
                                    const PExponent& p, double epsilon,
                                    const NormFn& norm = {});

/// (F_n, G_n, h_n) on one shared grid.
struct IterationState {
    std::size_t n = 0;
    StepFunction F, G, h;
};

IterationState make_iteration_state(const StepFunction& F, const StepFunction& G,
                                    const StepFunction& h);

/// One iteration:
///   F' = F + h conj(G) / (|F|^2 + |G|^2)
///   G' = G + h conj(F) / (|F|^2 + |G|^2)
///   h' = -h^2 conj(F G) / (|F|^2 + |G|^2)^2
/// computed pointwise on the shared grid. Throws when a denominator vanishes
/// (impossible while the margin invariant holds).
IterationState iteration_step(const IterationState& state);

struct ClaimCheck {
    bool ok = true;
    double attained = 0.0;
    double bound = 0.0;
};

/// Per-step certificate for the four induction claims.
struct InvariantReport {
    std::size_t n = 0;
    double claim_i_residual = 0.0;  // max pointwise |F_n G_n + h_n - (FG + h)|
    double claim_i_bound = 0.0;
    bool claim_i_ok = true;
    ClaimCheck claim_ii_F, claim_ii_G;  // norms <= K/2 + 1 - 2^{-n}
    ClaimCheck claim_iii;               // margin >= delta (1 + 2^{-n})
    ClaimCheck claim_iv;                // ||h_n|| <= eta 2^{-n}
    double h_norm = 0.0;
    double min_denominator = 0.0;  // min over the grid of |F_n|^2 + |G_n|^2
    bool all_ok() const {
        return claim_i_ok && claim_ii_F.ok && claim_ii_G.ok && claim_iii.ok && claim_iv.ok;
    }
};

InvariantReport check_invariants(const IterationState& state, const OpennessConfig& config,
                                 const StepFunction& F, const StepFunction& G,
                                 const StepFunction& h, const NormFn& norm = {});

struct FactorOptions {
    double epsilon = 0.5;
    double tol = 1e-12;
    std::size_t max_iter = 200;
    bool force = false;  // proceed outside the radius, without guarantees
    /// Record the claim certificates each step (norms cost O(m^2); defaults
    /// off above this many grid values unless forced by check_claims).
    std::size_t claim_check_limit = 2000;
    std::optional<bool> check_claims;
    NormFn norm;  // empty = BV_p norm
};

struct FactorResult {
    StepFunction f, g;
    OpennessConfig config;
    bool converged = false;
    std::size_t steps = 0;
    double final_h_norm = 0.0;
    double residual = 0.0;  // max pointwise |f g - (F G + h)|
    double dist_F = 0.0, dist_G = 0.0;
    bool claims_ok = true;       // claims (i)-(iv) held at every recorded step
    bool decay_ok = true;        // ||h_{n+1}|| <= ||h_n||/2 + 1e-12 throughout
    bool guarantees_ok = false;  // converged, residual and distances in bounds
    bool forced = false;
    std::vector<InvariantReport> trace{};
};

/// Factorizes F G + h = f g with ||f - F|| and ||g - G|| < epsilon, for a
/// jointly nondegenerate pair and ||h|| inside the admissible radius.
/// Throws RadiusError for inadmissible h unless options.force, and throws
/// on non-convergence within max_iter (impossible for admissible h).
FactorResult factor_perturbation(const StepFunction& F, const StepFunction& G,
                                 const StepFunction& h, const PExponent& p,
                                 const FactorOptions& options);

struct OpenBallResult {
    LiftResult lift;
    FactorResult factor;
    double radius = 0.0;  // admissible radius at the lifted pair
    double dist_F = 0.0, dist_G = 0.0;  // distances to the original pair
    double residual = 0.0;              // max pointwise |f g - (F G + h)|
    bool guarantees_ok = false;
};

/// Admissible perturbation radius of the composed pipeline: the lifted pair's
/// config radius at epsilon/2.
double composed_radius(const LiftResult& lift, const PExponent& p, double epsilon,
                       const NormFn& norm = {});

/// The composed pipeline for an arbitrary (possibly degenerate) pair: lift to
/// a jointly nondegenerate pair at epsilon/2, then factor the perturbation at
/// epsilon/2. Guarantees f g = F G + h pointwise (to tolerance) with
/// ||f - F|| and ||g - G|| < epsilon.
OpenBallResult open_ball_factorize(const StepFunction& F, const StepFunction& G,
                                   const PExponent& p, double epsilon, const StepFunction& h,
                                   const FactorOptions& options = {});

}  // namespace pvar
