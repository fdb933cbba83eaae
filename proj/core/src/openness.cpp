#include "pvar/openness.hpp"

#include <algorithm>
#include <cmath>

namespace pvar {

namespace {

constexpr double kClaimSlack = 1e-12;

NormFn resolve_norm(const NormFn& norm, const PExponent& p) {
    return norm ? norm : bvp_norm_fn(p);
}

std::vector<double> merged_grid(const StepFunction& a, const StepFunction& b,
                                const StepFunction& c) {
    std::vector<double> g1;
    std::set_union(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
                   b.breakpoints().end(), std::back_inserter(g1));
    std::vector<double> g2;
    std::set_union(g1.begin(), g1.end(), c.breakpoints().begin(), c.breakpoints().end(),
                   std::back_inserter(g2));
    return g2;
}

}  // namespace

NormFn bvp_norm_fn(const PExponent& p) {
    return [p](const StepFunction& f) { return bvp_norm(f, p); };
}

OpennessConfig make_openness_config(const StepFunction& F, const StepFunction& G,
                                    const PExponent& p, double epsilon, const NormFn& norm) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    const double margin = joint_margin(F, G);
    if (!(margin > 0.0)) throw std::invalid_argument("pair not jointly nondegenerate");
    NormFn nf = resolve_norm(norm, p);

    OpennessConfig config;
    config.requested_epsilon = epsilon;
    // The construction assumes eps in (0,1); larger requests reduce to it.
    config.epsilon_clamped = epsilon >= 1.0;
    config.epsilon = config.epsilon_clamped ? 0.99 : epsilon;
    config.delta = std::min(1.0, margin / 2.0);
    config.K = 2.0 * std::max({nf(F), nf(G), 1.0});
    config.C = 1.0;
    config.eta = config.epsilon * std::pow(config.delta, 8.0) /
                 (128.0 * config.C * std::pow(config.K, 6.0));
    config.p_value = p.value();
    return config;
}

IterationState make_iteration_state(const StepFunction& F, const StepFunction& G,
                                    const StepFunction& h) {
    auto grid = merged_grid(F, G, h);
    return IterationState{0, refine_to_grid(F, grid), refine_to_grid(G, grid),
                          refine_to_grid(h, grid)};
}

IterationState iteration_step(const IterationState& state) {
    const auto& F = state.F.values();
    const auto& G = state.G.values();
    const auto& h = state.h.values();
    const std::size_t count = F.size();
    std::vector<complexd> nF(count), nG(count), nh(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double denom = std::norm(F[i]) + std::norm(G[i]);
        if (denom == 0.0)
            throw std::domain_error("vanishing denominator at value index " + std::to_string(i));
        nF[i] = F[i] + h[i] * std::conj(G[i]) / denom;
        nG[i] = G[i] + h[i] * std::conj(F[i]) / denom;
        nh[i] = -h[i] * h[i] * std::conj(F[i] * G[i]) / (denom * denom);
    }
    Field field = (state.F.field() == Field::Real && state.G.field() == Field::Real &&
                   state.h.field() == Field::Real)
                      ? Field::Real
                      : Field::Complex;
    const auto& grid = state.F.breakpoints();
    return IterationState{state.n + 1, StepFunction(grid, std::move(nF), field),
                          StepFunction(grid, std::move(nG), field),
                          StepFunction(grid, std::move(nh), field)};
}

InvariantReport check_invariants(const IterationState& state, const OpennessConfig& config,
                                 const StepFunction& F, const StepFunction& G,
                                 const StepFunction& h, const NormFn& norm) {
    PExponent p(config.p_value);
    NormFn nf = resolve_norm(norm, p);
    InvariantReport report;
    report.n = state.n;

    // (i) F_n G_n + h_n = F G + h, compared pointwise on the shared grid.
    StepFunction target =
        pointwise_combine(pointwise_combine(F, G, PointwiseOp::Multiply), h, PointwiseOp::Add);
    StepFunction current = pointwise_combine(
        pointwise_combine(state.F, state.G, PointwiseOp::Multiply), state.h, PointwiseOp::Add);
    auto [rt, rc] = common_refinement(target, current);
    double residual = 0.0;
    for (std::size_t i = 0; i < rt.values().size(); ++i)
        residual = std::max(residual, std::abs(rc.values()[i] - rt.values()[i]));
    report.claim_i_residual = residual;
    report.claim_i_bound = 1e-10 * (1.0 + sup_norm(target));
    report.claim_i_ok = residual <= report.claim_i_bound;

    const double two_neg_n = std::ldexp(1.0, -static_cast<int>(state.n));
    auto check_upper = [](double attained, double bound) {
        return ClaimCheck{attained <= bound + kClaimSlack * (1.0 + std::abs(bound)), attained,
                          bound};
    };

    // (ii) norm growth control.
    const double bound_ii = config.K / 2.0 + 1.0 - two_neg_n;
    report.claim_ii_F = check_upper(nf(state.F), bound_ii);
    report.claim_ii_G = check_upper(nf(state.G), bound_ii);

    // (iii) margin stays above delta (1 + 2^{-n}).
    const double margin = joint_margin(state.F, state.G);
    const double bound_iii = config.delta + config.delta * two_neg_n;
    report.claim_iii =
        ClaimCheck{margin >= bound_iii - kClaimSlack * (1.0 + bound_iii), margin, bound_iii};

    // (iv) geometric decay of the perturbation.
    report.h_norm = nf(state.h);
    report.claim_iv = check_upper(report.h_norm, config.eta * two_neg_n);

    double min_denom = std::norm(state.F.values()[0]) + std::norm(state.G.values()[0]);
    for (std::size_t i = 1; i < state.F.values().size(); ++i)
        min_denom =
            std::min(min_denom, std::norm(state.F.values()[i]) + std::norm(state.G.values()[i]));
    report.min_denominator = min_denom;

    return report;
}

FactorResult factor_perturbation(const StepFunction& F, const StepFunction& G,
                                 const StepFunction& h, const PExponent& p,
                                 const FactorOptions& options) {
    NormFn nf = resolve_norm(options.norm, p);
    OpennessConfig config = make_openness_config(F, G, p, options.epsilon, nf);

    IterationState state = make_iteration_state(F, G, h);
    // Copies: the state is rewritten every step, the originals anchor claim (i).
    const StepFunction rF = state.F;
    const StepFunction rG = state.G;
    const StepFunction rh = state.h;

    const double h_norm0 = nf(rh);
    const bool admissible = h_norm0 < config.eta;
    if (!admissible && !options.force) throw RadiusError(h_norm0, config.eta);

    const bool record_claims = options.check_claims.value_or(
        state.F.values().size() <= options.claim_check_limit);

    FactorResult result{.f = rF, .g = rG, .config = config};
    result.forced = !admissible;

    double h_norm = h_norm0;
    double prev_h_norm = h_norm0;
    auto record = [&]() {
        if (!record_claims) return;
        InvariantReport rep = check_invariants(state, config, rF, rG, rh, nf);
        result.claims_ok = result.claims_ok && rep.all_ok();
        result.trace.push_back(std::move(rep));
    };
    record();

    while (h_norm > options.tol && state.n < options.max_iter) {
        state = iteration_step(state);
        prev_h_norm = h_norm;
        h_norm = nf(state.h);
        record();
        // decay factor at most 1/2 per step, up to rounding
        if (h_norm > prev_h_norm * (0.5 + 1e-12) + 1e-300) result.decay_ok = false;
    }

    result.converged = h_norm <= options.tol;
    result.steps = state.n;
    result.final_h_norm = h_norm;
    result.f = state.F;
    result.g = state.G;

    if (!result.converged && !options.force)
        throw std::runtime_error("factorization did not reach tol within " +
                                 std::to_string(options.max_iter) + " iterations");

    StepFunction target =
        pointwise_combine(pointwise_combine(rF, rG, PointwiseOp::Multiply), rh, PointwiseOp::Add);
    StepFunction product = pointwise_combine(result.f, result.g, PointwiseOp::Multiply);
    auto [rt, rp] = common_refinement(target, product);
    for (std::size_t i = 0; i < rt.values().size(); ++i)
        result.residual =
            std::max(result.residual, std::abs(rp.values()[i] - rt.values()[i]));

    result.dist_F = nf(pointwise_combine(result.f, rF, PointwiseOp::Subtract));
    result.dist_G = nf(pointwise_combine(result.g, rG, PointwiseOp::Subtract));

    // |f g - (F G + h)| = |h_n| exactly; rounding across the run is covered by
    // the same allowance the claim (i) certificate uses.
    const double residual_bound = std::max(config.C * std::max(options.tol, h_norm),
                                           1e-10 * (1.0 + sup_norm(target)));
    result.guarantees_ok = result.converged && result.residual <= residual_bound &&
                           result.dist_F < config.epsilon && result.dist_G < config.epsilon &&
                           (result.claims_ok || !record_claims || result.forced);
    return result;
}

double composed_radius(const LiftResult& lift, const PExponent& p, double epsilon,
                       const NormFn& norm) {
    return make_openness_config(lift.F1, lift.G1, p, epsilon / 2.0, norm).eta;
}

OpenBallResult open_ball_factorize(const StepFunction& F, const StepFunction& G,
                                   const PExponent& p, double epsilon, const StepFunction& h,
                                   const FactorOptions& options) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    LiftResult lift = lift_pair(F, G, p, epsilon / 2.0);

    FactorOptions inner = options;
    inner.epsilon = epsilon / 2.0;
    FactorResult factor = factor_perturbation(lift.F1, lift.G1, h, p, inner);

    OpenBallResult out{std::move(lift), std::move(factor)};
    out.radius = out.factor.config.eta;

    NormFn nf = resolve_norm(options.norm, p);
    out.dist_F = nf(pointwise_combine(out.factor.f, F, PointwiseOp::Subtract));
    out.dist_G = nf(pointwise_combine(out.factor.g, G, PointwiseOp::Subtract));

    // The residual is taken against the original data F G + h; the lift keeps
    // the product, so only rounding separates it from the factor residual.
    StepFunction target =
        pointwise_combine(pointwise_combine(F, G, PointwiseOp::Multiply), h, PointwiseOp::Add);
    StepFunction product =
        pointwise_combine(out.factor.f, out.factor.g, PointwiseOp::Multiply);
    auto [rt, rp] = common_refinement(target, product);
    for (std::size_t i = 0; i < rt.values().size(); ++i)
        out.residual = std::max(out.residual, std::abs(rp.values()[i] - rt.values()[i]));
    const double residual_bound = 1e-10 * (1.0 + sup_norm(target));

    out.guarantees_ok = out.factor.converged && out.residual <= residual_bound &&
                        out.dist_F < epsilon && out.dist_G < epsilon &&
                        (out.factor.claims_ok || out.factor.forced);
    return out;
}

}  // namespace pvar
