#include "pvar/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <tuple>

#include "pvar/lambda_variation.hpp"
#include "pvar/lifting.hpp"
#include "pvar/openness.hpp"
#include "pvar/random_instances.hpp"
#include "pvar/small_value_bounds.hpp"
#include "pvar/variation.hpp"

namespace pvar {

namespace {

constexpr std::size_t kMaxFailureMessages = 10;

class SuiteRun {
  public:
    explicit SuiteRun(std::string name, std::uint64_t seed) {
        report_.name = std::move(name);
        report_.seed = seed;
        start_ = std::chrono::steady_clock::now();
    }

    void require(bool ok, const std::string& what) {
        if (ok) return;
        report_.pass = false;
        ++report_.violations;
        if (report_.failures.size() < kMaxFailureMessages) report_.failures.push_back(what);
    }

    void count_case() { ++report_.cases; }
    void stat_max(const std::string& key, double value) {
        auto [it, inserted] = report_.stats.try_emplace(key, value);
        if (!inserted) it->second = std::max(it->second, value);
    }
    void stat_set(const std::string& key, double value) { report_.stats[key] = value; }
    void stat_add(const std::string& key, double value) { report_.stats[key] += value; }

    SuiteReport finish() {
        report_.duration_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        return std::move(report_);
    }

  private:
    SuiteReport report_;
    std::chrono::steady_clock::time_point start_;
};

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

const double kOraclePs[] = {1.0, 1.5, 2.0, 3.0};

}  // namespace

SuiteReport run_oracle_suite(std::size_t functions, std::uint64_t seed) {
    SuiteRun run("oracle", seed);
    Rng rng(seed);
    for (std::size_t i = 0; i < functions; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 12;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        StepFunction f = random_step_function(rng, spec);
        for (double pv : kOraclePs) {
            PExponent p(pv);
            auto [dp, witness] = total_var_p(f, p);
            double oracle = brute_force_var_p(f, p);
            run.count_case();
            run.stat_max("max_rel_diff",
                         std::abs(dp - oracle) / std::max({1.0, dp, oracle}));
            run.require(rel_close(dp, oracle, 1e-12),
                        "DP and enumeration disagree: " + std::to_string(dp) + " vs " +
                            std::to_string(oracle));
            run.require(var_p_on_partition(f, witness, p) == witness.attained,
                        "witness sum does not recompute to its attained value");
        }
    }
    return run.finish();
}

SuiteReport run_norm_axioms_suite(std::size_t pairs, std::uint64_t seed) {
    SuiteRun run("norms", seed);
    Rng rng(seed);
    for (std::size_t i = 0; i < pairs; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 12;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(kOraclePs[i % 4]);
        StepFunction f = random_step_function(rng, spec);
        StepFunction g = random_step_function(rng, spec);
        run.count_case();

        const double nf = bvp_norm(f, p);
        const double ng = bvp_norm(g, p);
        const double nfg = bvp_norm(pointwise_combine(f, g, PointwiseOp::Multiply), p);
        run.require(nfg <= nf * ng * (1.0 + 1e-9), "submultiplicativity violated");
        run.stat_max("max_submult_ratio", nf * ng > 0 ? nfg / (nf * ng) : 0.0);

        run.require(bvp_norm(conjugate(f), p) == nf, "conjugation changed the norm");
        run.require(sup_norm(f) <= nf, "embedding constant 1 violated");

        const complexd c = spec.field == Field::Real
                               ? complexd(rng.uniform(-3.0, 3.0), 0.0)
                               : complexd(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
        const double ac = std::abs(c);
        run.require(rel_close(total_var_p(scale(f, c), p).first,
                              pow_abs(ac, p.value()) * total_var_p(f, p).first, 1e-12),
                    "variation scaling homogeneity violated");
        run.require(rel_close(bvp_norm(scale(f, c), p), ac * nf, 1e-12),
                    "norm scaling homogeneity violated");

        // Inclusion BV_p into BV_q for p <= q.
        PExponent q(p.value() + rng.uniform(0.0, 2.0));
        double root_p = std::pow(total_var_p(f, p).first, 1.0 / p.value());
        double root_q = std::pow(total_var_p(f, q).first, 1.0 / q.value());
        run.require(root_q <= root_p * (1.0 + 1e-12) + 1e-15,
                    "variation monotonicity in p violated");

        // Refinement changes neither norm ingredient.
        auto [rf, rg] = common_refinement(f, g);
        run.require(sup_norm(rf) == sup_norm(f), "refinement changed the sup norm");
        run.require(rel_close(total_var_p(rf, p).first, total_var_p(f, p).first, 1e-12),
                    "refinement changed the variation");
    }
    return run.finish();
}

SuiteReport run_inverse_suite(std::size_t cases, std::uint64_t seed) {
    SuiteRun run("inverse", seed);
    Rng rng(seed);
    const double ps[] = {1.0, 2.0, 3.0};
    for (std::size_t i = 0; i < cases; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 12;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        spec.min_abs = 0.1;
        spec.max_abs = 1.2;
        PExponent p(ps[i % 3]);
        StepFunction f = random_step_function(rng, spec);
        run.count_case();
        auto inv = pointwise_inverse(f, p);
        const double actual = bvp_norm(inv.inverse, p);
        run.require(actual <= inv.norm_bound * (1.0 + 1e-10),
                    "inverse closedness bound violated");
        run.stat_max("max_bound_ratio", actual / inv.norm_bound);
    }
    return run.finish();
}

SuiteReport run_inequality_suite(std::uint64_t samples, std::uint64_t seed) {
    SuiteRun run("inequalities", seed);
    const double ps[] = {1.0, 1.5, 2.0, 2.5, 4.0};
    for (double pv : ps) {
        auto report = check_elementary_inequalities(PExponent(pv), samples, seed);
        run.count_case();
        run.require(report.pass, "inequality violated at p = " + std::to_string(pv) +
                                     (report.violation ? ": " + report.violation->inequality
                                                       : std::string()));
        run.stat_max("min_slack_seen", -std::min({report.min_slack[0], report.min_slack[1],
                                                  report.min_slack[2]}));
    }
    return run.finish();
}

SuiteReport run_small_value_suite(std::size_t cases, std::uint64_t seed) {
    SuiteRun run("smallvalue", seed);
    Rng rng(seed);
    const double eps_grid[] = {0.1, 0.5, 1.0};
    for (std::size_t i = 0; i < cases; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 12;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(kOraclePs[i % 4]);
        const double epsilon = eps_grid[i % 3];
        StepFunction f = random_step_function(rng, spec);
        run.count_case();
        auto bound = delta_for_function(f, p, epsilon);
        auto verdict = verify_small_value_sum(f, p, bound.delta, epsilon);
        run.require(verdict.pass && verdict.cross_check_ok,
                    "small-value delta fails the selection oracle");
        run.stat_max("max_conservatism", verdict.conservatism);
    }
    return run.finish();
}

SuiteReport run_iteration_suite(std::size_t pairs, std::uint64_t seed) {
    SuiteRun run("iteration", seed);
    Rng rng(seed);
    const double eps_grid[] = {0.25, 0.5, 0.9};
    for (std::size_t i = 0; i < pairs; ++i) {
        Field field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(kOraclePs[i % 4]);
        const double epsilon = eps_grid[i % 3];
        auto [F, G] = random_nondegenerate_pair(rng, 20, field, 0.5);
        OpennessConfig config = make_openness_config(F, G, p, epsilon);

        std::vector<double> grid;
        std::set_union(F.breakpoints().begin(), F.breakpoints().end(),
                       G.breakpoints().begin(), G.breakpoints().end(),
                       std::back_inserter(grid));
        StepFunction h =
            random_perturbation(rng, grid, field, 0.9 * config.eta, bvp_norm_fn(p));

        FactorOptions options;
        options.epsilon = epsilon;
        run.count_case();
        FactorResult result = factor_perturbation(F, G, h, p, options);
        run.require(result.converged, "iteration did not converge");
        run.require(result.steps <= 60, "iteration needed more than 60 steps");
        run.require(result.claims_ok, "an induction claim failed along the trace");
        run.require(result.decay_ok, "perturbation norm failed to halve");
        StepFunction target = pointwise_combine(pointwise_combine(F, G, PointwiseOp::Multiply),
                                                h, PointwiseOp::Add);
        run.require(result.residual <= 1e-10 * (1.0 + sup_norm(target)),
                    "factorization residual too large");
        run.require(result.dist_F < epsilon && result.dist_G < epsilon,
                    "factor distance not strictly below epsilon");
        for (const auto& step : result.trace)
            run.require(step.min_denominator >= config.delta * config.delta / 2.0 - 1e-12,
                        "denominator safety bound violated");
        run.stat_max("max_steps", static_cast<double>(result.steps));
        run.stat_max("max_residual", result.residual);
    }
    return run.finish();
}

SuiteReport run_lifting_suite(std::size_t pairs, std::uint64_t seed) {
    SuiteRun run("lifting", seed);
    Rng rng(seed);
    for (std::size_t i = 0; i < pairs; ++i) {
        Field field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(kOraclePs[i % 4]);
        const double epsilon = (i % 2 == 0) ? 0.1 : 0.5;
        auto [F, G] = random_degenerate_pair(rng, 10, field);
        run.count_case();

        LiftResult lift = lift_pair(F, G, p, epsilon);
        auto [prod_before_F, prod_before_G] = common_refinement(
            pointwise_combine(F, G, PointwiseOp::Multiply),
            pointwise_combine(lift.F1, lift.G1, PointwiseOp::Multiply));
        double worst = 0.0;
        for (std::size_t j = 0; j < prod_before_F.values().size(); ++j)
            worst = std::max(worst,
                             std::abs(prod_before_G.values()[j] - prod_before_F.values()[j]) /
                                 (1.0 + std::abs(prod_before_F.values()[j])));
        run.require(worst <= 1e-14, "lift did not preserve the product");
        run.stat_max("max_product_residual", worst);

        run.require(joint_margin(lift.F1, lift.G1) > 0.0, "lifted pair degenerate");
        run.require(lift.plan.dist_F < epsilon && lift.plan.dist_G < epsilon,
                    "lift distance not strictly below epsilon");
        auto audit = audit_plan(lift.plan, F, G, lift.F1, lift.G1, p, epsilon);
        run.require(audit.pass, std::string("lift audit failed") +
                                    (audit.violations.empty() ? "" : ": " + audit.violations[0]));
    }
    // Idempotence on pairs that are already jointly nondegenerate.
    std::size_t idempotence_cases = std::max<std::size_t>(pairs / 4, 1);
    for (std::size_t i = 0; i < idempotence_cases; ++i) {
        Field field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(kOraclePs[i % 4]);
        auto [F, G] = random_nondegenerate_pair(rng, 10, field, 0.5);
        run.count_case();
        LiftResult lift = lift_pair(F, G, p, 0.5);
        run.require(lift.plan.identity && lift.F1 == F && lift.G1 == G,
                    "lift not bit-exact identity on a nondegenerate pair");
    }
    return run.finish();
}

SuiteReport run_end_to_end_suite(std::size_t pairs, std::uint64_t seed) {
    SuiteRun run("endtoend", seed);
    Rng rng(seed);
    for (std::size_t i = 0; i < pairs; ++i) {
        Field field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(kOraclePs[i % 4]);
        const double epsilon = (i % 2 == 0) ? 0.2 : 0.5;
        const std::size_t pieces = (i % 7 == 3) ? 150 + rng.below(51) : 2 + rng.below(39);

        StepFunction F = constant_step_function(0.0);
        StepFunction G = constant_step_function(0.0);
        if (i % 10 < 6) {
            std::tie(F, G) = random_degenerate_pair(rng, pieces, field);
        } else if (i % 10 < 9) {
            std::tie(F, G) = random_nondegenerate_pair(rng, pieces, field, 0.4);
        } else {
            RandomFunctionSpec spec{1, pieces, field, 0.0, 1.0};
            G = random_step_function(rng, spec);  // F stays identically zero
        }
        run.count_case();

        LiftResult lift = lift_pair(F, G, p, epsilon / 2.0);
        const double radius = composed_radius(lift, p, epsilon);
        StepFunction h = random_perturbation(rng, lift.F1.breakpoints(), field, 0.9 * radius,
                                             bvp_norm_fn(p));
        OpenBallResult result = open_ball_factorize(F, G, p, epsilon, h);
        run.require(result.guarantees_ok, "composed factorization guarantees failed");
        run.require(result.dist_F < epsilon && result.dist_G < epsilon,
                    "composed distance not strictly below epsilon");
        run.stat_max("max_residual", result.residual);
        run.stat_max("max_steps", static_cast<double>(result.factor.steps));
        run.stat_max("max_grid", static_cast<double>(result.factor.f.values().size()));
    }
    return run.finish();
}

SuiteReport run_lambda_suite(std::size_t cases, std::uint64_t seed) {
    SuiteRun run("lambda", seed);
    Rng rng(seed);

    // Rearrangement optimality by permutation enumeration (families <= 6).
    for (std::size_t i = 0; i < std::min<std::size_t>(cases, 100); ++i) {
        std::size_t count = 1 + rng.below(6);
        std::vector<double> incs(count);
        for (auto& x : incs) x = rng.uniform(0.0, 2.0);
        LambdaSequence lambda = (i % 3 == 0)   ? LambdaSequence::harmonic()
                                : (i % 3 == 1) ? LambdaSequence::constant()
                                               : LambdaSequence::explicit_prefix(
                                                     {0.5, 1.5, 3.0},
                                                     LambdaSequence::Tail::Harmonic);
        run.count_case();
        double sorted_value = family_value(incs, lambda);
        std::vector<std::size_t> perm(count);
        for (std::size_t j = 0; j < count; ++j) perm[j] = j;
        double best_perm = 0.0;
        std::sort(perm.begin(), perm.end());
        do {
            double v = 0.0;
            for (std::size_t j = 0; j < count; ++j) v += incs[perm[j]] / lambda(j + 1);
            best_perm = std::max(best_perm, v);
        } while (std::next_permutation(perm.begin(), perm.end()));
        run.require(rel_close(best_perm, sorted_value, 1e-12) || best_perm <= sorted_value,
                    "a permutation beats the sorted weight assignment");
    }

    // Constant lambda at p = 1 is the total 1-variation.
    PExponent one(1.0);
    for (std::size_t i = 0; i < cases; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 12;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        StepFunction f = random_step_function(rng, spec);
        run.count_case();
        auto lv = lambda_var_p(f, LambdaSequence::constant(), one);
        double tv = total_var_p(f, one).first;
        run.require(lv.exact, "exact search expected on a small grid");
        run.require(rel_close(lv.value, tv, 1e-12),
                    "constant-lambda variation differs from total 1-variation");
    }

    // Algebra axioms of the Shiba-Waterman norm on exact small grids:
    // symmetry, submultiplicativity, embedding constant 1.
    for (std::size_t i = 0; i < std::min<std::size_t>(cases, 100); ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 6;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(kOraclePs[i % 3]);
        LambdaSequence lambda =
            (i % 2 == 0) ? LambdaSequence::harmonic() : LambdaSequence::constant();
        StepFunction f = random_step_function(rng, spec);
        StepFunction g = random_step_function(rng, spec);
        run.count_case();
        auto nf = lambda_bv_norm(f, lambda, p);
        auto ng = lambda_bv_norm(g, lambda, p);
        auto nfg =
            lambda_bv_norm(pointwise_combine(f, g, PointwiseOp::Multiply), lambda, p);
        run.require(nf.exact && ng.exact && nfg.exact, "expected exact lambda norms");
        run.require(nfg.value <= nf.value * ng.value * (1.0 + 1e-9),
                    "Shiba-Waterman submultiplicativity violated");
        run.require(lambda_bv_norm(conjugate(f), lambda, p).value == nf.value,
                    "conjugation changed the Shiba-Waterman norm");
        run.require(sup_norm(f) <= nf.value,
                    "Shiba-Waterman embedding constant 1 violated");
    }

    // Inverse closedness in the Shiba-Waterman norm.
    for (std::size_t i = 0; i < cases; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 10;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        spec.min_abs = 0.1;
        spec.max_abs = 1.2;
        PExponent p(kOraclePs[i % 3]);  // 1, 1.5, 2
        LambdaSequence lambda =
            (i % 2 == 0) ? LambdaSequence::harmonic() : LambdaSequence::constant();
        StepFunction f = random_step_function(rng, spec);
        run.count_case();
        auto report = lambda_inverse_check(f, lambda, p);
        run.require(report.pass, "Shiba-Waterman inverse closedness failed");
    }

    // Conjecture probe batch: completion and statistics, no claims.
    std::size_t probes = std::max<std::size_t>(cases / 4, 10);
    double ratio_sum = 0.0;
    double ratio_max = 0.0;
    std::size_t under = 0;
    std::size_t converged = 0;
    for (std::size_t i = 0; i < probes; ++i) {
        Field field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(i % 2 == 0 ? 1.0 : 2.0);
        auto [F, G] = random_degenerate_pair(rng, 5, field);
        run.count_case();
        auto probe = conjecture_probe(F, G, LambdaSequence::harmonic(), p, 0.5, seed + i);
        double ratio =
            std::max(probe.dist_F_lambda, probe.dist_G_lambda) / probe.epsilon;
        ratio_sum += ratio;
        ratio_max = std::max(ratio_max, ratio);
        if (probe.under_epsilon) ++under;
        if (probe.factor_ran && probe.factor_converged) ++converged;
    }
    run.stat_set("probe_count", static_cast<double>(probes));
    run.stat_set("probe_ratio_mean", ratio_sum / static_cast<double>(probes));
    run.stat_set("probe_ratio_max", ratio_max);
    run.stat_set("probe_under_epsilon", static_cast<double>(under));
    run.stat_set("probe_factor_converged", static_cast<double>(converged));

    return run.finish();
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "oracle",    "norms",   "inverse", "inequalities", "smallvalue",
        "iteration", "lifting", "endtoend", "lambda"};
    return names;
}

std::vector<SuiteReport> run_suites(const std::string& name, std::optional<std::size_t> samples,
                                    std::optional<std::uint64_t> seed) {
    auto pick = [&](std::size_t fallback) { return samples.value_or(fallback); };
    auto one = [&](const std::string& which) -> SuiteReport {
        if (which == "oracle") return run_oracle_suite(pick(500), seed.value_or(1));
        if (which == "norms") return run_norm_axioms_suite(pick(1000), seed.value_or(2));
        if (which == "inverse") return run_inverse_suite(pick(200), seed.value_or(3));
        if (which == "inequalities")
            return run_inequality_suite(samples.value_or(100000), seed.value_or(4));
        if (which == "smallvalue") return run_small_value_suite(pick(100), seed.value_or(5));
        if (which == "iteration") return run_iteration_suite(pick(100), seed.value_or(6));
        if (which == "lifting") return run_lifting_suite(pick(200), seed.value_or(7));
        if (which == "endtoend") return run_end_to_end_suite(pick(100), seed.value_or(8));
        if (which == "lambda") return run_lambda_suite(pick(200), seed.value_or(9));
        throw std::invalid_argument("unknown suite \"" + which + "\"");
    };
    std::vector<SuiteReport> reports;
    if (name == "all") {
        for (const auto& which : suite_names()) reports.push_back(one(which));
    } else {
        reports.push_back(one(name));
    }
    return reports;
}

}  // namespace pvar
