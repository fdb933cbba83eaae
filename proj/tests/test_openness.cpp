#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "pvar/openness.hpp"
#include "pvar/random_instances.hpp"

using namespace pvar;
using doctest::Approx;

TEST_CASE("openness config constants") {
    PExponent two(2.0);
    StepFunction one_fn = constant_step_function(1.0);

    auto config = make_openness_config(one_fn, one_fn, two, 0.5);
    CHECK(config.delta == 1.0);
    CHECK(config.K == 2.0);
    CHECK(config.C == 1.0);
    CHECK(config.eta == Approx(1.0 / 16384.0).epsilon(1e-15));
    CHECK(!config.epsilon_clamped);

    auto lopsided = make_openness_config(one_fn, constant_step_function(0.0), two, 0.5);
    CHECK(lopsided.delta == 0.5);

    StepFunction with_zero = make_step_function({0.0, 0.5, 1.0}, {1.0, 0.0, 1.0});
    CHECK_THROWS_AS(make_openness_config(with_zero, with_zero, two, 0.5),
                    std::invalid_argument);

    auto clamped = make_openness_config(one_fn, one_fn, two, 2.0);
    CHECK(clamped.epsilon_clamped);
    CHECK(clamped.epsilon == 0.99);
    CHECK(clamped.requested_epsilon == 2.0);
}

TEST_CASE("iteration step: constants by hand") {
    StepFunction one_fn = constant_step_function(1.0);
    StepFunction h0 = constant_step_function(0.01);
    IterationState state = make_iteration_state(one_fn, one_fn, h0);

    IterationState next = iteration_step(state);
    CHECK(next.n == 1);
    CHECK(next.F(0.5) == complexd(1.005, 0.0));
    CHECK(next.G(0.5) == complexd(1.005, 0.0));
    CHECK(next.h(0.5) == complexd(-0.000025, 0.0));
    // product identity F1 G1 + h1 = F0 G0 + h0 = 1.01 (one rounding of 1.005^2)
    CHECK(std::abs(next.F(0.5) * next.G(0.5) + next.h(0.5) - complexd(1.01, 0.0)) <= 1e-15);
}

TEST_CASE("iteration step: fixed point and errors") {
    StepFunction one_fn = constant_step_function(1.0);
    StepFunction zero = constant_step_function(0.0);
    IterationState state = make_iteration_state(one_fn, one_fn, zero);
    IterationState next = iteration_step(state);
    CHECK(next.n == 1);
    CHECK(next.F == state.F);
    CHECK(next.G == state.G);
    CHECK(next.h == state.h);

    IterationState bad = make_iteration_state(zero, zero, one_fn);
    CHECK_THROWS_AS(iteration_step(bad), std::domain_error);
}

TEST_CASE("iteration step: complex residual after one step") {
    StepFunction F0 = constant_step_function(complexd(0.0, 1.0), Field::Complex);
    StepFunction G0 = constant_step_function(complexd(1.0, 0.0), Field::Complex);
    StepFunction h0 = constant_step_function(0.001);
    PExponent two(2.0);
    auto config = make_openness_config(F0, G0, two, 0.5);

    IterationState state = make_iteration_state(F0, G0, h0);
    IterationState next = iteration_step(state);
    auto report = check_invariants(next, config, F0, G0, h0);
    CHECK(report.claim_i_residual <= 1e-15);
}

TEST_CASE("invariants at n = 0 and n = 1") {
    StepFunction one_fn = constant_step_function(1.0);
    StepFunction h0 = constant_step_function(0.00005);
    PExponent two(2.0);
    auto config = make_openness_config(one_fn, one_fn, two, 0.5);
    REQUIRE(bvp_norm(h0, two) < config.eta);

    IterationState state = make_iteration_state(one_fn, one_fn, h0);
    auto base = check_invariants(state, config, one_fn, one_fn, h0);
    CHECK(base.all_ok());
    CHECK(base.claim_i_residual == 0.0);

    IterationState next = iteration_step(state);
    auto report = check_invariants(next, config, one_fn, one_fn, h0);
    CHECK(report.all_ok());
    // claim (ii): ||F1|| <= K/2 + 1 - 2^{-1} = 1.5; (iii): margin >= 1.5
    CHECK(report.claim_ii_F.bound == Approx(1.5));
    CHECK(report.claim_ii_F.attained == Approx(1.000025));
    CHECK(report.claim_iii.bound == Approx(1.5));
    CHECK(report.claim_iii.attained == Approx(2.00005));
}

TEST_CASE("factor perturbation: zero perturbation") {
    StepFunction one_fn = constant_step_function(1.0);
    StepFunction zero = constant_step_function(0.0);
    FactorOptions options;
    options.epsilon = 0.5;
    auto result = factor_perturbation(one_fn, one_fn, zero, PExponent(2.0), options);
    CHECK(result.converged);
    CHECK(result.steps == 0);
    CHECK(result.f == make_iteration_state(one_fn, one_fn, zero).F);
    CHECK(result.residual == 0.0);
    CHECK(result.guarantees_ok);
}

TEST_CASE("factor perturbation: constants") {
    StepFunction one_fn = constant_step_function(1.0);
    StepFunction h = constant_step_function(1e-5);
    FactorOptions options;
    options.epsilon = 0.5;
    auto result = factor_perturbation(one_fn, one_fn, h, PExponent(2.0), options);
    CHECK(result.converged);
    CHECK(result.guarantees_ok);
    CHECK(result.claims_ok);
    CHECK(result.decay_ok);
    CHECK(result.residual <= 1e-12);
    CHECK(result.dist_F < 0.5);
    CHECK(result.dist_G < 0.5);
    // f g = 1 + 1e-5 everywhere
    StepFunction prod = pointwise_combine(result.f, result.g, PointwiseOp::Multiply);
    for (const auto& v : prod.values()) CHECK(std::abs(v - complexd(1.00001, 0.0)) <= 1e-12);
}

TEST_CASE("factor perturbation: step pair with admissible random h") {
    StepFunction F = make_step_function({0.0, 0.5, 1.0}, {1.0, 2.0, 2.0});
    StepFunction G = make_step_function({0.0, 0.5, 1.0}, {2.0, 1.0, 1.0});
    PExponent two(2.0);
    const double epsilon = 0.5;
    auto config = make_openness_config(F, G, two, epsilon);

    Rng rng(31);
    StepFunction h = random_perturbation(rng, F.breakpoints(), Field::Real, 0.9 * config.eta,
                                         bvp_norm_fn(two));
    FactorOptions options;
    options.epsilon = epsilon;
    auto result = factor_perturbation(F, G, h, two, options);
    CHECK(result.converged);
    CHECK(result.claims_ok);

    StepFunction target =
        pointwise_combine(pointwise_combine(F, G, PointwiseOp::Multiply), h, PointwiseOp::Add);
    StepFunction prod = pointwise_combine(result.f, result.g, PointwiseOp::Multiply);
    auto [rt, rp] = common_refinement(target, prod);
    for (std::size_t i = 0; i < rt.values().size(); ++i)
        CHECK(std::abs(rp.values()[i] - rt.values()[i]) <= 1e-10);
    CHECK(result.dist_F < epsilon);
    CHECK(result.dist_G < epsilon);

    // geometric decay of the perturbation norm along the trace
    for (std::size_t i = 1; i < result.trace.size(); ++i)
        CHECK(result.trace[i].h_norm <= result.trace[i - 1].h_norm / 2.0 + 1e-12);
}

TEST_CASE("iteration step names the vanishing index") {
    StepFunction zero = constant_step_function(0.0);
    StepFunction one_fn = constant_step_function(1.0);
    IterationState bad = make_iteration_state(zero, zero, one_fn);
    try {
        iteration_step(bad);
        FAIL("expected a domain error");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("value index 0") != std::string::npos);
    }
}

TEST_CASE("factor perturbation: non-convergence inside max_iter throws with context") {
    StepFunction one_fn = constant_step_function(1.0);
    StepFunction h = constant_step_function(1e-6);
    FactorOptions options;
    options.epsilon = 0.9;
    options.max_iter = 0;  // forces the non-convergence path
    CHECK_THROWS_AS(factor_perturbation(one_fn, one_fn, h, PExponent(2.0), options),
                    std::runtime_error);
}

TEST_CASE("factor perturbation: inadmissible h") {
    StepFunction one_fn = constant_step_function(1.0);
    StepFunction big = constant_step_function(0.1);
    FactorOptions options;
    options.epsilon = 0.5;
    PExponent two(2.0);
    CHECK_THROWS_AS(factor_perturbation(one_fn, one_fn, big, two, options), RadiusError);
    try {
        factor_perturbation(one_fn, one_fn, big, two, options);
    } catch (const RadiusError& e) {
        CHECK(e.radius() == Approx(0.5 / 8192.0));
        CHECK(e.h_norm() == Approx(0.1));
    }

    // force mode proceeds and reports what happened
    options.force = true;
    auto result = factor_perturbation(one_fn, one_fn, big, two, options);
    CHECK(result.forced);
}

TEST_CASE("factor perturbation: complex perturbation of a real pair") {
    StepFunction F = make_step_function({0.0, 0.5, 1.0}, {1.0, 2.0, 2.0});
    StepFunction G = make_step_function({0.0, 0.5, 1.0}, {2.0, 1.0, 1.0});
    PExponent two(2.0);
    auto config = make_openness_config(F, G, two, 0.5);
    StepFunction h = scale(constant_step_function(complexd(0.6, 0.8), Field::Complex),
                           0.5 * config.eta / bvp_norm(constant_step_function(
                                                           complexd(0.6, 0.8), Field::Complex),
                                                       two));
    FactorOptions options;
    options.epsilon = 0.5;
    auto result = factor_perturbation(F, G, h, two, options);
    CHECK(result.converged);
    CHECK(result.guarantees_ok);
    CHECK(result.f.field() == Field::Complex);
}

TEST_CASE("open ball factorization composes lifting and iteration") {
    PExponent two(2.0);
    const double epsilon = 0.5;

    SUBCASE("degenerate F = 0, G = 1") {
        StepFunction F = constant_step_function(0.0);
        StepFunction G = constant_step_function(1.0);
        const double radius = composed_radius(lift_pair(F, G, two, epsilon / 2.0), two, epsilon);
        const double h0 = 0.5 * radius;
        StepFunction h = constant_step_function(h0);
        auto result = open_ball_factorize(F, G, two, epsilon, h);
        CHECK(result.guarantees_ok);
        CHECK(result.lift.plan.identity);  // margin 1 already nondegenerate
        CHECK(result.dist_F < epsilon);
        // f g = h pointwise
        StepFunction prod =
            pointwise_combine(result.factor.f, result.factor.g, PointwiseOp::Multiply);
        for (const auto& v : prod.values())
            CHECK(std::abs(v - complexd(h0, 0.0)) <= 1e-12);
    }

    SUBCASE("pair with a common zero piece goes through the lifting") {
        StepFunction F = make_step_function({0.0, 0.4, 0.7, 1.0}, {1.0, 0.0, 1.0, 1.0});
        StepFunction G = F;
        LiftResult lift = lift_pair(F, G, two, epsilon / 2.0);
        CHECK(!lift.plan.identity);
        double radius = composed_radius(lift, two, epsilon);
        Rng rng(77);
        StepFunction h = random_perturbation(rng, F.breakpoints(), Field::Real, 0.5 * radius,
                                             bvp_norm_fn(two));
        auto result = open_ball_factorize(F, G, two, epsilon, h);
        CHECK(result.guarantees_ok);
        CHECK(result.dist_F < epsilon);
        CHECK(result.dist_G < epsilon);

        StepFunction target = pointwise_combine(pointwise_combine(F, G, PointwiseOp::Multiply),
                                                h, PointwiseOp::Add);
        StepFunction prod =
            pointwise_combine(result.factor.f, result.factor.g, PointwiseOp::Multiply);
        auto [rt, rp] = common_refinement(target, prod);
        for (std::size_t i = 0; i < rt.values().size(); ++i)
            CHECK(std::abs(rp.values()[i] - rt.values()[i]) <=
                  1e-10 * (1.0 + sup_norm(target)));
    }

    SUBCASE("nondegenerate pair behaves like plain factorization at eps/2") {
        StepFunction F = make_step_function({0.0, 0.5, 1.0}, {1.0, 2.0, 2.0});
        StepFunction G = make_step_function({0.0, 0.5, 1.0}, {2.0, 1.0, 1.0});
        LiftResult lift = lift_pair(F, G, two, epsilon / 2.0);
        CHECK(lift.plan.identity);
        StepFunction h = constant_step_function(1e-9);
        auto composed = open_ball_factorize(F, G, two, epsilon, h);
        FactorOptions options;
        options.epsilon = epsilon / 2.0;
        auto direct = factor_perturbation(F, G, h, two, options);
        CHECK(composed.factor.f == direct.f);
        CHECK(composed.factor.g == direct.g);
    }

    SUBCASE("h outside the composed radius is rejected with the radius") {
        StepFunction F = constant_step_function(0.0);
        StepFunction G = constant_step_function(1.0);
        StepFunction h = constant_step_function(0.3);
        CHECK_THROWS_AS(open_ball_factorize(F, G, two, epsilon, h), RadiusError);
    }
}
