#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "pvar/lifting.hpp"
#include "pvar/random_instances.hpp"

using namespace pvar;
using doctest::Approx;

TEST_CASE("jump set") {
    CHECK(jump_set(constant_step_function(5.0)).empty());
    // interior jump and a jump at the distinguished point 1
    StepFunction f = make_step_function({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
    CHECK(jump_set(f) == std::vector<double>{0.5, 1.0});
    StepFunction g = make_step_function({0.0, 0.5, 1.0}, {0.0, 1.0, 1.0});
    CHECK(jump_set(g) == std::vector<double>{0.5});
}

TEST_CASE("locate small intervals") {
    StepFunction f = make_step_function({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {1.0, 0.0, 1.0, 1.0});

    SUBCASE("margin above eta finds nothing") {
        StepFunction ones = constant_step_function(1.0);
        CHECK(locate_small_intervals(ones, ones, 0.5).empty());
    }

    SUBCASE("single zero run") {
        auto a0 = locate_small_intervals(f, f, 0.5);
        REQUIRE(a0.size() == 1);
        CHECK(a0.intervals[0].a == Approx(1.0 / 3));
        CHECK(a0.intervals[0].b == Approx(2.0 / 3));
        CHECK(a0.intervals[0].first_index == 1);
        CHECK(a0.intervals[0].last_index == 1);
        CHECK(!a0.intervals[0].contains_one);
        CHECK(a0.intervals[0].inf_h == 0.0);
    }

    SUBCASE("two separated zero runs") {
        StepFunction two_dips = make_step_function({0.0, 0.2, 0.4, 0.6, 0.8, 1.0},
                                                   {1.0, 0.0, 1.0, 0.0, 1.0, 1.0});
        auto a0 = locate_small_intervals(two_dips, two_dips, 0.5);
        REQUIRE(a0.size() == 2);
        CHECK(a0.intervals[0].first_index == 1);
        CHECK(a0.intervals[1].first_index == 3);
    }

    SUBCASE("run reaching 1 absorbs the distinguished point") {
        StepFunction tail = make_step_function({0.0, 0.5, 1.0}, {1.0, 0.0, 0.0});
        auto a0 = locate_small_intervals(tail, tail, 0.5);
        REQUIRE(a0.size() == 1);
        CHECK(a0.intervals[0].contains_one);
    }
}

TEST_CASE("local oscillation bound") {
    PExponent two(2.0);

    auto small_const = local_sup_bound_check(constant_step_function(0.2), two, 0.1, 0.9, 0.5);
    CHECK(small_const.applicable);
    CHECK(small_const.pass);
    CHECK(small_const.sup_f == Approx(0.2));

    StepFunction f = make_step_function({0.0, 0.5, 1.0}, {0.0, 1.0, 1.0});
    auto report = local_sup_bound_check(f, two, 0.0, 1.0, 0.5);
    CHECK(report.applicable);
    CHECK(report.sup_f == 1.0);
    CHECK(report.local_var_root == Approx(1.0));
    CHECK(report.bound == Approx(1.5));
    CHECK(report.pass);

    auto vacuous = local_sup_bound_check(constant_step_function(5.0), two, 0.1, 0.9, 0.5);
    CHECK(!vacuous.applicable);
    CHECK(vacuous.pass);

    // holds for every function and window; violations mean an arithmetic bug
    Rng rng(3);
    for (int i = 0; i < 60; ++i) {
        RandomFunctionSpec spec;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        StepFunction g = random_step_function(rng, spec);
        double a = rng.uniform(0.0, 0.5);
        double b = rng.uniform(a + 0.05, 1.0);
        auto r = local_sup_bound_check(g, PExponent(rng.uniform(1.0, 3.0)), a, b,
                                       rng.uniform(0.05, 0.8));
        CHECK(r.pass);
    }
}

TEST_CASE("lift pair: thirds example traced by hand") {
    // F = G with a zero middle third, eps = 0.24, p = 1
    StepFunction F = make_step_function({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {1.0, 0.0, 1.0, 1.0});
    PExponent one(1.0);
    const double epsilon = 0.24;
    auto lift = lift_pair(F, F, one, epsilon);

    REQUIRE(lift.plan.a.size() == 1);
    CHECK(lift.plan.c[0] == Approx(0.01));  // eps/(24 n) with sup|F| = 0 inside
    CHECK(lift.plan.d[0] == Approx(0.01));
    CHECK(lift.F1.values()[1] == complexd(0.02, 0.0));
    CHECK(lift.G1.values()[1] == complexd(0.0, 0.0));
    CHECK(lift.plan.k == 0);
    CHECK(lift.plan.j_eta_0.empty());

    // product preserved exactly here
    auto FG = pointwise_combine(F, F, PointwiseOp::Multiply);
    auto F1G1 = pointwise_combine(lift.F1, lift.G1, PointwiseOp::Multiply);
    auto [a, b] = common_refinement(FG, F1G1);
    CHECK(a.values() == b.values());

    CHECK(joint_margin(lift.F1, lift.G1) == Approx(0.02));
    CHECK(lift.plan.margins[5] == Approx(0.02));  // I6 >= eps/(12 n) = 0.02
    CHECK(lift.plan.dist_F < epsilon);
    CHECK(lift.plan.dist_F == Approx(0.06));  // sup 0.02 + Var_1 0.04
    CHECK(lift.plan.dist_G < epsilon);

    auto audit = audit_plan(lift.plan, F, F, lift.F1, lift.G1, one, epsilon);
    CHECK(audit.pass);
    CHECK(audit.margins[5] == Approx(0.02));
}

TEST_CASE("lift pair: identity on nondegenerate input") {
    PExponent two(2.0);
    StepFunction F = constant_step_function(0.0);
    StepFunction G = constant_step_function(1.0);
    auto lift = lift_pair(F, G, two, 0.24);
    CHECK(lift.plan.identity);
    CHECK(lift.F1 == F);
    CHECK(lift.G1 == G);
    CHECK(lift.plan.dist_F == 0.0);

    auto audit = audit_plan(lift.plan, F, G, lift.F1, lift.G1, two, 0.24);
    CHECK(audit.pass);
}

TEST_CASE("lift pair: both identically zero") {
    PExponent two(2.0);
    StepFunction zero = constant_step_function(0.0);
    auto lift = lift_pair(zero, zero, two, 0.4);
    CHECK(lift.plan.zero_pair);
    CHECK(sup_norm(pointwise_combine(lift.F1, lift.G1, PointwiseOp::Multiply)) == 0.0);
    CHECK(joint_margin(lift.F1, lift.G1) == Approx(0.2));
    CHECK(bvp_norm(pointwise_combine(lift.F1, zero, PointwiseOp::Subtract), two) < 0.4);
    auto audit = audit_plan(lift.plan, zero, zero, lift.F1, lift.G1, two, 0.4);
    CHECK(audit.pass);
}

TEST_CASE("lift pair: zero at the distinguished point only") {
    // h(1) = 0 with the last piece above eta: the isolated-zero repair at 1
    PExponent one(1.0);
    StepFunction F = make_step_function({0.0, 0.5, 1.0}, {1.0, 1.0, 0.0});
    StepFunction G = make_step_function({0.0, 0.5, 1.0}, {1.0, 1.0, 0.0});
    const double epsilon = 0.24;
    auto lift = lift_pair(F, G, one, epsilon);
    CHECK(!lift.plan.identity);
    REQUIRE(lift.plan.k == 1);
    CHECK(lift.plan.j_eta_0 == std::vector<double>{1.0});
    CHECK(lift.F1.values().back() == complexd(epsilon / 24.0, 0.0));
    CHECK(lift.G1.values().back() == complexd(0.0, 0.0));
    CHECK(joint_margin(lift.F1, lift.G1) > 0.0);
    CHECK(lift.plan.margins[3] == Approx(epsilon / 24.0));  // I4

    auto audit = audit_plan(lift.plan, F, G, lift.F1, lift.G1, one, epsilon);
    CHECK(audit.pass);
}

TEST_CASE("lift pair: random degenerate pairs satisfy the theorem") {
    Rng rng(41);
    const double eps_grid[] = {0.1, 0.5};
    const double p_grid[] = {1.0, 1.5, 2.0, 3.0};
    for (int i = 0; i < 80; ++i) {
        Field field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(p_grid[i % 4]);
        double epsilon = eps_grid[i % 2];
        auto [F, G] = random_degenerate_pair(rng, 8, field);
        REQUIRE(joint_margin(F, G) == 0.0);

        auto lift = lift_pair(F, G, p, epsilon);
        CHECK(joint_margin(lift.F1, lift.G1) > 0.0);
        CHECK(lift.plan.dist_F < epsilon);
        CHECK(lift.plan.dist_G < epsilon);

        auto FG = pointwise_combine(F, G, PointwiseOp::Multiply);
        auto F1G1 = pointwise_combine(lift.F1, lift.G1, PointwiseOp::Multiply);
        auto [a, b] = common_refinement(FG, F1G1);
        for (std::size_t j = 0; j < a.values().size(); ++j)
            CHECK(std::abs(a.values()[j] - b.values()[j]) <=
                  1e-14 * (1.0 + std::abs(a.values()[j])));

        auto audit = audit_plan(lift.plan, F, G, lift.F1, lift.G1, p, epsilon);
        CHECK(audit.pass);
        if (!audit.pass)
            for (const auto& v : audit.violations) MESSAGE(v);
    }
}
