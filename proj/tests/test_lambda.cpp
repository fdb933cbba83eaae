#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "pvar/lambda_variation.hpp"
#include "pvar/random_instances.hpp"

using namespace pvar;
using doctest::Approx;

TEST_CASE("lambda sequences") {
    auto harmonic = LambdaSequence::harmonic();
    CHECK(harmonic(1) == 1.0);
    CHECK(harmonic(7) == 7.0);
    auto flat = LambdaSequence::constant();
    CHECK(flat(1) == 1.0);
    CHECK(flat(100) == 1.0);

    auto explicit_seq =
        LambdaSequence::explicit_prefix({0.5, 2.0, 4.0}, LambdaSequence::Tail::Harmonic);
    CHECK(explicit_seq(1) == 0.5);
    CHECK(explicit_seq(3) == 4.0);
    CHECK(explicit_seq(4) == 4.0);  // max(prefix.back(), 4)
    CHECK(explicit_seq(9) == 9.0);
    auto flat_tail =
        LambdaSequence::explicit_prefix({0.5, 2.0}, LambdaSequence::Tail::Constant);
    CHECK(flat_tail(50) == 2.0);

    CHECK_THROWS_AS(LambdaSequence::explicit_prefix({}, LambdaSequence::Tail::Harmonic),
                    std::invalid_argument);
    CHECK_THROWS_AS(LambdaSequence::explicit_prefix({2.0, 1.0}, LambdaSequence::Tail::Harmonic),
                    std::invalid_argument);
    CHECK_THROWS_AS(LambdaSequence::explicit_prefix({0.0}, LambdaSequence::Tail::Harmonic),
                    std::invalid_argument);
    CHECK_THROWS_AS(harmonic(0), std::invalid_argument);
}

TEST_CASE("lambda variation: frozen cases") {
    PExponent one(1.0), two(2.0);
    auto harmonic = LambdaSequence::harmonic();

    auto constant = lambda_var_p(constant_step_function(3.0), harmonic, one);
    CHECK(constant.value == 0.0);
    CHECK(constant.family.intervals.empty());
    CHECK(constant.exact);

    // thirds: two unit increments against lambda = 1, 2
    StepFunction thirds =
        make_step_function({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {0.0, 1.0, 0.0, 0.0});
    auto tv = lambda_var_p(thirds, harmonic, one);
    CHECK(tv.value == Approx(1.5));
    CHECK(tv.family.intervals.size() == 2);
    CHECK(tv.exact);
    CHECK(lambda_bv_norm(thirds, harmonic, one).value == Approx(2.5));

    // single jump at p = 2: one interval across it
    StepFunction jump = make_step_function({0.0, 1.0}, {0.0, 1.0});
    CHECK(lambda_var_p(jump, harmonic, two).value == Approx(1.0));
    CHECK(lambda_bv_norm(jump, harmonic, two).value == Approx(2.0));
}

TEST_CASE("constant lambda at p = 1 recovers the total variation") {
    Rng rng(19);
    PExponent one(1.0);
    for (int i = 0; i < 60; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 9;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        StepFunction f = random_step_function(rng, spec);
        auto lv = lambda_var_p(f, LambdaSequence::constant(), one);
        CHECK(lv.exact);
        CHECK(lv.value == Approx(total_var_p(f, one).first).epsilon(1e-12));
    }
}

TEST_CASE("family value uses the sorted pairing") {
    auto harmonic = LambdaSequence::harmonic();
    CHECK(family_value({1.0, 4.0, 2.0}, harmonic) == Approx(4.0 + 2.0 / 2 + 1.0 / 3));

    // no permutation beats it (rearrangement inequality)
    Rng rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t count = 1 + rng.below(6);
        std::vector<double> incs(count);
        for (auto& x : incs) x = rng.uniform(0.0, 2.0);
        double sorted_value = family_value(incs, harmonic);
        std::vector<std::size_t> perm(count);
        for (std::size_t j = 0; j < count; ++j) perm[j] = j;
        do {
            double v = 0.0;
            for (std::size_t j = 0; j < count; ++j) v += incs[perm[j]] / harmonic(j + 1);
            CHECK(v <= sorted_value * (1.0 + 1e-12) + 1e-15);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

namespace {

// Independent oracle: enumerate every subset of the candidate interval pairs,
// keep the pairwise-compatible ones, and evaluate each family directly.
double subset_enumeration_lambda_var(const StepFunction& f, const LambdaSequence& lambda,
                                     double p) {
    const auto& v = f.values();
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j)
            if (v[j] != v[i]) candidates.emplace_back(i, j);
    REQUIRE(candidates.size() <= 20);

    auto compatible = [](const std::pair<std::size_t, std::size_t>& a,
                         const std::pair<std::size_t, std::size_t>& b) {
        return a.second <= b.first || b.second <= a.first;
    };
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << candidates.size()); ++mask) {
        std::vector<std::pair<std::size_t, std::size_t>> family;
        bool ok = true;
        for (std::size_t b = 0; ok && b < candidates.size(); ++b) {
            if (!(mask & (std::uint64_t{1} << b))) continue;
            for (const auto& member : family) ok = ok && compatible(candidates[b], member);
            if (ok) family.push_back(candidates[b]);
        }
        if (!ok) continue;
        std::vector<double> incs;
        for (auto [i, j] : family) incs.push_back(pow_abs(std::abs(v[j] - v[i]), p));
        best = std::max(best, family_value(std::move(incs), lambda));
    }
    return best;
}

}  // namespace

TEST_CASE("exact search matches subset enumeration on tiny grids") {
    Rng rng(71);
    for (int i = 0; i < 40; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 4;  // keeps the candidate pair count enumerable
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        StepFunction f = random_step_function(rng, spec);
        PExponent p(1.0 + (i % 4) * 0.5);
        auto lambda = (i % 2 == 0) ? LambdaSequence::harmonic()
                                   : LambdaSequence::explicit_prefix(
                                         {0.5, 1.0, 1.0, 3.0}, LambdaSequence::Tail::Harmonic);
        auto exact = lambda_var_p(f, lambda, p);
        double oracle = subset_enumeration_lambda_var(f, lambda, p.value());
        CHECK(exact.value == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("greedy lower bound never exceeds the exact value") {
    Rng rng(53);
    for (int i = 0; i < 40; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 8;
        spec.field = Field::Real;
        StepFunction f = random_step_function(rng, spec);
        PExponent p(rng.uniform(1.0, 3.0));
        auto lambda = (i % 2 == 0) ? LambdaSequence::harmonic() : LambdaSequence::constant();
        auto exact = lambda_var_p(f, lambda, p);
        auto lower = lambda_var_p_lower_bound(f, lambda, p);
        CHECK(!lower.exact);
        CHECK(lower.value <= exact.value * (1.0 + 1e-12) + 1e-15);
        CHECK(lower.value >= 0.0);
    }

    // large grids fall back to the certified lower bound
    Rng big_rng(54);
    auto grid = random_grid(big_rng, 20);
    std::vector<complexd> values(grid.size());
    for (auto& v : values) v = complexd(big_rng.uniform(-1.0, 1.0), 0.0);
    StepFunction big(grid, values, Field::Real);
    auto res = lambda_var_p(big, LambdaSequence::harmonic(), PExponent(1.0));
    CHECK(!res.exact);
    CHECK(res.value > 0.0);
}

TEST_CASE("lambda variation rejects max_intervals = 0") {
    CHECK_THROWS_AS(
        lambda_var_p(constant_step_function(1.0), LambdaSequence::harmonic(), PExponent(1.0), 0),
        std::invalid_argument);
}

TEST_CASE("lambda norm algebra axioms on exact grids") {
    Rng rng(67);
    auto harmonic = LambdaSequence::harmonic();
    for (int i = 0; i < 30; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 6;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        PExponent p(1.0 + (i % 3) * 0.5);
        StepFunction f = random_step_function(rng, spec);
        StepFunction g = random_step_function(rng, spec);
        auto nf = lambda_bv_norm(f, harmonic, p);
        auto ng = lambda_bv_norm(g, harmonic, p);
        auto nfg = lambda_bv_norm(pointwise_combine(f, g, PointwiseOp::Multiply), harmonic, p);
        CHECK(nfg.value <= nf.value * ng.value * (1.0 + 1e-9));
        CHECK(lambda_bv_norm(conjugate(f), harmonic, p).value == nf.value);
        CHECK(sup_norm(f) <= nf.value);
    }
}

TEST_CASE("lambda inverse closedness") {
    PExponent one(1.0);
    auto harmonic = LambdaSequence::harmonic();

    auto two_report = lambda_inverse_check(constant_step_function(2.0), harmonic, one);
    CHECK(two_report.pass);
    CHECK(two_report.inverse_norm == Approx(0.5));
    CHECK(two_report.bound == Approx(0.5));

    StepFunction f = make_step_function({0.0, 0.5, 1.0}, {1.0, 2.0, 2.0});
    auto report = lambda_inverse_check(f, harmonic, one);
    CHECK(report.pass);
    CHECK(report.inverse_norm == Approx(1.5));
    CHECK(report.bound == Approx(3.0));

    CHECK_THROWS_AS(
        lambda_inverse_check(make_step_function({0.0, 1.0}, {0.0, 1.0}), harmonic, one),
        std::invalid_argument);

    Rng rng(61);
    for (int i = 0; i < 40; ++i) {
        RandomFunctionSpec spec;
        spec.max_pieces = 8;
        spec.field = (i % 2 == 0) ? Field::Real : Field::Complex;
        spec.min_abs = 0.1;
        spec.max_abs = 1.3;
        StepFunction g = random_step_function(rng, spec);
        CHECK(lambda_inverse_check(g, harmonic, PExponent(1.0 + (i % 3) * 0.5)).pass);
    }
}

TEST_CASE("conjecture probe") {
    PExponent one(1.0);
    auto harmonic = LambdaSequence::harmonic();

    SUBCASE("nondegenerate pair: identity lift, zero distances, factorization runs") {
        StepFunction F = make_step_function({0.0, 0.5, 1.0}, {1.0, 2.0, 2.0});
        StepFunction G = make_step_function({0.0, 0.5, 1.0}, {2.0, 1.0, 1.0});
        auto report = conjecture_probe(F, G, harmonic, one, 0.5, 7);
        CHECK(report.lift_identity);
        CHECK(report.dist_F_lambda == 0.0);
        CHECK(report.dist_G_lambda == 0.0);
        CHECK(report.under_epsilon);
        CHECK(report.factor_ran);
        CHECK(report.factor_converged);
        CHECK(report.factor_claims_ok);
        CHECK(!report.note.empty());
    }

    SUBCASE("degenerate thirds pair reports measured distances") {
        StepFunction F = make_step_function({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {1.0, 0.0, 1.0, 1.0});
        auto report = conjecture_probe(F, F, harmonic, one, 0.5, 11);
        CHECK(!report.lift_identity);
        CHECK(report.dist_F_lambda > 0.0);
        CHECK(report.distances_exact);
        CHECK(report.factor_ran);
        CHECK(report.factor_converged);
    }
}
