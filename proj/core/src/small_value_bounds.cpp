#include "pvar/small_value_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pvar/rng.hpp"

namespace pvar {

namespace {

constexpr double kUnitUpperTolerance = 1.0 + 4.0 * std::numeric_limits<double>::epsilon();

struct SlackTracker {
    double min_slack = std::numeric_limits<double>::infinity();
    double max_slack = -std::numeric_limits<double>::infinity();
    void observe(double slack) {
        min_slack = std::min(min_slack, slack);
        max_slack = std::max(max_slack, slack);
    }
};

bool all_zero(const StepFunction& f) {
    return std::all_of(f.values().begin(), f.values().end(),
                       [](const complexd& v) { return v == complexd(0.0, 0.0); });
}

}  // namespace

InequalityReport check_elementary_inequalities(const PExponent& p, std::uint64_t samples,
                                               std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    const double pv = p.value();
    const double two_pow = std::pow(2.0, pv - 1.0);
    const double coeff = std::max(pv, 2.0) * two_pow;

    InequalityReport report;
    report.p = pv;
    report.seed = seed;
    std::array<SlackTracker, 3> slack;

    auto check1 = [&](double x) {
        double lhs = std::pow(1.0 + x, pv);
        double rhs = 1.0 + pv * two_pow * x;
        slack[0].observe(rhs - lhs);
        if (lhs > rhs && !report.violation)
            report.violation = InequalityViolation{"(1+x)^p <= 1 + p 2^{p-1} x", lhs, rhs,
                                                   {x, 0, 0, 0}};
    };
    auto check2 = [&](double a, double b) {
        double lhs = std::pow(a + b, pv);
        double rhs = pow_abs(a, pv) + coeff * b;
        slack[1].observe(rhs - lhs);
        if (lhs > rhs && !report.violation)
            report.violation =
                InequalityViolation{"(a+b)^p <= a^p + max{p,2} 2^{p-1} b", lhs, rhs, {a, b, 0, 0}};
    };
    auto check3 = [&](complexd u, complexd v) {
        double lhs = abs_pow(u - v, pv);
        double rhs = abs_pow(u, pv) - coeff * std::abs(v);
        slack[2].observe(lhs - rhs);
        if (lhs < rhs && !report.violation)
            report.violation = InequalityViolation{"|u-v|^p >= |u|^p - max{p,2} 2^{p-1} |v|", lhs,
                                                   rhs, {std::abs(u - v), std::abs(v), 0, 0}};
    };

    // Boundary cases first.
    for (double x : {0.0, 1.0}) check1(x);
    for (double a : {0.0, 1.0})
        for (double b : {0.0, 1.0}) check2(a, b);
    const complexd boundary[] = {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0.5, 0.5}};
    for (const auto& v : boundary)
        for (const auto& w : boundary) check3(v + w, v);  // |u-v| = |w| <= 1, |v| <= 1

    Rng rng(seed);
    for (std::uint64_t i = 0; i < samples; ++i) {
        check1(rng.uniform01());
        check2(rng.uniform01(), rng.uniform01());
        // v in the closed unit disk, u = v + w with |w| <= 1.
        double rv = std::sqrt(rng.uniform01());
        double av = rng.uniform(0.0, 6.283185307179586);
        double rw = std::sqrt(rng.uniform01());
        double aw = rng.uniform(0.0, 6.283185307179586);
        complexd v(rv * std::cos(av), rv * std::sin(av));
        complexd w(rw * std::cos(aw), rw * std::sin(aw));
        check3(v + w, v);
    }
    report.samples = samples;
    for (int k = 0; k < 3; ++k) {
        report.min_slack[k] = slack[k].min_slack;
        report.max_slack[k] = slack[k].max_slack;
    }
    report.pass = !report.violation.has_value();
    return report;
}

SmallValueBound eta_for_nonnegative(const StepFunction& f, const PExponent& p, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (f.field() != Field::Real)
        throw std::invalid_argument("eta bound requires a real-valued step function");
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        double v = f.values()[i].real();
        if (!(v >= 0.0 && v <= kUnitUpperTolerance))
            throw std::invalid_argument("values outside [0,1] at index " + std::to_string(i));
    }

    SmallValueBound bound;
    bound.epsilon = epsilon;
    bound.scale = 1.0;
    if (all_zero(f)) {
        bound.delta = 1.0;
        bound.witness.indices = {0, f.last_index()};
        bound.witness.attained = 0.0;
        return bound;
    }

    // The exact DP witness has zero slack, so it is within epsilon^p / 2 of
    // the supremum as the construction requires.
    auto [var, witness] = total_var_p(f, p);
    (void)var;
    const double n = static_cast<double>(witness.indices.size());
    const double pv = p.value();
    const double eta =
        std::min(1.0, std::pow(epsilon, pv) / (n * (pv + 2.0) * std::pow(2.0, pv + 1.0)));
    bound.delta = eta;
    bound.witness = std::move(witness);
    bound.component_etas = {eta, 1.0, 1.0, 1.0};
    return bound;
}

std::array<StepFunction, 4> nonneg_decomposition(const StepFunction& f0) {
    const std::size_t count = f0.values().size();
    std::array<std::vector<complexd>, 4> parts;
    for (auto& part : parts) part.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        double u = f0.values()[i].real();
        double v = f0.values()[i].imag();
        parts[0][i] = std::max(u, 0.0);
        parts[1][i] = std::max(-u, 0.0);
        parts[2][i] = std::max(v, 0.0);
        parts[3][i] = std::max(-v, 0.0);
    }
    const auto& bp = f0.breakpoints();
    return {StepFunction(bp, std::move(parts[0]), Field::Real),
            StepFunction(bp, std::move(parts[1]), Field::Real),
            StepFunction(bp, std::move(parts[2]), Field::Real),
            StepFunction(bp, std::move(parts[3]), Field::Real)};
}

SmallValueBound delta_for_function(const StepFunction& f, const PExponent& p, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");

    SmallValueBound bound;
    bound.epsilon = epsilon;
    if (all_zero(f)) {
        bound.delta = 1.0;
        bound.scale = 0.0;
        bound.witness.indices = {0, f.last_index()};
        return bound;
    }

    const double m_scale = sup_norm(f);
    bound.scale = m_scale;
    StepFunction f0 = scale(f, 1.0 / m_scale);
    auto parts = nonneg_decomposition(f0);

    double min_eta = std::numeric_limits<double>::infinity();
    const double component_target = epsilon / (4.0 * m_scale);
    for (int l = 0; l < 4; ++l) {
        SmallValueBound part_bound = eta_for_nonnegative(parts[l], p, component_target);
        bound.component_etas[l] = part_bound.delta;
        if (part_bound.delta < min_eta) {
            min_eta = part_bound.delta;
            bound.witness = std::move(part_bound.witness);
        }
    }
    bound.delta = m_scale * min_eta;
    return bound;
}

SmallValueReport verify_small_value_sum(const StepFunction& f, const PExponent& p, double delta,
                                        double epsilon, VerifyMode mode, std::uint64_t seed,
                                        std::uint64_t sample_count) {
    SmallValueReport report;
    report.mode = mode;
    report.threshold = std::pow(epsilon, p.value());

    // Indices whose value can appear in a small-value selection.
    std::vector<std::size_t> small;
    std::vector<complexd> small_values;
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        if (std::abs(f.values()[i]) < delta) {
            small.push_back(i);
            small_values.push_back(f.values()[i]);
        }
    }
    report.small_index_count = small.size();

    auto [dp_max, dp_selection] = max_selection_var_p_witness(small_values, p);
    report.max_attained = dp_max;
    for (std::size_t local : dp_selection) report.worst_selection.push_back(small[local]);

    const double pv = p.value();
    const std::size_t mask_bits = std::min<std::size_t>(small_values.size(), 64);
    auto selection_sum = [&](std::uint64_t mask) {
        double sum = 0.0;
        bool have_prev = false;
        complexd prev;
        for (std::size_t b = 0; b < mask_bits; ++b) {
            if (mask & (std::uint64_t{1} << b)) {
                if (have_prev) sum += abs_pow(small_values[b] - prev, pv);
                prev = small_values[b];
                have_prev = true;
            }
        }
        return sum;
    };

    if (mode == VerifyMode::Exhaustive) {
        if (small.size() > 20)
            throw std::invalid_argument("exhaustive verification refuses " +
                                        std::to_string(small.size()) +
                                        " small indices (limit 20, i.e. 2^20 subsets)");
        double best = 0.0;
        const std::uint64_t limit = std::uint64_t{1} << small.size();
        for (std::uint64_t mask = 0; mask < limit; ++mask)
            best = std::max(best, selection_sum(mask));
        report.cross_check_max = best;
        // Enumeration and the DP compute the same maximum; disagreement
        // beyond summation-order noise means a bug in one of them.
        report.cross_check_ok =
            std::abs(best - dp_max) <= 1e-12 * std::max(1.0, std::max(best, dp_max));
        report.max_attained = std::max(report.max_attained, best);
    } else {
        report.seed = seed;
        Rng rng(seed);
        double best = 0.0;
        for (std::uint64_t s = 0; s < sample_count; ++s) {
            std::uint64_t mask = rng.next();
            if (mask_bits < 64) mask &= (std::uint64_t{1} << mask_bits) - 1;
            best = std::max(best, selection_sum(mask));
        }
        report.cross_check_max = best;
        report.cross_check_ok = best <= dp_max * (1.0 + 1e-12) + 1e-300;
    }

    report.pass = report.max_attained < report.threshold && report.cross_check_ok;
    report.conservatism = report.threshold > 0.0 ? report.max_attained / report.threshold : 0.0;
    return report;
}

}  // namespace pvar
