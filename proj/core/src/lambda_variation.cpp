#include "pvar/lambda_variation.hpp"

#include <algorithm>
#include <cmath>

#include "pvar/rng.hpp"

namespace pvar {

LambdaSequence LambdaSequence::explicit_prefix(std::vector<double> prefix, Tail tail) {
    if (prefix.empty()) throw std::invalid_argument("explicit lambda needs a nonempty prefix");
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (!(prefix[i] > 0.0) || !std::isfinite(prefix[i]))
            throw std::invalid_argument("lambda prefix must be positive at index " +
                                        std::to_string(i));
        if (i > 0 && prefix[i] < prefix[i - 1])
            throw std::invalid_argument("lambda prefix must be nondecreasing at index " +
                                        std::to_string(i));
    }
    LambdaSequence out(Kind::Explicit);
    out.tail_ = tail;
    out.prefix_ = std::move(prefix);
    return out;
}

double LambdaSequence::operator()(std::size_t i) const {
    if (i == 0) throw std::invalid_argument("lambda indices are 1-based");
    switch (kind_) {
        case Kind::Harmonic: return static_cast<double>(i);
        case Kind::Constant: return 1.0;
        case Kind::Explicit:
            if (i <= prefix_.size()) return prefix_[i - 1];
            if (tail_ == Tail::Constant) return prefix_.back();
            return std::max(prefix_.back(), static_cast<double>(i));
    }
    return 1.0;
}

double family_value(std::vector<double> powered_increments, const LambdaSequence& lambda) {
    std::sort(powered_increments.begin(), powered_increments.end(), std::greater<>());
    double sum = 0.0;
    for (std::size_t r = 0; r < powered_increments.size(); ++r)
        sum += powered_increments[r] / lambda(r + 1);
    return sum;
}

namespace {

constexpr std::size_t kExactValueLimit = 13;  // grids with m <= 12

struct SearchState {
    const std::vector<complexd>* values;
    double p;
    const LambdaSequence* lambda;
    std::size_t max_intervals;

    double best_value = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> best_pairs{};

    std::vector<double> incs{};  // powered increments of the family under build
    std::vector<std::pair<std::size_t, std::size_t>> pairs{};

    void consider() {
        double v = family_value(incs, *lambda);
        if (v > best_value) {
            best_value = v;
            best_pairs = pairs;
        }
    }

    // Families are position-sorted pair sequences i_1 <= j_1 <= i_2 <= ...;
    // zero increments never help (they only push later increments to larger
    // weights), so only distinct-value pairs are explored.
    void expand(std::size_t from) {
        consider();
        if (incs.size() >= max_intervals) return;
        const auto& v = *values;
        for (std::size_t i = from; i + 1 < v.size(); ++i) {
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                double inc = std::abs(v[j] - v[i]);
                if (inc == 0.0) continue;
                incs.push_back(pow_abs(inc, p));
                pairs.emplace_back(i, j);
                expand(j);
                incs.pop_back();
                pairs.pop_back();
            }
        }
    }
};

IntervalFamily family_from_pairs(const StepFunction& f,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    IntervalFamily family;
    for (auto [i, j] : pairs) {
        family.intervals.push_back({f.breakpoints()[i], f.breakpoints()[j], i, j});
        family.increments.push_back(std::abs(f.values()[j] - f.values()[i]));
    }
    return family;
}

// Greedy insertion with single-interval exchange; the returned family's value
// is a certified lower bound for the supremum.
std::vector<std::pair<std::size_t, std::size_t>> greedy_family(const std::vector<complexd>& v,
                                                               double p,
                                                               const LambdaSequence& lambda,
                                                               std::size_t max_intervals) {
    std::vector<std::pair<std::size_t, std::size_t>> family;  // position-sorted
    auto value_of = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
        std::vector<double> incs;
        incs.reserve(pairs.size());
        for (auto [i, j] : pairs) incs.push_back(abs_pow(v[j] - v[i], p));
        return family_value(std::move(incs), lambda);
    };
    auto fits = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                    std::size_t i, std::size_t j, std::size_t skip) {
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            if (q == skip) continue;
            if (!(j <= pairs[q].first || pairs[q].second <= i)) return false;
        }
        return true;
    };

    double current = 0.0;
    const std::size_t npos = static_cast<std::size_t>(-1);
    for (;;) {
        double best_gain = 0.0;
        std::vector<std::pair<std::size_t, std::size_t>> best_pairs;
        // insertions
        if (family.size() < max_intervals) {
            for (std::size_t i = 0; i + 1 < v.size(); ++i)
                for (std::size_t j = i + 1; j < v.size(); ++j) {
                    if (v[j] == v[i] || !fits(family, i, j, npos)) continue;
                    auto candidate = family;
                    candidate.emplace_back(i, j);
                    double val = value_of(candidate);
                    if (val - current > best_gain) {
                        best_gain = val - current;
                        best_pairs = std::move(candidate);
                    }
                }
        }
        // exchanges
        for (std::size_t q = 0; q < family.size(); ++q)
            for (std::size_t i = 0; i + 1 < v.size(); ++i)
                for (std::size_t j = i + 1; j < v.size(); ++j) {
                    if (v[j] == v[i] || !fits(family, i, j, q)) continue;
                    auto candidate = family;
                    candidate[q] = {i, j};
                    double val = value_of(candidate);
                    if (val - current > best_gain) {
                        best_gain = val - current;
                        best_pairs = std::move(candidate);
                    }
                }
        if (best_gain <= 0.0) break;
        family = std::move(best_pairs);
        std::sort(family.begin(), family.end());
        current = value_of(family);
    }
    return family;
}

}  // namespace

LambdaVarResult lambda_var_p(const StepFunction& f, const LambdaSequence& lambda,
                             const PExponent& p, std::size_t max_intervals) {
    if (max_intervals < 1) throw std::invalid_argument("max_intervals must be >= 1");
    LambdaVarResult result;
    const auto& v = f.values();

    if (v.size() <= kExactValueLimit) {
        SearchState search{
            .values = &v, .p = p.value(), .lambda = &lambda, .max_intervals = max_intervals};
        search.expand(0);
        result.value = search.best_value;
        result.family = family_from_pairs(f, search.best_pairs);
        result.exact = true;
        return result;
    }

    return lambda_var_p_lower_bound(f, lambda, p, max_intervals);
}

LambdaVarResult lambda_var_p_lower_bound(const StepFunction& f, const LambdaSequence& lambda,
                                         const PExponent& p, std::size_t max_intervals) {
    if (max_intervals < 1) throw std::invalid_argument("max_intervals must be >= 1");
    const auto& v = f.values();
    auto pairs = greedy_family(v, p.value(), lambda, max_intervals);
    std::vector<double> incs;
    for (auto [i, j] : pairs) incs.push_back(abs_pow(v[j] - v[i], p.value()));
    LambdaVarResult result;
    result.value = family_value(std::move(incs), lambda);
    result.family = family_from_pairs(f, pairs);
    result.exact = false;
    return result;
}

LambdaNorm lambda_bv_norm(const StepFunction& f, const LambdaSequence& lambda,
                          const PExponent& p) {
    auto var = lambda_var_p(f, lambda, p);
    return {sup_norm(f) + std::pow(var.value, 1.0 / p.value()), var.exact};
}

NormFn lambda_norm_fn(const LambdaSequence& lambda, const PExponent& p) {
    return [lambda, p](const StepFunction& f) { return lambda_bv_norm(f, lambda, p).value; };
}

LambdaInverseReport lambda_inverse_check(const StepFunction& f, const LambdaSequence& lambda,
                                         const PExponent& p) {
    LambdaInverseReport report;
    report.margin = inf_modulus(f);
    if (!(report.margin > 0.0))
        throw std::invalid_argument("not bounded away from zero: inf|f| = 0");

    const double inv_margin_sq = 1.0 / (report.margin * report.margin);

    std::vector<complexd> inv_values(f.values().size());
    for (std::size_t i = 0; i < inv_values.size(); ++i) inv_values[i] = 1.0 / f.values()[i];
    StepFunction inv(f.breakpoints(), inv_values, f.field());

    auto lhs = lambda_bv_norm(inv, lambda, p);
    auto rhs = lambda_bv_norm(f, lambda, p);
    report.inverse_norm = lhs.value;
    report.bound = inv_margin_sq * rhs.value;
    report.norms_exact = lhs.exact && rhs.exact;

    // Per-interval inequality |(1/f)(I)| <= margin^{-2} |f(I)|, all grid pairs.
    for (std::size_t i = 0; i + 1 < f.values().size(); ++i) {
        for (std::size_t j = i + 1; j < f.values().size(); ++j) {
            double left = std::abs(inv_values[j] - inv_values[i]);
            double right = inv_margin_sq * std::abs(f.values()[j] - f.values()[i]);
            double excess = left - right * (1.0 + 1e-12);
            report.worst_increment_excess = std::max(report.worst_increment_excess, excess);
        }
    }
    report.increments_ok = report.worst_increment_excess <= 0.0;
    report.pass = report.increments_ok && report.inverse_norm <= report.bound * (1.0 + 1e-10);
    return report;
}

ProbeReport conjecture_probe(const StepFunction& F, const StepFunction& G,
                             const LambdaSequence& lambda, const PExponent& p, double epsilon,
                             std::uint64_t seed) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    ProbeReport report;
    report.lambda_kind = lambda.kind() == LambdaSequence::Kind::Harmonic    ? "harmonic"
                         : lambda.kind() == LambdaSequence::Kind::Constant ? "constant"
                                                                            : "explicit";
    report.p_value = p.value();
    report.epsilon = epsilon;
    report.seed = seed;
    report.note =
        "evidence only: openness of multiplication in the Shiba-Waterman algebra is an open "
        "conjecture; no theorem is claimed";

    LiftResult lift = lift_pair(F, G, p, epsilon);
    report.lift_identity = lift.plan.identity;
    report.lift_zero_pair = lift.plan.zero_pair;

    NormFn lnorm = lambda_norm_fn(lambda, p);
    auto dist = [&](const StepFunction& a, const StepFunction& b) {
        return lambda_bv_norm(pointwise_combine(a, b, PointwiseOp::Subtract), lambda, p);
    };
    auto dF = dist(F, lift.F1);
    auto dG = dist(G, lift.G1);
    report.dist_F_lambda = dF.value;
    report.dist_G_lambda = dG.value;
    report.distances_exact = dF.exact && dG.exact;
    report.under_epsilon = dF.value < epsilon && dG.value < epsilon;

    // Factorize a seeded admissible perturbation at the lifted pair with the
    // Shiba-Waterman norm driving every constant and claim.
    OpennessConfig config = make_openness_config(lift.F1, lift.G1, p, epsilon / 2.0, lnorm);
    report.lambda_radius = config.eta;

    Rng rng(seed);
    std::vector<complexd> h_vals(lift.F1.values().size());
    for (auto& value : h_vals) value = complexd(rng.uniform(-1.0, 1.0), 0.0);
    StepFunction h_raw(lift.F1.breakpoints(), std::move(h_vals), Field::Real);
    double raw_norm = lnorm(h_raw);
    if (raw_norm > 0.0) {
        StepFunction h = scale(h_raw, 0.5 * config.eta / raw_norm);
        FactorOptions options;
        options.epsilon = epsilon / 2.0;
        options.norm = lnorm;
        FactorResult factor = factor_perturbation(lift.F1, lift.G1, h, p, options);
        report.factor_ran = true;
        report.factor_converged = factor.converged;
        report.factor_claims_ok = factor.claims_ok;
        report.factor_steps = factor.steps;
        report.factor_dist_F = factor.dist_F;
        report.factor_dist_G = factor.dist_G;
        report.factor_residual = factor.residual;
    }
    return report;
}

}  // namespace pvar
