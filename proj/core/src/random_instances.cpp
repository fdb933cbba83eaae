#include "pvar/random_instances.hpp"

#include <algorithm>
#include <cmath>

namespace pvar {

std::vector<double> random_grid(Rng& rng, std::size_t pieces) {
    std::vector<double> grid{0.0, 1.0};
    while (grid.size() < pieces + 1) {
        double t = rng.uniform(0.05, 0.95);
        grid.push_back(t);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }
    return grid;
}

namespace {

complexd random_value(Rng& rng, Field field, double min_abs, double max_abs) {
    const double r = rng.uniform(min_abs, max_abs);
    if (field == Field::Real) return complexd(rng.coin() ? r : -r, 0.0);
    const double phi = rng.uniform(0.0, 6.283185307179586);
    return complexd(r * std::cos(phi), r * std::sin(phi));
}

}  // namespace

StepFunction random_step_function(Rng& rng, const RandomFunctionSpec& spec) {
    const std::size_t pieces =
        spec.min_pieces + rng.below(spec.max_pieces - spec.min_pieces + 1);
    auto grid = random_grid(rng, pieces);
    std::vector<complexd> values(grid.size());
    for (auto& v : values) v = random_value(rng, spec.field, spec.min_abs, spec.max_abs);
    return StepFunction(std::move(grid), std::move(values), spec.field);
}

StepFunction random_nonnegative_unit(Rng& rng, std::size_t max_pieces) {
    const std::size_t pieces = 1 + rng.below(max_pieces);
    auto grid = random_grid(rng, pieces);
    std::vector<complexd> values(grid.size());
    for (auto& v : values) v = complexd(rng.uniform01(), 0.0);
    return StepFunction(std::move(grid), std::move(values), Field::Real);
}

namespace {

// Bounded random walk: modulus stays above `floor` and the total 1-variation
// stays near `drift`, keeping the BV_p norm O(1). Wild per-piece values would
// blow up K in the factorization radius eps delta^8 / (128 K^6) and make
// every admissible perturbation vanish below the stopping tolerance.
StepFunction random_walk_function(Rng& rng, std::size_t max_pieces, Field field, double floor,
                                  double drift) {
    const std::size_t pieces = 1 + rng.below(max_pieces);
    auto grid = random_grid(rng, pieces);
    std::vector<complexd> values(grid.size());
    complexd current = random_value(rng, field, floor + drift + 0.1, floor + drift + 0.3);
    values[0] = current;
    const double max_step = drift / static_cast<double>(grid.size());
    for (std::size_t i = 1; i < values.size(); ++i) {
        current += random_value(rng, field, 0.0, max_step);
        values[i] = current;
    }
    return StepFunction(std::move(grid), std::move(values), field);
}

}  // namespace

std::pair<StepFunction, StepFunction> random_nondegenerate_pair(Rng& rng,
                                                                std::size_t max_pieces,
                                                                Field field,
                                                                double margin_floor) {
    StepFunction a = random_walk_function(rng, max_pieces, field, margin_floor, 0.25);
    StepFunction b = random_walk_function(rng, max_pieces, field, margin_floor, 0.25);
    return {std::move(a), std::move(b)};
}

std::pair<StepFunction, StepFunction> random_degenerate_pair(Rng& rng, std::size_t max_pieces,
                                                             Field field) {
    const std::size_t pieces = 2 + rng.below(std::max<std::size_t>(max_pieces, 2) - 1);
    auto grid = random_grid(rng, pieces);
    std::vector<complexd> fv(grid.size()), gv(grid.size());
    for (auto& v : fv) v = random_value(rng, field, 0.0, 1.0);
    for (auto& v : gv) v = random_value(rng, field, 0.0, 1.0);
    const std::size_t m = grid.size() - 1;
    if (rng.below(10) < 3) {
        // Zero only at the distinguished point 1.
        fv[m] = gv[m] = complexd(0.0, 0.0);
    } else {
        const std::size_t from = rng.below(m);
        const std::size_t to = std::min(m - 1, from + rng.below(2));
        for (std::size_t i = from; i <= to; ++i) fv[i] = gv[i] = complexd(0.0, 0.0);
    }
    return {StepFunction(grid, std::move(fv), field), StepFunction(grid, std::move(gv), field)};
}

StepFunction random_perturbation(Rng& rng, const std::vector<double>& grid, Field field,
                                 double target_norm, const NormFn& norm) {
    std::vector<complexd> values(grid.size());
    for (auto& v : values) v = random_value(rng, field, 0.1, 1.0);
    StepFunction raw(grid, std::move(values), field);
    const double raw_norm = norm(raw);
    return scale(raw, target_norm / raw_norm);
}

}  // namespace pvar
