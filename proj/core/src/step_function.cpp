#include "pvar/step_function.hpp"

#include <algorithm>
#include <cassert>

namespace pvar {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<complexd> values,
                           Field field)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)), field_(field) {
    if (breakpoints_.size() < 2)
        throw std::invalid_argument("step function needs at least breakpoints 0 and 1");
    if (breakpoints_.size() != values_.size())
        throw std::invalid_argument("values/breakpoints length mismatch: " +
                                    std::to_string(values_.size()) + " values for " +
                                    std::to_string(breakpoints_.size()) + " breakpoints");
    if (breakpoints_.front() != 0.0)
        throw std::invalid_argument("breakpoints must start at exactly 0");
    if (breakpoints_.back() != 1.0)
        throw std::invalid_argument("breakpoints must end at exactly 1");
    for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
        if (!std::isfinite(breakpoints_[i]))
            throw std::invalid_argument("non-finite breakpoint at index " + std::to_string(i));
        if (i > 0 && !(breakpoints_[i - 1] < breakpoints_[i]))
            throw std::invalid_argument("non-monotone breakpoints at index " + std::to_string(i));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!is_finite(values_[i]))
            throw std::invalid_argument("non-finite value at index " + std::to_string(i));
        if (field_ == Field::Real && values_[i].imag() != 0.0)
            throw std::invalid_argument("nonzero imaginary part at index " + std::to_string(i) +
                                        " in a real step function");
    }
}

std::size_t StepFunction::piece_index(double x) const {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("evaluation point outside [0,1]");
    if (x == 1.0) return last_index();
    // largest i with t_i <= x
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

complexd StepFunction::operator()(double x) const { return values_[piece_index(x)]; }

StepFunction make_step_function(std::vector<double> breakpoints, std::vector<double> values) {
    std::vector<complexd> cv(values.begin(), values.end());
    return StepFunction(std::move(breakpoints), std::move(cv), Field::Real);
}

StepFunction make_step_function(std::vector<double> breakpoints, std::vector<complexd> values,
                                Field field) {
    return StepFunction(std::move(breakpoints), std::move(values), field);
}

StepFunction constant_step_function(complexd c, Field field) {
    return StepFunction({0.0, 1.0}, {c, c}, field);
}

StepFunction constant_step_function(double c) {
    return constant_step_function(complexd(c, 0.0), Field::Real);
}

namespace {

std::vector<double> merge_grids(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

StepFunction refine_to_grid(const StepFunction& f, const std::vector<double>& grid) {
    const auto& bp = f.breakpoints();
    if (!std::includes(grid.begin(), grid.end(), bp.begin(), bp.end()))
        throw std::invalid_argument("grid is not a refinement of the function's breakpoints");
    std::vector<complexd> values(grid.size());
    std::size_t src = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        while (src + 1 < bp.size() && bp[src + 1] <= grid[j]) ++src;
        values[j] = f.values()[src];
    }
    return StepFunction(grid, std::move(values), f.field());
}

std::pair<StepFunction, StepFunction> common_refinement(const StepFunction& f,
                                                        const StepFunction& g) {
    if (f.breakpoints() == g.breakpoints()) return {f, g};
    auto grid = merge_grids(f.breakpoints(), g.breakpoints());
    return {refine_to_grid(f, grid), refine_to_grid(g, grid)};
}

StepFunction pointwise_combine(const StepFunction& f, const StepFunction& g, PointwiseOp op) {
    auto [rf, rg] = common_refinement(f, g);
    std::vector<complexd> values(rf.values().size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        switch (op) {
            case PointwiseOp::Add: values[i] = rf.values()[i] + rg.values()[i]; break;
            case PointwiseOp::Subtract: values[i] = rf.values()[i] - rg.values()[i]; break;
            case PointwiseOp::Multiply: values[i] = rf.values()[i] * rg.values()[i]; break;
        }
    }
    Field field = (f.field() == Field::Real && g.field() == Field::Real) ? Field::Real
                                                                         : Field::Complex;
    return StepFunction(rf.breakpoints(), std::move(values), field);
}

StepFunction conjugate(const StepFunction& f) {
    std::vector<complexd> values(f.values().size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::conj(f.values()[i]);
    return StepFunction(f.breakpoints(), std::move(values), f.field());
}

StepFunction scale(const StepFunction& f, complexd c) {
    std::vector<complexd> values(f.values().size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = c * f.values()[i];
    Field field = (f.field() == Field::Real && c.imag() == 0.0) ? Field::Real : Field::Complex;
    return StepFunction(f.breakpoints(), std::move(values), field);
}

StepFunction scale(const StepFunction& f, double c) { return scale(f, complexd(c, 0.0)); }

double sup_norm(const StepFunction& f) {
    double best = 0.0;
    for (const auto& v : f.values()) best = std::max(best, std::abs(v));
    return best;
}

double inf_modulus(const StepFunction& f) {
    double best = std::abs(f.values()[0]);
    for (const auto& v : f.values()) best = std::min(best, std::abs(v));
    return best;
}

double joint_margin(const StepFunction& f, const StepFunction& g) {
    auto [rf, rg] = common_refinement(f, g);
    double best = std::abs(rf.values()[0]) + std::abs(rg.values()[0]);
    for (std::size_t i = 1; i < rf.values().size(); ++i)
        best = std::min(best, std::abs(rf.values()[i]) + std::abs(rg.values()[i]));
    return best;
}

}  // namespace pvar
