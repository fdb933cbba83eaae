#pragma once

#include <vector>

#include "pvar/types.hpp"

namespace pvar {

/// Right-continuous piecewise-constant function on [0,1].
///
/// breakpoints 0 = t_0 < t_1 < ... < t_m = 1 and values v_0..v_m:
/// f(x) = v_i on [t_i, t_{i+1}) for i < m, and f(1) = v_m. The value at 1 is
/// distinguished, so a jump at any breakpoint including 1 is representable.
/// Instances are immutable after construction.
class StepFunction {
  public:
    StepFunction(std::vector<double> breakpoints, std::vector<complexd> values, Field field);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<complexd>& values() const { return values_; }
    Field field() const { return field_; }

    /// Last value index m (= piece count; values().size() == m + 1).
    std::size_t last_index() const { return values_.size() - 1; }

    complexd operator()(double x) const;

    /// Value index of the piece containing x (m for x == 1).
    std::size_t piece_index(double x) const;

    bool operator==(const StepFunction& other) const = default;

  private:
    std::vector<double> breakpoints_;
    std::vector<complexd> values_;
    Field field_;
};

enum class PointwiseOp { Add, Subtract, Multiply };

StepFunction make_step_function(std::vector<double> breakpoints, std::vector<double> values);
StepFunction make_step_function(std::vector<double> breakpoints, std::vector<complexd> values,
                                Field field);

/// Constant function c on [0,1].
StepFunction constant_step_function(complexd c, Field field);
StepFunction constant_step_function(double c);

/// Re-expresses f and g on the union of their breakpoint grids; both results
/// are pointwise equal to their inputs everywhere on [0,1].
std::pair<StepFunction, StepFunction> common_refinement(const StepFunction& f,
                                                        const StepFunction& g);

/// Re-expresses f on the given grid (must be a refinement of f's own grid,
/// i.e. a superset of its breakpoints).
StepFunction refine_to_grid(const StepFunction& f, const std::vector<double>& grid);

/// f op g on the common refinement. Real op real stays real; anything else
/// promotes to complex.
StepFunction pointwise_combine(const StepFunction& f, const StepFunction& g, PointwiseOp op);

StepFunction conjugate(const StepFunction& f);

StepFunction scale(const StepFunction& f, complexd c);
StepFunction scale(const StepFunction& f, double c);

/// max_i |v_i|; attained, hence exact for step functions.
double sup_norm(const StepFunction& f);

/// inf over [0,1] of |f| (attained minimum over values).
double inf_modulus(const StepFunction& f);

/// inf over [0,1] of |f(x)| + |g(x)|, the joint nondegeneracy margin.
double joint_margin(const StepFunction& f, const StepFunction& g);

}  // namespace pvar
