#pragma once

#include "pvar/openness.hpp"
#include "pvar/rng.hpp"
#include "pvar/step_function.hpp"

namespace pvar {

/// Breakpoint grid 0 < t_1 < ... < t_{m-1} < 1 with m pieces.
std::vector<double> random_grid(Rng& rng, std::size_t pieces);

struct RandomFunctionSpec {
    std::size_t min_pieces = 1;
    std::size_t max_pieces = 12;
    Field field = Field::Real;
    double min_abs = 0.0;  // lower bound on every |value|
    double max_abs = 1.0;
};

StepFunction random_step_function(Rng& rng, const RandomFunctionSpec& spec);

/// Real values in [0,1].
StepFunction random_nonnegative_unit(Rng& rng, std::size_t max_pieces);

/// Pair with joint margin >= margin_floor (one component bounded away from
/// zero; which one alternates).
std::pair<StepFunction, StepFunction> random_nondegenerate_pair(Rng& rng,
                                                                std::size_t max_pieces,
                                                                Field field,
                                                                double margin_floor);

/// Pair with at least one exact joint zero: either a shared zero run or a
/// zero at the distinguished point 1 alone (which exercises the isolated-zero
/// repair of the lifting).
std::pair<StepFunction, StepFunction> random_degenerate_pair(Rng& rng, std::size_t max_pieces,
                                                             Field field);

/// Random step function on the given grid scaled so that norm(h) lands on
/// target_norm (within rounding). Returns nullopt-like zero function when
/// target_norm is 0.
StepFunction random_perturbation(Rng& rng, const std::vector<double>& grid, Field field,
                                 double target_norm, const NormFn& norm);

}  // namespace pvar
