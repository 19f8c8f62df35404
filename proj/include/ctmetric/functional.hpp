#pragma once

#include <cstddef>

#include "ctmetric/model.hpp"
#include "ctmetric/pseudometric.hpp"

namespace ctmetric {

/**
 * How the supremum over time is evaluated.
 *
 * theta_grid: evaluate theta^beta * W(m) on a uniform theta grid over (0,1]
 * (theta = 1 included exactly, plus a left sentinel near 0 standing in for
 * t -> infinity), then improve the best grid point by golden-section
 * refinement on the bracketing interval.
 *
 * discrete_step: evaluate at one fixed theta only; with fixed_theta = c and
 * beta = 1 this is the classic one-step discrete-time functional.
 */
struct SupStrategy {
    enum class Mode { theta_grid, discrete_step };

    Mode mode = Mode::theta_grid;
    std::size_t grid_points = 8193;  // counts the sentinel
    std::size_t refine_iters = 60;
    double fixed_theta = 1.0;  // discrete_step only

    void validate() const;
};

/// theta^beta * W(m)(P_theta(x), P_theta(y)).
double discounted_transport(const Model& model, const DiscountSpec& disc,
                            const PseudometricTable& m, StateId x, StateId y, double theta);

struct SupResult {
    double value = 0.0;
    double argmax_theta = 1.0;
};

/// sup over theta in (0,1] of discounted_transport, per the strategy.
SupResult sup_over_time(const Model& model, const DiscountSpec& disc, const PseudometricTable& m,
                        StateId x, StateId y, const SupStrategy& strategy);

/**
 * Applies the discounted transport functional to every unordered pair.
 * The output dominates m entrywise and is a valid pseudometric table
 * (a min-plus sweep absorbs refinement slack in the triangle inequality).
 */
PseudometricTable apply_functional(const Model& model, const DiscountSpec& disc,
                                   const PseudometricTable& m, const SupStrategy& strategy);

}  // namespace ctmetric
