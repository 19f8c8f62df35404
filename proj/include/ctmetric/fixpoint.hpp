#pragma once

#include <cstddef>
#include <vector>

#include "ctmetric/functional.hpp"
#include "ctmetric/model.hpp"
#include "ctmetric/pseudometric.hpp"

namespace ctmetric {

/**
 * Record of the iteration from the obs metric towards the behavioural
 * distance. Tables are entrywise nondecreasing; residuals[k] is the sup-norm
 * step from tables[k] to tables[k+1]. accelerated[k] marks steps produced by
 * extrapolation rather than a functional application.
 */
struct IterationTrace {
    std::vector<PseudometricTable> tables;
    std::vector<double> residuals;
    std::vector<bool> accelerated;
    bool converged = false;
    std::size_t iterations = 0;  // functional applications performed

    const PseudometricTable& final_table() const { return tables.back(); }
    double final_residual() const { return residuals.empty() ? 0.0 : residuals.back(); }
};

struct IterateOptions {
    double tol_fix = 1e-9;
    std::size_t max_iter = 200;

    /**
     * Interleave plain functional steps with safeguarded three-point
     * extrapolation. The per-pair recurrences approach tangential fixpoints
     * (plain iteration gains only O(1/n)), so the plain mode cannot reach
     * tight tolerances in a practical number of steps; extrapolated jumps
     * are clamped monotone, triangle-repaired and only confirmed converged
     * when a further extrapolation moves less than jump_tol.
     */
    bool accelerate = true;
    double jump_tol = 1e-9;
};

/// Iterates the functional from the obs metric; the last table is the
/// computed behavioural distance. Non-convergence is reported through the
/// converged flag, never as an error.
IterationTrace iterate(const Model& model, const DiscountSpec& disc, const SupStrategy& strategy,
                       const IterateOptions& options = {});

inline IterationTrace iterate(const Model& model, const DiscountSpec& disc,
                              const SupStrategy& strategy, double tol_fix, std::size_t max_iter) {
    IterateOptions opt;
    opt.tol_fix = tol_fix;
    opt.max_iter = max_iter;
    return iterate(model, disc, strategy, opt);
}

/// Sup-norm of F(m) - m.
double verify_fixpoint(const Model& model, const DiscountSpec& disc, const SupStrategy& strategy,
                       const PseudometricTable& m);

/**
 * For a fixpoint m lying above the obs metric, checks m >= delta_bar - 1e-6
 * entrywise. Throws precondition_error if m is not a fixpoint within
 * fix_tol or does not dominate the obs metric.
 */
bool check_least_fixpoint_bound(const Model& model, const DiscountSpec& disc,
                                const SupStrategy& strategy, const PseudometricTable& m,
                                const PseudometricTable& delta_bar, double fix_tol = 1e-6);

}  // namespace ctmetric
