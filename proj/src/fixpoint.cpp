#include "ctmetric/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "ctmetric/errors.hpp"

namespace ctmetric {

namespace {

// Three-point extrapolation of one entry from consecutive plain iterates
// d0 -> d1 -> d2. Two limit estimates are formed: Aitken (exact for
// geometric step decay) and the harmonic variant (exact when the reciprocal
// error is arithmetic, which is the shape tangential recurrences take).
// Both underestimate on the other's sequence type, so the larger one is
// used, clamped to [d2, cap].
double extrapolate_entry(double d0, double d1, double d2) {
    const double s1 = d1 - d0;
    const double s2 = d2 - d1;
    if (s2 <= 1e-15) return d2;

    double guess = d2;
    const double aitken_den = s2 - s1;
    if (std::abs(aitken_den) > 1e-15) {
        const double u = d2 - s2 * s2 / aitken_den;
        if (std::isfinite(u) && u > guess) guess = u;
    }
    const double harmonic_den = 2.0 * d1 - d0 - d2;
    if (std::abs(harmonic_den) > 1e-15) {
        const double u = (d1 * (d0 + d2) - 2.0 * d0 * d2) / harmonic_den;
        if (std::isfinite(u) && u > guess) guess = u;
    }
    const double cap = d2 + std::max(100.0 * s2, 1e-3);
    return std::clamp(guess, d2, std::min(cap, 1.0));
}

PseudometricTable extrapolate_table(const PseudometricTable& t0, const PseudometricTable& t1,
                                    const PseudometricTable& t2) {
    const std::size_t n = t2.size();
    PseudometricTable out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.set(i, j, extrapolate_entry(t0(i, j), t1(i, j), t2(i, j)));
    out.close_triangle();
    // The closure can only shrink entries towards t2, never below it: t2 is
    // itself a pseudometric and every extrapolated entry dominates it.
    return out;
}

}  // namespace

IterationTrace iterate(const Model& model, const DiscountSpec& disc, const SupStrategy& strategy,
                       const IterateOptions& options) {
    if (!(options.tol_fix > 0.0)) throw precondition_error("iterate: tol_fix must be positive");
    if (options.max_iter < 1) throw precondition_error("iterate: max_iter must be >= 1");

    IterationTrace trace;
    trace.tables.push_back(obs_metric(model));

    // Indices (into trace.tables) of the trailing run of plain steps; an
    // accepted jump restarts the run at the jumped table.
    std::vector<std::size_t> window{0};

    auto push = [&trace](PseudometricTable table, bool accel) {
        trace.residuals.push_back(table.sup_distance(trace.tables.back()));
        trace.accelerated.push_back(accel);
        trace.tables.push_back(std::move(table));
    };

    auto try_extrapolate = [&]() -> std::optional<double> {
        if (window.size() < 3) return std::nullopt;
        const std::size_t k = window.size();
        PseudometricTable jumped =
            extrapolate_table(trace.tables[window[k - 3]], trace.tables[window[k - 2]],
                              trace.tables[window[k - 1]]);
        const double magnitude = jumped.sup_distance(trace.tables.back());
        if (magnitude > options.jump_tol) {
            push(std::move(jumped), /*accel=*/true);
            window.assign(1, trace.tables.size() - 1);
        }
        return magnitude;
    };

    while (trace.iterations < options.max_iter) {
        PseudometricTable next = apply_functional(model, disc, trace.tables.back(), strategy);
        ++trace.iterations;
        const double residual = next.sup_distance(trace.tables.back());
        push(std::move(next), /*accel=*/false);
        window.push_back(trace.tables.size() - 1);

        if (residual < options.tol_fix) {
            if (!options.accelerate) {
                trace.converged = true;
                break;
            }
            // A small plain residual near a tangential fixpoint does not mean
            // a small error; converge only once a jump attempt is also small.
            const auto magnitude = try_extrapolate();
            if (!magnitude.has_value() || *magnitude <= options.jump_tol) {
                trace.converged = true;
                break;
            }
            continue;
        }
        if (options.accelerate) try_extrapolate();
    }
    return trace;
}

double verify_fixpoint(const Model& model, const DiscountSpec& disc, const SupStrategy& strategy,
                       const PseudometricTable& m) {
    return apply_functional(model, disc, m, strategy).sup_distance(m);
}

bool check_least_fixpoint_bound(const Model& model, const DiscountSpec& disc,
                                const SupStrategy& strategy, const PseudometricTable& m,
                                const PseudometricTable& delta_bar, double fix_tol) {
    const double residual = verify_fixpoint(model, disc, strategy, m);
    if (residual > fix_tol)
        throw precondition_error("check_least_fixpoint_bound: m is not a fixpoint (residual " +
                                 std::to_string(residual) + " > " + std::to_string(fix_tol) + ")");
    if (!m.dominates(obs_metric(model), 1e-12))
        throw precondition_error(
            "check_least_fixpoint_bound: m does not dominate the obs metric");
    return m.dominates(delta_bar, 1e-6);
}

}  // namespace ctmetric
