#pragma once

#include <cstdint>
#include <vector>

namespace ctmetric {

/// Atomic distribution on [0,1]: absorbed mass sits on the boundary atoms,
/// surviving paths contribute equal-weight interior atoms.
struct ParticleDistribution {
    enum class Source { exact_atom, monte_carlo };

    std::vector<double> positions;
    std::vector<double> weights;
    Source source = Source::exact_atom;
    std::uint64_t seed = 0;

    double mean() const;
    /// Weighted standard deviation of the positions.
    double stddev() const;
    double weight_at(double position, double tol = 0.0) const;
};

struct BmOptions {
    double step_scale = 1e-3;  // step = step_scale * max(t, 1)
    /**
     * Sample intra-step boundary hits from the Brownian bridge. Without it,
     * absorption detected only at step ends biases the stopped mean by about
     * 0.58*sqrt(step)*(p0 - p1), which the martingale tolerance does not
     * absorb at the default sample counts.
     */
    bool bridge = true;
};

/**
 * Distribution at time t of Brownian motion started in x and stopped on
 * first hitting {0,1}. Euler steps with per-step absorption; deterministic
 * given (seed, n_samples, step).
 */
ParticleDistribution absorbed_bm_kernel(double x, double t, std::size_t n_samples,
                                        std::uint64_t seed, const BmOptions& options = {});

struct BmDeltaResult {
    double value = 0.0;
    double argmax_t = 0.0;
    double standard_error = 0.0;
};

/**
 * One functional step for the absorbed process on [0,1]: the supremum over
 * the time grid (t = 0 always included, contributing exactly |x - y|) of
 * c^t * W applied to the simulated kernels under the ground cost |a - b|.
 * One path ensemble per endpoint is evolved across the whole grid.
 */
BmDeltaResult bm_delta1(double x, double y, double c, std::vector<double> t_grid,
                        std::size_t n_samples, std::uint64_t seed, const BmOptions& options = {});

/// P(inf{s : B_s^x = 0} < t) for x, t > 0, via the Gaussian tail.
double hitting_cdf(double x, double t);

struct GbmBound {
    double bound = 0.0;
    double argmax_t = 0.0;
};

/**
 * Lower bound on the one-step distance between 0 and x for the geometric
 * process x * exp(B_t): the discounted probability that the level where the
 * exponent reaches -ln(x) has been hit, maximized over the time grid.
 */
GbmBound gbm_lower_bound(double x, double c, const std::vector<double>& t_grid);

}  // namespace ctmetric
