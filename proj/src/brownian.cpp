#include "ctmetric/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ctmetric/errors.hpp"
#include "ctmetric/transport.hpp"

namespace ctmetric {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Per-path generator: mt19937_64 stream plus explicit Box-Muller, so draws
// do not depend on the standard library's normal_distribution internals.
class PathRng {
  public:
    explicit PathRng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // in (0,1)
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double phi = 2.0 * 3.141592653589793238462643 * uniform();
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

struct PathState {
    double value;
    bool absorbed;
};

// Advances one path by dt using sub-steps of size at most h_target.
void advance_path(PathState& p, double dt, double h_target, bool bridge, PathRng& rng) {
    if (p.absorbed || dt <= 0.0) return;
    const auto steps = static_cast<std::size_t>(std::ceil(dt / h_target));
    const double h = dt / static_cast<double>(std::max<std::size_t>(steps, 1));
    const double sqrt_h = std::sqrt(h);
    double a = p.value;
    for (std::size_t k = 0; k < steps; ++k) {
        const double b = a + sqrt_h * rng.gaussian();
        if (b <= 0.0) {
            p.value = 0.0;
            p.absorbed = true;
            return;
        }
        if (b >= 1.0) {
            p.value = 1.0;
            p.absorbed = true;
            return;
        }
        if (bridge) {
            // Intra-step boundary hits; exp arguments beyond ~37 cannot beat
            // a 53-bit uniform, so skip them.
            const double p0 = (2.0 * a * b <= 37.0 * h) ? std::exp(-2.0 * a * b / h) : 0.0;
            const double p1 =
                (2.0 * (1.0 - a) * (1.0 - b) <= 37.0 * h)
                    ? std::exp(-2.0 * (1.0 - a) * (1.0 - b) / h)
                    : 0.0;
            if (p0 > 0.0 || p1 > 0.0) {
                const double u = rng.uniform();
                if (u < p0) {
                    p.value = 0.0;
                    p.absorbed = true;
                    return;
                }
                if (u < p0 + p1) {
                    p.value = 1.0;
                    p.absorbed = true;
                    return;
                }
            }
        }
        a = b;
    }
    p.value = a;
}

struct EnsembleSnapshots {
    std::vector<double> times;            // the requested grid, ascending
    std::vector<std::vector<double>> values;  // [time index][path]
};

// Evolves n paths from x through all grid times with one stream per path.
// The step target is tied to the final time so every marginal shares it.
EnsembleSnapshots simulate(double x, const std::vector<double>& times, std::size_t n_samples,
                           std::uint64_t seed, const BmOptions& options) {
    EnsembleSnapshots out;
    out.times = times;
    out.values.assign(times.size(), std::vector<double>(n_samples, x));
    if (times.empty()) return out;
    const double t_max = times.back();
    const double h_target = options.step_scale * std::max(t_max, 1.0);

    const std::uint64_t stream_base = splitmix64(seed);
    for (std::size_t path = 0; path < n_samples; ++path) {
        PathRng rng(splitmix64(stream_base + path));
        PathState state{x, x <= 0.0 || x >= 1.0};
        double prev = 0.0;
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            advance_path(state, times[ti] - prev, h_target, options.bridge, rng);
            out.values[ti][path] = state.value;
            prev = times[ti];
        }
    }
    return out;
}

ParticleDistribution collapse(const std::vector<double>& values, std::uint64_t seed) {
    ParticleDistribution d;
    d.source = ParticleDistribution::Source::monte_carlo;
    d.seed = seed;
    const double w = 1.0 / static_cast<double>(values.size());
    std::size_t at_zero = 0, at_one = 0;
    for (double v : values) {
        if (v == 0.0)
            ++at_zero;
        else if (v == 1.0)
            ++at_one;
    }
    if (at_zero > 0) {
        d.positions.push_back(0.0);
        d.weights.push_back(static_cast<double>(at_zero) * w);
    }
    for (double v : values)
        if (v != 0.0 && v != 1.0) {
            d.positions.push_back(v);
            d.weights.push_back(w);
        }
    if (at_one > 0) {
        d.positions.push_back(1.0);
        d.weights.push_back(static_cast<double>(at_one) * w);
    }
    return d;
}

ParticleDistribution exact_atom(double x) {
    ParticleDistribution d;
    d.source = ParticleDistribution::Source::exact_atom;
    d.positions.push_back(x);
    d.weights.push_back(1.0);
    return d;
}

}  // namespace

double ParticleDistribution::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < positions.size(); ++k) m += positions[k] * weights[k];
    return m;
}

double ParticleDistribution::stddev() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t k = 0; k < positions.size(); ++k)
        s += weights[k] * (positions[k] - m) * (positions[k] - m);
    return std::sqrt(std::max(s, 0.0));
}

double ParticleDistribution::weight_at(double position, double tol) const {
    double w = 0.0;
    for (std::size_t k = 0; k < positions.size(); ++k)
        if (std::abs(positions[k] - position) <= tol) w += weights[k];
    return w;
}

ParticleDistribution absorbed_bm_kernel(double x, double t, std::size_t n_samples,
                                        std::uint64_t seed, const BmOptions& options) {
    if (!(x >= 0.0 && x <= 1.0))
        throw precondition_error("absorbed_bm_kernel: x must lie in [0,1]");
    if (t < 0.0) throw precondition_error("absorbed_bm_kernel: t must be nonnegative");
    if (n_samples < 1) throw precondition_error("absorbed_bm_kernel: n_samples must be >= 1");
    if (x == 0.0 || x == 1.0 || t == 0.0) return exact_atom(x);

    EnsembleSnapshots snaps = simulate(x, {t}, n_samples, seed, options);
    return collapse(snaps.values[0], seed);
}

BmDeltaResult bm_delta1(double x, double y, double c, std::vector<double> t_grid,
                        std::size_t n_samples, std::uint64_t seed, const BmOptions& options) {
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0))
        throw precondition_error("bm_delta1: endpoints must lie in [0,1]");
    if (!(c > 0.0 && c < 1.0)) throw precondition_error("bm_delta1: c must lie in (0,1)");
    if (n_samples < 1) throw precondition_error("bm_delta1: n_samples must be >= 1");
    for (double t : t_grid)
        if (t < 0.0) throw precondition_error("bm_delta1: negative grid time");

    if (x == y) return {0.0, 0.0, 0.0};

    std::sort(t_grid.begin(), t_grid.end());
    t_grid.erase(std::unique(t_grid.begin(), t_grid.end()), t_grid.end());
    if (t_grid.empty() || t_grid.front() != 0.0) t_grid.insert(t_grid.begin(), 0.0);

    std::vector<double> positive(t_grid.begin() + 1, t_grid.end());
    const bool x_exact = (x == 0.0 || x == 1.0);
    const bool y_exact = (y == 0.0 || y == 1.0);
    EnsembleSnapshots snap_x, snap_y;
    if (!x_exact) snap_x = simulate(x, positive, n_samples, splitmix64(seed ^ 0x5851f42d4c957f2dull), options);
    if (!y_exact) snap_y = simulate(y, positive, n_samples, splitmix64(seed ^ 0x14057b7ef767814full), options);

    BmDeltaResult best{std::abs(x - y), 0.0, 0.0};  // the t = 0 term is exact
    for (std::size_t ti = 0; ti < positive.size(); ++ti) {
        const double t = positive[ti];
        ParticleDistribution px =
            x_exact ? exact_atom(x) : collapse(snap_x.values[ti], seed);
        ParticleDistribution py =
            y_exact ? exact_atom(y) : collapse(snap_y.values[ti], seed);
        const double discount = std::pow(c, t);
        const double value =
            discount * wasserstein_1d(px.positions, px.weights, py.positions, py.weights);
        if (value > best.value) {
            best.value = value;
            best.argmax_t = t;
            if (x_exact || y_exact) {
                // point mass vs cloud: the cost is a plain expectation
                const double atom = x_exact ? x : y;
                const ParticleDistribution& cloud = x_exact ? py : px;
                double m = 0.0, s = 0.0;
                for (std::size_t k = 0; k < cloud.positions.size(); ++k)
                    m += cloud.weights[k] * std::abs(cloud.positions[k] - atom);
                for (std::size_t k = 0; k < cloud.positions.size(); ++k) {
                    const double dev = std::abs(cloud.positions[k] - atom) - m;
                    s += cloud.weights[k] * dev * dev;
                }
                best.standard_error =
                    discount * std::sqrt(std::max(s, 0.0) / static_cast<double>(n_samples));
            } else {
                // batch estimate over ten path groups
                constexpr std::size_t groups = 10;
                std::vector<double> batch(groups, 0.0);
                for (std::size_t g = 0; g < groups; ++g) {
                    std::vector<double> vx, vy;
                    for (std::size_t p = g; p < n_samples; p += groups) {
                        vx.push_back(snap_x.values[ti][p]);
                        vy.push_back(snap_y.values[ti][p]);
                    }
                    ParticleDistribution gx = collapse(vx, seed);
                    ParticleDistribution gy = collapse(vy, seed);
                    batch[g] = discount *
                               wasserstein_1d(gx.positions, gx.weights, gy.positions, gy.weights);
                }
                double bm = 0.0;
                for (double b : batch) bm += b;
                bm /= static_cast<double>(groups);
                double var = 0.0;
                for (double b : batch) var += (b - bm) * (b - bm);
                var /= static_cast<double>(groups - 1);
                best.standard_error = std::sqrt(var / static_cast<double>(groups));
            }
        }
    }
    return best;
}

double hitting_cdf(double x, double t) {
    if (!(x > 0.0)) throw precondition_error("hitting_cdf: x must be positive");
    if (!(t > 0.0)) throw precondition_error("hitting_cdf: t must be positive");
    return std::erfc(x / std::sqrt(2.0 * t));
}

GbmBound gbm_lower_bound(double x, double c, const std::vector<double>& t_grid) {
    if (!(x > 0.0 && x <= 1.0)) throw precondition_error("gbm_lower_bound: x must lie in (0,1]");
    if (!(c > 0.0 && c < 1.0)) throw precondition_error("gbm_lower_bound: c must lie in (0,1)");
    if (t_grid.empty()) throw precondition_error("gbm_lower_bound: empty time grid");

    const double level = -std::log(x);
    GbmBound best{0.0, t_grid.front()};
    bool first = true;
    for (double t : t_grid) {
        if (t < 0.0) throw precondition_error("gbm_lower_bound: negative grid time");
        const double prob = (t == 0.0) ? 0.0 : (level == 0.0 ? 1.0 : hitting_cdf(level, t));
        const double value = std::pow(c, t) * prob;
        if (first || value > best.bound) {
            best.bound = value;
            best.argmax_t = t;
            first = false;
        }
    }
    return best;
}

}  // namespace ctmetric
