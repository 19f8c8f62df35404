#include "ctmetric/functional.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ctmetric/errors.hpp"
#include "ctmetric/transport.hpp"

namespace ctmetric {

namespace {

constexpr double kThetaSentinel = 1e-12;

double objective(const Model& model, const DiscountSpec& disc, const PseudometricTable& m,
                 StateId x, StateId y, double theta) {
    const DiscreteDistribution px = kernel_at(model, x, theta);
    const DiscreteDistribution py = kernel_at(model, y, theta);
    return std::pow(theta, disc.beta) * kantorovich_cost(m, px, py);
}

}  // namespace

void SupStrategy::validate() const {
    if (grid_points < 2) throw validation_error("sup strategy: grid_points must be >= 2");
    if (mode == Mode::discrete_step && !(fixed_theta > 0.0 && fixed_theta <= 1.0))
        throw validation_error("sup strategy: fixed_theta must lie in (0,1]");
}

double discounted_transport(const Model& model, const DiscountSpec& disc,
                            const PseudometricTable& m, StateId x, StateId y, double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw precondition_error("discounted_transport: theta must lie in (0,1]");
    if (m.size() != model.state_count())
        throw precondition_error("discounted_transport: metric size does not match the model");
    if (x == y) return 0.0;
    return objective(model, disc, m, x, y, theta);
}

SupResult sup_over_time(const Model& model, const DiscountSpec& disc, const PseudometricTable& m,
                        StateId x, StateId y, const SupStrategy& strategy) {
    strategy.validate();
    if (m.size() != model.state_count())
        throw precondition_error("sup_over_time: metric size does not match the model");
    if (x == y) return {0.0, 1.0};

    if (strategy.mode == SupStrategy::Mode::discrete_step)
        return {objective(model, disc, m, x, y, strategy.fixed_theta), strategy.fixed_theta};

    // Grid pass. Later grid points win ties, so a flat objective reports the
    // boundary theta = 1.
    const std::size_t uniform = strategy.grid_points - 1;
    std::vector<double> thetas(strategy.grid_points);
    thetas[0] = kThetaSentinel;
    for (std::size_t k = 1; k <= uniform; ++k)
        thetas[k] = static_cast<double>(k) / static_cast<double>(uniform);

    double best = -1.0;
    std::size_t best_idx = 0;
    std::vector<double> values(thetas.size());
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        values[k] = objective(model, disc, m, x, y, thetas[k]);
        if (values[k] >= best) {
            best = values[k];
            best_idx = k;
        }
    }

    SupResult result{best, thetas[best_idx]};
    if (strategy.refine_iters == 0) return result;

    // Golden-section refinement on the bracket around the best grid point.
    double lo = thetas[best_idx > 0 ? best_idx - 1 : 0];
    double hi = thetas[std::min(best_idx + 1, thetas.size() - 1)];
    if (hi <= lo) return result;

    constexpr double invphi = 0.6180339887498949;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = objective(model, disc, m, x, y, c);
    double fd = objective(model, disc, m, x, y, d);
    auto consider = [&result](double theta, double value) {
        if (value > result.value) {
            result.value = value;
            result.argmax_theta = theta;
        }
    };
    consider(c, fc);
    consider(d, fd);
    for (std::size_t it = 0; it < strategy.refine_iters; ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = objective(model, disc, m, x, y, c);
            consider(c, fc);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = objective(model, disc, m, x, y, d);
            consider(d, fd);
        }
    }
    return result;
}

PseudometricTable apply_functional(const Model& model, const DiscountSpec& disc,
                                   const PseudometricTable& m, const SupStrategy& strategy) {
    const std::size_t n = model.state_count();
    PseudometricTable out(n);
    for (StateId i = 0; i < n; ++i)
        for (StateId j = i + 1; j < n; ++j)
            out.set(i, j, sup_over_time(model, disc, m, i, j, strategy).value);
    out.close_triangle();
    return out;
}

}  // namespace ctmetric
