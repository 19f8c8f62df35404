#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ctmetric/logic.hpp"
#include "ctmetric/model.hpp"
#include "ctmetric/pseudometric.hpp"

namespace testsupport {

inline std::string toy_model_json(double r) {
    std::ostringstream os;
    os.precision(17);
    os << R"({
  "states": ["0", "x", "y", "z", "dead"],
  "obs": [1.0, )"
       << r << ", " << r << ", " << r << R"(, 0.0],
  "lambda": 1.0,
  "kernel": {
    "0":    [["0", [1.0]]],
    "x":    [["0", [1.0, -1.0]], ["x", [0.0, 1.0]]],
    "y":    [["y", [1.0]]],
    "z":    [["0", [0.5, -0.5]], ["dead", [0.5, -0.5]], ["z", [0.0, 1.0]]],
    "dead": [["dead", [1.0]]]
  }
})";
    return os.str();
}

inline ctmetric::Model toy_model(double r) {
    return ctmetric::load_model_from_string(toy_model_json(r));
}

inline ctmetric::StateId sid(const ctmetric::Model& m, const std::string& name) {
    return *m.state_index(name);
}

/// Random pseudometric: min-plus closure of a random symmetric matrix.
inline ctmetric::PseudometricTable random_pseudometric(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    ctmetric::PseudometricTable t(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) t.set(i, j, unif(rng));
    t.close_triangle();
    return t;
}

/// Random distribution over a random subset of {0, ..., n-1}.
inline ctmetric::DiscreteDistribution random_distribution(std::size_t n, std::mt19937_64& rng,
                                                          std::size_t max_support = 0) {
    if (max_support == 0 || max_support > n) max_support = n;
    std::uniform_int_distribution<std::size_t> size_dist(1, max_support);
    const std::size_t k = size_dist(rng);
    std::vector<std::size_t> points(n);
    for (std::size_t i = 0; i < n; ++i) points[i] = i;
    std::shuffle(points.begin(), points.end(), rng);

    ctmetric::DiscreteDistribution d;
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        d.support.push_back(points[i]);
        d.weights.push_back(unif(rng));
        total += d.weights.back();
    }
    for (double& w : d.weights) w /= total;
    return d;
}

/**
 * Random valid model: each row is theta^p * (point mass on self)
 * + (1 - theta^p) * (fixed mixture), p in {1, 2}. Honest by construction
 * and the identity at theta = 1 holds exactly.
 */
inline ctmetric::Model random_model(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> pow_dist(1, 2);

    std::vector<std::string> names;
    std::vector<double> obs;
    std::vector<ctmetric::Model::KernelRow> kernel(n);
    for (std::size_t s = 0; s < n; ++s) {
        names.push_back("s" + std::to_string(s));
        obs.push_back(unif(rng));

        std::vector<double> mix(n);
        double total = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            mix[t] = unif(rng) + 1e-3;
            total += mix[t];
        }
        for (double& w : mix) w /= total;

        const int p = pow_dist(rng);
        for (std::size_t t = 0; t < n; ++t) {
            // mix[t] + theta^p * (delta_st - mix[t])
            std::vector<double> coeffs(p + 1, 0.0);
            coeffs[0] = mix[t];
            coeffs[p] = (t == s ? 1.0 : 0.0) - mix[t];
            kernel[s].emplace_back(t, ctmetric::ThetaPolynomial(std::move(coeffs)));
        }
    }
    return ctmetric::Model(std::move(names), std::move(obs), 1.0, std::move(kernel));
}

/**
 * Independent transport oracle: enumerate the vertices of the coupling
 * polytope. Basic solutions are spanning trees over row/column nodes; flows
 * follow by leaf elimination; trees with negative flows are skipped. Only
 * meant for supports of up to ~4 points.
 */
inline double brute_force_transport_cost(const ctmetric::PseudometricTable& m,
                                         const ctmetric::DiscreteDistribution& P,
                                         const ctmetric::DiscreteDistribution& Q) {
    const std::size_t rows = P.support.size(), cols = Q.support.size();
    const std::size_t cells = rows * cols, pick = rows + cols - 1;
    double best = std::numeric_limits<double>::infinity();

    auto try_tree = [&](const std::vector<std::size_t>& chosen) {
        std::vector<double> a = P.weights, b = Q.weights, flow(chosen.size(), 0.0);
        std::vector<int> row_deg(rows, 0), col_deg(cols, 0);
        for (std::size_t c : chosen) {
            ++row_deg[c / cols];
            ++col_deg[c % cols];
        }
        std::vector<bool> used(chosen.size(), false);
        for (std::size_t round = 0; round < chosen.size(); ++round) {
            bool advanced = false;
            for (std::size_t k = 0; k < chosen.size(); ++k) {
                if (used[k]) continue;
                const std::size_t i = chosen[k] / cols, j = chosen[k] % cols;
                if (row_deg[i] == 1) {
                    flow[k] = a[i];
                    b[j] -= a[i];
                    a[i] = 0.0;
                } else if (col_deg[j] == 1) {
                    flow[k] = b[j];
                    a[i] -= b[j];
                    b[j] = 0.0;
                } else {
                    continue;
                }
                used[k] = true;
                --row_deg[i];
                --col_deg[j];
                advanced = true;
            }
            if (!advanced) break;
        }
        for (bool u : used)
            if (!u) return;  // the chosen cells contain a cycle
        double cost = 0.0;
        for (std::size_t k = 0; k < chosen.size(); ++k) {
            if (flow[k] < -1e-12) return;  // basic but infeasible
            cost += std::max(flow[k], 0.0) *
                    m(P.support[chosen[k] / cols], Q.support[chosen[k] % cols]);
        }
        best = std::min(best, cost);
    };

    std::vector<std::size_t> stack;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (stack.size() == pick) {
            try_tree(stack);
            return;
        }
        for (std::size_t c = start; c < cells; ++c) {
            stack.push_back(c);
            rec(c + 1);
            stack.pop_back();
        }
    };
    rec(0);
    return best;
}

namespace detail {

inline double tail_integrand(double s) { return std::exp(-0.5 * s * s); }

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(double a, double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double m1 = 0.5 * (a + mid), m2 = 0.5 * (mid + b);
    const double f1 = tail_integrand(m1), f2 = tail_integrand(m2);
    const double left = simpson(a, mid, fa, f1, fm);
    const double right = simpson(mid, b, fm, f2, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(a, mid, fa, f1, fm, left, 0.5 * tol, depth - 1) +
           adaptive(mid, b, fm, f2, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// sqrt(2/pi) * integral_u^inf exp(-s^2/2) ds by adaptive Simpson quadrature.
inline double gaussian_tail_oracle(double u) {
    const double upper = std::max(u + 40.0, 40.0);
    const double mid = 0.5 * (u + upper);
    const double whole = detail::simpson(u, upper, detail::tail_integrand(u),
                                         detail::tail_integrand(mid),
                                         detail::tail_integrand(upper));
    const double integral =
        detail::adaptive(u, upper, detail::tail_integrand(u), detail::tail_integrand(mid),
                         detail::tail_integrand(upper), whole, 1e-15, 48);
    return std::sqrt(2.0 / 3.141592653589793238462643) * integral;
}

/// Random formula of depth <= max_depth over the default pools.
inline ctmetric::LogicExprPtr random_formula(std::size_t max_depth, std::mt19937_64& rng,
                                             const std::vector<ctmetric::Rational>& constants,
                                             const std::vector<double>& times) {
    std::uniform_int_distribution<int> leaf(0, 2);
    std::uniform_int_distribution<int> node(0, 3);
    std::uniform_int_distribution<std::size_t> cpick(0, constants.size() - 1);
    std::uniform_int_distribution<std::size_t> tpick(0, times.size() - 1);
    if (max_depth == 0 || leaf(rng) == 0) {
        if (leaf(rng) != 0) return ctmetric::LogicExpr::obs();
        return ctmetric::LogicExpr::constant(constants[cpick(rng)]);
    }
    switch (node(rng)) {
        case 0:
            return ctmetric::LogicExpr::min_of(
                random_formula(max_depth - 1, rng, constants, times),
                random_formula(max_depth - 1, rng, constants, times));
        case 1:
            return ctmetric::LogicExpr::neg(
                random_formula(max_depth - 1, rng, constants, times));
        case 2:
            return ctmetric::LogicExpr::sub(
                random_formula(max_depth - 1, rng, constants, times), constants[cpick(rng)]);
        default:
            return ctmetric::LogicExpr::shift(
                times[tpick(rng)], random_formula(max_depth - 1, rng, constants, times));
    }
}

}  // namespace testsupport
