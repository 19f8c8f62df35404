#pragma once

#include <cstddef>
#include <vector>

#include "ctmetric/model.hpp"
#include "ctmetric/pseudometric.hpp"

namespace ctmetric {

/**
 * Optimal coupling between two discrete distributions together with the
 * matching dual witness.
 *
 * `plan` is |support(P)| x |support(Q)| row-major. `potentials` is one
 * function h on all points of the cost table with |h(i) - h(j)| <= m(i,j)
 * and |sum h dP - sum h dQ| = cost.
 */
struct TransportPlan {
    std::vector<std::size_t> row_points;  // support of P, as cost-table indices
    std::vector<std::size_t> col_points;  // support of Q
    std::vector<double> plan;
    double cost = 0.0;
    std::vector<double> potentials;

    double plan_at(std::size_t i, std::size_t j) const { return plan[i * col_points.size() + j]; }
};

/**
 * Exact optimal transport between P and Q under the pseudometric cost m.
 * P and Q index into the points of m. Solved with the transportation
 * simplex; the plan is a vertex of the coupling polytope and the potentials
 * come from the final basis.
 */
TransportPlan kantorovich(const PseudometricTable& m, const DiscreteDistribution& P,
                          const DiscreteDistribution& Q);

/// Optimal cost only; same optimum as kantorovich without materializing
/// plan and potentials.
double kantorovich_cost(const PseudometricTable& m, const DiscreteDistribution& P,
                        const DiscreteDistribution& Q);

/// True iff the plan's row sums match P and column sums match Q within tol.
bool verify_coupling(const TransportPlan& plan, const DiscreteDistribution& P,
                     const DiscreteDistribution& Q, double tol = 1e-9);

/**
 * Optimal transport cost between two atomic measures on the real line under
 * the cost |a - b|, via the CDF-difference integral. Used for particle
 * clouds, where building a dense cost table would be wasteful; agrees with
 * kantorovich on the induced cost table.
 */
double wasserstein_1d(const std::vector<double>& positions_p, const std::vector<double>& weights_p,
                      const std::vector<double>& positions_q, const std::vector<double>& weights_q);

}  // namespace ctmetric
