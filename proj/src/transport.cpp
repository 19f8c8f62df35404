#include "ctmetric/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ctmetric/errors.hpp"

namespace ctmetric {

namespace {

constexpr double kReducedCostEps = 1e-12;

// Transportation simplex on the dense bipartite problem
//   min sum_ij f_ij c_ij   s.t.  sum_j f_ij = a_i, sum_i f_ij = b_j, f >= 0.
// The basis is a spanning tree over m row nodes and n column nodes; node
// potentials are recomputed from the tree at every pivot. Entering arc is
// the most negative reduced cost (lexicographic ties), switching to Bland's
// rule after a pivot budget so the iteration cannot cycle.
class TransportationSimplex {
  public:
    struct Arc {
        int i, j;
        double flow;
    };

    void solve(int m, int n, const std::vector<double>& cost, const std::vector<double>& supply,
               const std::vector<double>& demand) {
        m_ = m;
        n_ = n;
        cost_ = &cost;
        basis_.clear();
        basis_.reserve(m + n - 1);

        // Northwest-corner start: exactly m + n - 1 arcs, zero flows allowed.
        a_ = supply;
        b_ = demand;
        int i = 0, j = 0;
        while (static_cast<int>(basis_.size()) < m + n - 1) {
            const double f = std::min(a_[i], b_[j]);
            basis_.push_back({i, j, f});
            a_[i] -= f;
            b_[j] -= f;
            if (j == n - 1)
                ++i;
            else if (i == m - 1)
                ++j;
            else if (a_[i] <= b_[j])
                ++i;
            else
                ++j;
        }

        const int nodes = m + n;
        u_.assign(m, 0.0);
        v_.assign(n, 0.0);
        parent_.assign(nodes, -1);
        parent_arc_.assign(nodes, -1);
        depth_.assign(nodes, 0);
        adj_head_.assign(nodes + 1, 0);
        adj_arc_.assign(2 * (nodes - 1), 0);
        order_.reserve(nodes);

        const long long bland_after = 64 + 16LL * m * n;
        const long long hard_cap = 1024 + 4096LL * (m + n) + 64LL * m * n;
        for (long long pivot = 0;; ++pivot) {
            if (pivot > hard_cap)
                throw std::runtime_error("transport: simplex exceeded its pivot budget");
            compute_potentials();
            const bool bland = pivot >= bland_after;
            int ei = -1, ej = -1;
            double best = -kReducedCostEps;
            for (int r = 0; r < m; ++r) {
                const double ur = u_[r];
                for (int c = 0; c < n; ++c) {
                    const double rc = (*cost_)[r * n + c] - ur - v_[c];
                    if (rc < best) {
                        best = rc;
                        ei = r;
                        ej = c;
                        if (bland) break;  // first violation is enough
                    }
                }
                if (bland && ei >= 0) break;
            }
            if (ei < 0) break;  // optimal
            pivot_on(ei, ej);
        }
        compute_potentials();
    }

    const std::vector<Arc>& basis() const { return basis_; }
    const std::vector<double>& row_potentials() const { return u_; }
    const std::vector<double>& col_potentials() const { return v_; }

    double objective() const {
        double total = 0.0;
        for (const Arc& a : basis_) total += a.flow * (*cost_)[a.i * n_ + a.j];
        return total;
    }

  private:
    void compute_potentials() {
        const int nodes = m_ + n_;
        // CSR adjacency over the current basis tree.
        std::fill(adj_head_.begin(), adj_head_.begin() + nodes + 1, 0);
        for (const Arc& a : basis_) {
            ++adj_head_[a.i + 1];
            ++adj_head_[m_ + a.j + 1];
        }
        for (int k = 0; k < nodes; ++k) adj_head_[k + 1] += adj_head_[k];
        fill_pos_.assign(adj_head_.begin(), adj_head_.end() - 1);
        for (int k = 0; k < static_cast<int>(basis_.size()); ++k) {
            adj_arc_[fill_pos_[basis_[k].i]++] = k;
            adj_arc_[fill_pos_[m_ + basis_[k].j]++] = k;
        }

        order_.clear();
        order_.push_back(0);
        parent_[0] = -1;
        parent_arc_[0] = -1;
        depth_[0] = 0;
        u_[0] = 0.0;
        visited_.assign(nodes, false);
        visited_[0] = true;
        for (std::size_t q = 0; q < order_.size(); ++q) {
            const int node = order_[q];
            for (int p = adj_head_[node]; p < adj_head_[node + 1]; ++p) {
                const int arc = adj_arc_[p];
                const int other = (node == basis_[arc].i) ? m_ + basis_[arc].j : basis_[arc].i;
                if (visited_[other]) continue;
                visited_[other] = true;
                parent_[other] = node;
                parent_arc_[other] = arc;
                depth_[other] = depth_[node] + 1;
                const double c = (*cost_)[basis_[arc].i * n_ + basis_[arc].j];
                if (other >= m_)
                    v_[other - m_] = c - u_[basis_[arc].i];
                else
                    u_[other] = c - v_[basis_[arc].j];
                order_.push_back(other);
            }
        }
        if (static_cast<int>(order_.size()) != nodes)
            throw std::runtime_error("transport: basis is not a spanning tree");
    }

    void pivot_on(int ei, int ej) {
        // Cycle = entering arc + tree path between its endpoints. Signs
        // alternate along the cycle: arcs traversed row -> column gain flow,
        // column -> row lose flow.
        cycle_nodes_.clear();
        int a = ei, b = m_ + ej;
        int da = depth_[a], db = depth_[b];
        up_a_.clear();
        up_b_.clear();
        while (da > db) {
            up_a_.push_back(a);
            a = parent_[a];
            --da;
        }
        while (db > da) {
            up_b_.push_back(b);
            b = parent_[b];
            --db;
        }
        while (a != b) {
            up_a_.push_back(a);
            up_b_.push_back(b);
            a = parent_[a];
            b = parent_[b];
        }
        const int lca = a;

        // Node sequence around the cycle, starting with the entering row.
        cycle_nodes_.push_back(ei);
        cycle_nodes_.push_back(m_ + ej);
        for (std::size_t k = 0; k < up_b_.size(); ++k)
            cycle_nodes_.push_back(k + 1 < up_b_.size() ? up_b_[k + 1] : lca);
        for (std::size_t k = up_a_.size(); k-- > 1;) cycle_nodes_.push_back(up_a_[k]);
        if (cycle_nodes_.back() == cycle_nodes_.front()) cycle_nodes_.pop_back();
        // Consecutive pairs (cyclic) are the cycle arcs; pair 0 is entering.

        double step = std::numeric_limits<double>::infinity();
        int leaving = -1;
        const std::size_t len = cycle_nodes_.size();
        for (std::size_t k = 1; k < len; ++k) {
            const int from = cycle_nodes_[k];
            const int to = cycle_nodes_[(k + 1) % len];
            const int child = (parent_[from] == to) ? from : to;
            const int arc = parent_arc_[child];
            const bool gains = from < m_;  // row -> column traversal
            if (!gains) {
                const double f = basis_[arc].flow;
                const long long id = static_cast<long long>(basis_[arc].i) * n_ + basis_[arc].j;
                const long long lid =
                    leaving < 0 ? -1
                                : static_cast<long long>(basis_[leaving].i) * n_ + basis_[leaving].j;
                if (f < step - 1e-15 || (std::abs(f - step) <= 1e-15 && (leaving < 0 || id < lid))) {
                    step = std::min(step, f);
                    leaving = arc;
                }
            }
        }
        if (leaving < 0) throw std::runtime_error("transport: unbounded pivot");

        for (std::size_t k = 1; k < len; ++k) {
            const int from = cycle_nodes_[k];
            const int to = cycle_nodes_[(k + 1) % len];
            const int child = (parent_[from] == to) ? from : to;
            const int arc = parent_arc_[child];
            basis_[arc].flow += (from < m_) ? step : -step;
        }
        basis_[leaving] = {ei, ej, step};
    }

    int m_ = 0, n_ = 0;
    const std::vector<double>* cost_ = nullptr;
    std::vector<double> a_, b_;
    std::vector<Arc> basis_;
    std::vector<double> u_, v_;
    std::vector<int> parent_, parent_arc_, depth_, order_, fill_pos_;
    std::vector<int> adj_head_, adj_arc_;
    std::vector<int> up_a_, up_b_, cycle_nodes_;
    std::vector<bool> visited_;
};

struct SolveResult {
    std::vector<double> plan;  // |P| x |Q| row-major
    double cost = 0.0;
    std::vector<double> col_duals;  // v over Q's support
};

void check_inputs(const PseudometricTable& m, const DiscreteDistribution& P,
                  const DiscreteDistribution& Q) {
    if (P.support.empty() || Q.support.empty())
        throw precondition_error("transport: empty-support distribution");
    for (std::size_t s : P.support)
        if (s >= m.size())
            throw precondition_error("transport: P support index " + std::to_string(s) +
                                     " outside cost table of size " + std::to_string(m.size()));
    for (std::size_t s : Q.support)
        if (s >= m.size())
            throw precondition_error("transport: Q support index " + std::to_string(s) +
                                     " outside cost table of size " + std::to_string(m.size()));
}

SolveResult solve_transport(const PseudometricTable& m, const DiscreteDistribution& P,
                            const DiscreteDistribution& Q, bool want_plan) {
    const int rows = static_cast<int>(P.support.size());
    const int cols = static_cast<int>(Q.support.size());
    SolveResult out;

    // Single-row / single-column problems have a unique coupling.
    if (rows == 1) {
        out.plan = Q.weights;
        out.col_duals.resize(cols);
        double cost = 0.0;
        for (int j = 0; j < cols; ++j) {
            out.col_duals[j] = m(P.support[0], Q.support[j]);
            cost += Q.weights[j] * out.col_duals[j];
        }
        out.cost = cost;
        return out;
    }
    if (cols == 1) {
        out.plan = P.weights;
        double cost = 0.0;
        for (int i = 0; i < rows; ++i) cost += P.weights[i] * m(P.support[i], Q.support[0]);
        out.cost = cost;
        out.col_duals.assign(1, 0.0);
        return out;
    }

    thread_local std::vector<double> cost_buf;
    cost_buf.resize(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            cost_buf[static_cast<std::size_t>(i) * cols + j] = m(P.support[i], Q.support[j]);

    thread_local TransportationSimplex simplex;
    simplex.solve(rows, cols, cost_buf, P.weights, Q.weights);

    out.cost = simplex.objective();
    out.col_duals = simplex.col_potentials();
    if (want_plan) {
        out.plan.assign(static_cast<std::size_t>(rows) * cols, 0.0);
        for (const auto& arc : simplex.basis())
            out.plan[static_cast<std::size_t>(arc.i) * cols + arc.j] = std::max(arc.flow, 0.0);
    }
    return out;
}

}  // namespace

TransportPlan kantorovich(const PseudometricTable& m, const DiscreteDistribution& P,
                          const DiscreteDistribution& Q) {
    P.validate();
    Q.validate();
    check_inputs(m, P, Q);

    SolveResult r = solve_transport(m, P, Q, /*want_plan=*/true);

    TransportPlan plan;
    plan.row_points = P.support;
    plan.col_points = Q.support;
    plan.plan = std::move(r.plan);
    plan.cost = std::clamp(r.cost, 0.0, 1.0);

    // One Lipschitz witness on the whole ground set, built from the column
    // duals: h(z) = min_j m(z, q_j) - v_j. The triangle inequality of m makes
    // h 1-Lipschitz, and h attains the optimal dual value.
    plan.potentials.resize(m.size());
    double h_min = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < m.size(); ++z) {
        double h = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < Q.support.size(); ++j)
            h = std::min(h, m(z, Q.support[j]) - r.col_duals[j]);
        plan.potentials[z] = h;
        h_min = std::min(h_min, h);
    }
    for (double& h : plan.potentials) h -= h_min;  // shift into [0,1]
    return plan;
}

double kantorovich_cost(const PseudometricTable& m, const DiscreteDistribution& P,
                        const DiscreteDistribution& Q) {
    check_inputs(m, P, Q);
    return std::clamp(solve_transport(m, P, Q, /*want_plan=*/false).cost, 0.0, 1.0);
}

bool verify_coupling(const TransportPlan& plan, const DiscreteDistribution& P,
                     const DiscreteDistribution& Q, double tol) {
    const std::size_t rows = plan.row_points.size();
    const std::size_t cols = plan.col_points.size();
    if (rows != P.support.size() || cols != Q.support.size() || plan.plan.size() != rows * cols)
        throw precondition_error("verify_coupling: plan shape does not match the distributions");
    for (std::size_t i = 0; i < rows; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) sum += plan.plan_at(i, j);
        if (std::abs(sum - P.weights[i]) > tol) return false;
    }
    for (std::size_t j = 0; j < cols; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < rows; ++i) sum += plan.plan_at(i, j);
        if (std::abs(sum - Q.weights[j]) > tol) return false;
    }
    return true;
}

double wasserstein_1d(const std::vector<double>& positions_p, const std::vector<double>& weights_p,
                      const std::vector<double>& positions_q,
                      const std::vector<double>& weights_q) {
    struct Event {
        double pos;
        double dp;
        double dq;
    };
    std::vector<Event> events;
    events.reserve(positions_p.size() + positions_q.size());
    for (std::size_t k = 0; k < positions_p.size(); ++k)
        events.push_back({positions_p[k], weights_p[k], 0.0});
    for (std::size_t k = 0; k < positions_q.size(); ++k)
        events.push_back({positions_q[k], 0.0, weights_q[k]});
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.pos < b.pos; });

    // integral of |F_P - F_Q| over the line
    double total = 0.0;
    double cdf_gap = 0.0;
    double prev = 0.0;
    bool first = true;
    for (const Event& e : events) {
        if (!first) total += std::abs(cdf_gap) * (e.pos - prev);
        cdf_gap += e.dp - e.dq;
        prev = e.pos;
        first = false;
    }
    return total;
}

}  // namespace ctmetric
