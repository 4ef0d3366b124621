#include "sitevec/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sitevec/errors.hpp"

namespace sitevec {

namespace {

constexpr double kPerturb = 1e-12;

// Basis arcs form a spanning tree over m source nodes (0..m-1) and n sink
// nodes (m..m+n-1).
struct Arc {
    std::uint32_t i, j;  // source index, sink index
    double flow;
};

}  // namespace

TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost) {
    const std::size_t m = supply.size(), n = demand.size();
    if (m == 0 || n == 0) throw std::invalid_argument("transport: empty marginal");
    if (cost.size() != m * n) throw std::invalid_argument("transport: cost size mismatch");
    double total_s = 0, total_d = 0, max_c = 0;
    for (double s : supply) {
        if (!(s > 0)) throw std::invalid_argument("transport: supplies must be positive");
        total_s += s;
    }
    for (double d : demand) {
        if (!(d > 0)) throw std::invalid_argument("transport: demands must be positive");
        total_d += d;
    }
    if (std::abs(total_s - total_d) > 1e-9)
        throw std::invalid_argument("transport: unbalanced marginals");
    for (double c : cost) {
        if (!std::isfinite(c)) throw numerical_error("transport: non-finite cost");
        max_c = std::max(max_c, std::abs(c));
    }

    // Northwest-corner start on perturbed marginals; the perturbation keeps
    // every basic flow strictly positive, which rules out cycling.
    std::vector<double> rs(supply.begin(), supply.end());
    std::vector<double> rd(demand.begin(), demand.end());
    for (auto& s : rs) s += kPerturb;
    rd[n - 1] += kPerturb * static_cast<double>(m);

    std::vector<Arc> basis;
    basis.reserve(m + n - 1);
    {
        std::size_t i = 0, j = 0;
        while (true) {
            double f = std::min(rs[i], rd[j]);
            basis.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), f});
            rs[i] -= f;
            rd[j] -= f;
            if (i == m - 1 && j == n - 1) break;
            if (i < m - 1 && (rs[i] <= rd[j] || j == n - 1))
                ++i;
            else
                ++j;
        }
    }

    const std::size_t nodes = m + n;
    const double tol = 1e-10 * (1.0 + max_c);
    std::vector<char> is_basic(m * n, 0);
    for (const Arc& a : basis) is_basic[a.i * n + a.j] = 1;

    std::vector<double> u(m), v(n);
    std::vector<char> known(nodes);
    std::vector<std::vector<std::uint32_t>> adj(nodes);  // arc indices per node
    std::vector<std::uint32_t> stack, parent_arc(nodes), parent_node(nodes);

    const std::size_t max_iters = 2000 + 200 * (m + n) * (m + n);
    for (std::size_t iter = 0;; ++iter) {
        if (iter >= max_iters)
            throw numerical_error("transport: iteration limit exceeded");

        for (auto& a : adj) a.clear();
        for (std::uint32_t idx = 0; idx < basis.size(); ++idx) {
            adj[basis[idx].i].push_back(idx);
            adj[m + basis[idx].j].push_back(idx);
        }

        // Duals from u_0 = 0 over the spanning tree: u_i + v_j = c_ij on basis.
        std::fill(known.begin(), known.end(), 0);
        known[0] = 1;
        u[0] = 0;
        stack.assign(1, 0);
        while (!stack.empty()) {
            std::uint32_t node = stack.back();
            stack.pop_back();
            for (std::uint32_t idx : adj[node]) {
                const Arc& a = basis[idx];
                std::uint32_t other = (node < m) ? m + a.j : a.i;
                if (known[other]) continue;
                known[other] = 1;
                if (other >= m)
                    v[other - m] = cost[a.i * n + a.j] - u[a.i];
                else
                    u[other] = cost[a.i * n + a.j] - v[a.j];
                stack.push_back(other);
            }
        }

        // Dantzig rule: most negative reduced cost enters.
        double best_r = -tol;
        std::size_t enter_i = m, enter_j = n;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (is_basic[i * n + j]) continue;
                double r = cost[i * n + j] - u[i] - v[j];
                if (r < best_r) {
                    best_r = r;
                    enter_i = i;
                    enter_j = j;
                }
            }
        if (enter_i == m) break;  // optimal

        // Tree path from source enter_i to sink m+enter_j closes the cycle.
        std::fill(known.begin(), known.end(), 0);
        known[enter_i] = 1;
        stack.assign(1, static_cast<std::uint32_t>(enter_i));
        while (!stack.empty()) {
            std::uint32_t node = stack.back();
            stack.pop_back();
            if (node == m + enter_j) break;
            for (std::uint32_t idx : adj[node]) {
                const Arc& a = basis[idx];
                std::uint32_t other = (node < m) ? m + a.j : a.i;
                if (known[other]) continue;
                known[other] = 1;
                parent_arc[other] = idx;
                parent_node[other] = node;
                stack.push_back(other);
            }
        }

        if (!known[m + enter_j])
            throw numerical_error("transport: basis lost connectivity");

        // Walk back sink -> source; odd path positions give up mass.
        std::vector<std::uint32_t> minus_arcs, plus_arcs;
        std::uint32_t node = static_cast<std::uint32_t>(m + enter_j);
        bool minus = true;
        while (node != enter_i) {
            std::uint32_t idx = parent_arc[node];
            (minus ? minus_arcs : plus_arcs).push_back(idx);
            node = parent_node[node];
            minus = !minus;
        }

        double theta = std::numeric_limits<double>::infinity();
        std::uint32_t leave = 0;
        for (std::uint32_t idx : minus_arcs)
            if (basis[idx].flow < theta) {
                theta = basis[idx].flow;
                leave = idx;
            }

        for (std::uint32_t idx : minus_arcs) basis[idx].flow -= theta;
        for (std::uint32_t idx : plus_arcs) basis[idx].flow += theta;
        is_basic[basis[leave].i * n + basis[leave].j] = 0;
        basis[leave] = {static_cast<std::uint32_t>(enter_i), static_cast<std::uint32_t>(enter_j),
                        theta};
        is_basic[enter_i * n + enter_j] = 1;
    }

    // Re-derive flows on the optimal tree from the unperturbed marginals by
    // leaf elimination; degenerate arcs come out as exact zeros.
    std::vector<double> balance(nodes);
    for (std::size_t i = 0; i < m; ++i) balance[i] = supply[i];
    for (std::size_t j = 0; j < n; ++j) balance[m + j] = demand[j];
    std::vector<std::uint32_t> degree(nodes, 0);
    for (auto& a : adj) a.clear();
    for (std::uint32_t idx = 0; idx < basis.size(); ++idx) {
        adj[basis[idx].i].push_back(idx);
        adj[m + basis[idx].j].push_back(idx);
        ++degree[basis[idx].i];
        ++degree[m + basis[idx].j];
    }
    std::vector<char> arc_done(basis.size(), 0);
    std::vector<std::uint32_t> leaves;
    for (std::uint32_t node = 0; node < nodes; ++node)
        if (degree[node] == 1) leaves.push_back(node);
    std::vector<double> final_flow(basis.size(), 0);
    while (!leaves.empty()) {
        std::uint32_t node = leaves.back();
        leaves.pop_back();
        std::uint32_t idx = basis.size();
        for (std::uint32_t cand : adj[node])
            if (!arc_done[cand]) {
                idx = cand;
                break;
            }
        if (idx == basis.size()) continue;  // last node: fully settled
        arc_done[idx] = 1;
        final_flow[idx] = std::max(0.0, balance[node]);
        std::uint32_t other = (node < m) ? m + basis[idx].j : basis[idx].i;
        balance[other] -= balance[node];
        balance[node] = 0;
        if (--degree[other] == 1) leaves.push_back(other);
        --degree[node];
    }

    TransportPlan plan;
    plan.objective = 0;
    for (std::uint32_t idx = 0; idx < basis.size(); ++idx) {
        double f = final_flow[idx];
        plan.objective += f * cost[basis[idx].i * n + basis[idx].j];
        if (f > 1e-12) plan.flows.push_back({basis[idx].i, basis[idx].j, f});
    }
    return plan;
}

}  // namespace sitevec
