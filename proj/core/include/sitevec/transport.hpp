#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sitevec {

struct TransportArc {
    std::uint32_t from;  // supply index
    std::uint32_t to;    // demand index
    double mass;
};

struct TransportPlan {
    std::vector<TransportArc> flows;  // strictly positive masses only
    double objective = 0;
};

// Exact solver for the dense balanced transportation problem:
//   minimize sum T_ij * cost_ij  s.t.  row sums = supply, column sums = demand,
//   T >= 0. cost is row-major, size supply.size() * demand.size().
// Supplies and demands must be strictly positive and balance within 1e-9.
// Degeneracy is broken by an infinitesimal supply perturbation; the returned
// flows are re-derived from the optimal basis against the unperturbed
// marginals, so plan feasibility holds to machine precision.
TransportPlan solve_transport(std::span<const double> supply, std::span<const double> demand,
                              std::span<const double> cost);

}  // namespace sitevec
