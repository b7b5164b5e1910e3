#pragma once

#include <array>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rdent/geometry.hpp"
#include "rdent/problems.hpp"

namespace rdent {

/// Element-local graph with one antisymmetric flux per undirected edge.
/// flux[k] is the flux from edges[k].first to edges[k].second.
struct FluxGraph {
    int n_nodes = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<double> flux;

    /// f̂_{ij}, negated when the stored edge is (j, i); 0 if not adjacent.
    double flux_between(int i, int j) const;
    /// Σ_{j ~ i} f̂_{ij} for every node.
    std::vector<double> node_sums() const;
};

/// Complete graph on the three P1 vertices.
FluxGraph p1_graph();
/// Sub-triangulation graph of a P2 element (0-based local DoFs, midpoints 3,4,5 on
/// edges (0,1), (1,2), (2,0)).
FluxGraph p2_graph();

/// Two-point flux f̂(uL, uR, n) with scaled normal n.
using TwoPointFlux = std::function<double(double, double, const Vec2&)>;

/// Vertex-centred finite volume on the median dual of one P1 triangle written
/// as residuals: Φ_i = Σ_j [f̂(u_i, u_j, ν_ij) − f(u_i)·ν_ij], ν_ij the outward
/// scaled normal of the median segment between the sub-cells of i and j.
std::array<double, 3> fv_as_rd(const std::array<Vec2, 3>& vertices, const std::array<double, 3>& u,
                               const FluxFunction& flux, const TwoPointFlux& numerical_flux);

/// Outward scaled normal of sub-cell i across its median segment shared with sub-cell j.
Vec2 median_normal(const std::array<Vec2, 3>& vertices, int i, int j);

/// f̂_{σσ'} = (Ψ_σ − Ψ_σ')/3.
FluxGraph recover_p1(std::span<const double> psi);
/// Minimum-norm fluxes f̂_{σσ'} = p_σ − p_σ' with L p = Ψ.
FluxGraph recover_laplacian(std::span<const double> psi, FluxGraph graph);

struct P2TableCheck {
    std::array<double, 6> defect{};  ///< node sum of the printed fluxes minus Ψ_σ
    double max_defect = 0.0;
    unsigned sign_mask = 0;  ///< bit k set: edge k of p2_table_edges() taken with flipped sign
};

/// Edges of the printed P2 formulas in their order (f̂_14, f̂_16, f̂_46, f̂_54,
/// f̂_42, f̂_25, f̂_53, f̂_63, f̂_65), 0-based.
std::vector<std::pair<int, int>> p2_table_edges();
/// Printed P2 flux formulas evaluated on Ψ.
std::array<double, 9> p2_table_fluxes(std::span<const double> psi);
/// Node defects of the printed table under the best of the 2^9 edge sign choices.
P2TableCheck verify_p2_table(std::span<const double> psi);

}  // namespace rdent
