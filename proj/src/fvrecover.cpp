#include "rdent/fvrecover.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdent {

double FluxGraph::flux_between(int i, int j) const {
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (edges[k] == std::pair{i, j}) return flux[k];
        if (edges[k] == std::pair{j, i}) return -flux[k];
    }
    return 0.0;
}

std::vector<double> FluxGraph::node_sums() const {
    std::vector<double> s(n_nodes, 0.0);
    for (std::size_t k = 0; k < edges.size(); ++k) {
        s[edges[k].first] += flux[k];
        s[edges[k].second] -= flux[k];
    }
    return s;
}

FluxGraph p1_graph() { return {3, {{0, 1}, {0, 2}, {1, 2}}, {}}; }

FluxGraph p2_graph() {
    return {6, {{0, 3}, {1, 3}, {1, 4}, {2, 4}, {2, 5}, {0, 5}, {3, 4}, {4, 5}, {3, 5}}, {}};
}

Vec2 median_normal(const std::array<Vec2, 3>& x, int i, int j) {
    const Vec2 m = 0.5 * (x[i] + x[j]);
    const Vec2 g = (1.0 / 3.0) * (x[0] + x[1] + x[2]);
    const Vec2 d = g - m;
    Vec2 n{d.y, -d.x};
    if (dot(n, x[j] - m) < 0) n = -n;
    return n;
}

std::array<double, 3> fv_as_rd(const std::array<Vec2, 3>& x, const std::array<double, 3>& u, const FluxFunction& flux,
                               const TwoPointFlux& nf) {
    std::array<double, 3> phi{};
    for (int i = 0; i < 3; ++i) {
        const Vec2 fi = flux.f(u[i]);
        for (int j = 0; j < 3; ++j) {
            if (j == i) continue;
            const Vec2 n = median_normal(x, i, j);
            phi[i] += nf(u[i], u[j], n) - dot(fi, n);
        }
    }
    return phi;
}

namespace {

void check_zero_sum(std::span<const double> psi) {
    double s = 0.0, scale = 0.0;
    for (double p : psi) {
        s += p;
        scale = std::max(scale, std::abs(p));
    }
    if (std::abs(s) > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument("flux recovery: residuals must sum to zero");
}

}  // namespace

FluxGraph recover_p1(std::span<const double> psi) {
    if (psi.size() != 3) throw std::invalid_argument("recover_p1: needs 3 residuals");
    check_zero_sum(psi);
    FluxGraph g = p1_graph();
    for (const auto& [i, j] : g.edges) g.flux.push_back((psi[i] - psi[j]) / 3.0);
    return g;
}

FluxGraph recover_laplacian(std::span<const double> psi, FluxGraph g) {
    if (static_cast<int>(psi.size()) != g.n_nodes) throw std::invalid_argument("recover_laplacian: size mismatch");
    check_zero_sum(psi);
    const int n = g.n_nodes;
    // connectivity
    std::vector<int> comp(n, -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        for (const auto& [i, j] : g.edges) {
            const int b = i == a ? j : (j == a ? i : -1);
            if (b >= 0 && comp[b] < 0) {
                comp[b] = 0;
                stack.push_back(b);
            }
        }
    }
    if (std::find(comp.begin(), comp.end(), -1) != comp.end())
        throw std::invalid_argument("recover_laplacian: graph is not connected");

    // L + 11ᵀ/n is invertible on a connected graph and maps the zero-mean
    // solution of L p = Ψ to Ψ.
    Eigen::MatrixXd L = Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    for (const auto& [i, j] : g.edges) {
        L(i, i) += 1;
        L(j, j) += 1;
        L(i, j) -= 1;
        L(j, i) -= 1;
    }
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = psi[i];
    const Eigen::VectorXd p = L.ldlt().solve(b);
    g.flux.clear();
    for (const auto& [i, j] : g.edges) g.flux.push_back(p(i) - p(j));
    return g;
}

namespace {

struct Term {
    double c;
    int i;
    int j;
};

// 1-based as printed: c (Ψ_i − Ψ_j)
const std::vector<std::vector<Term>>& p2_table() {
    static const std::vector<std::vector<Term>> t = {
        {{1.0 / 12, 1, 4}, {1.0 / 36, 6, 5}, {7.0 / 36, 1, 2}, {5.0 / 36, 3, 1}},  // 14
        {{1.0 / 12, 4, 1}, {5.0 / 36, 5, 1}, {7.0 / 36, 6, 1}, {1.0 / 36, 3, 2}},  // 16
        {{2.0 / 9, 2, 6}, {1.0 / 9, 3, 5}},                                        // 46
        {{2.0 / 9, 5, 2}, {1.0 / 9, 5, 1}},                                        // 54
        {{7.0 / 36, 2, 3}, {5.0 / 36, 1, 3}, {1.0 / 12, 6, 3}, {1.0 / 36, 5, 4}},  // 42
        {{1.0 / 36, 2, 1}, {5.0 / 36, 3, 5}, {7.0 / 36, 3, 5}, {1.0 / 12, 3, 6}},  // 25
        {{1.0 / 36, 1, 6}, {5.0 / 36, 3, 5}, {7.0 / 36, 4, 5}, {1.0 / 12, 2, 5}},  // 53
        {{1.0 / 36, 4, 3}, {5.0 / 36, 5, 1}, {7.0 / 36, 5, 6}, {1.0 / 12, 5, 2}},  // 63
        {{1.0 / 9, 1, 3}, {2.0 / 9, 6, 4}},                                        // 65
    };
    return t;
}

}  // namespace

std::vector<std::pair<int, int>> p2_table_edges() {
    return {{0, 3}, {0, 5}, {3, 5}, {4, 3}, {3, 1}, {1, 4}, {4, 2}, {5, 2}, {5, 4}};
}

std::array<double, 9> p2_table_fluxes(std::span<const double> psi) {
    if (psi.size() != 6) throw std::invalid_argument("p2 table: needs 6 residuals");
    std::array<double, 9> f{};
    const auto& t = p2_table();
    for (std::size_t k = 0; k < t.size(); ++k)
        for (const auto& term : t[k]) f[k] += term.c * (psi[term.i - 1] - psi[term.j - 1]);
    return f;
}

P2TableCheck verify_p2_table(std::span<const double> psi) {
    const auto f = p2_table_fluxes(psi);
    const auto edges = p2_table_edges();
    P2TableCheck best;
    best.max_defect = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << 9); ++mask) {
        std::array<double, 6> s{};
        for (int k = 0; k < 9; ++k) {
            const double v = (mask >> k) & 1u ? -f[k] : f[k];
            s[edges[k].first] += v;
            s[edges[k].second] -= v;
        }
        P2TableCheck c;
        c.sign_mask = mask;
        for (int i = 0; i < 6; ++i) {
            c.defect[i] = s[i] - psi[i];
            c.max_defect = std::max(c.max_defect, std::abs(c.defect[i]));
        }
        if (c.max_defect < best.max_defect) best = c;
    }
    return best;
}

}  // namespace rdent
