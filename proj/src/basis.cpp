#include "rdent/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rdent/mesh.hpp"

namespace rdent {

namespace {

void check_degree(int degree) {
    if (degree != 1 && degree != 2) throw std::invalid_argument("basis: degree must be 1 or 2");
}

}  // namespace

int local_dof_count(int degree) {
    check_degree(degree);
    return (degree + 1) * (degree + 2) / 2;
}

ShapeValues lagrange_basis(int degree, const Bary& b) {
    check_degree(degree);
    ShapeValues s;
    if (degree == 1) {
        s.n = 3;
        for (int l = 0; l < 3; ++l) {
            s.value[l] = b[l];
            s.dlambda[l][l] = 1.0;
        }
        return s;
    }
    s.n = 6;
    for (int l = 0; l < 3; ++l) {
        s.value[l] = b[l] * (2.0 * b[l] - 1.0);
        s.dlambda[l][l] = 4.0 * b[l] - 1.0;
    }
    for (int m = 0; m < 3; ++m) {
        const int i = m, j = (m + 1) % 3;
        s.value[3 + m] = 4.0 * b[i] * b[j];
        s.dlambda[3 + m][i] = 4.0 * b[j];
        s.dlambda[3 + m][j] = 4.0 * b[i];
    }
    return s;
}

ShapeValues bezier_basis(int degree, const Bary& b) {
    check_degree(degree);
    if (degree == 1) return lagrange_basis(1, b);
    ShapeValues s;
    s.n = 6;
    for (int l = 0; l < 3; ++l) {
        s.value[l] = b[l] * b[l];
        s.dlambda[l][l] = 2.0 * b[l];
    }
    for (int m = 0; m < 3; ++m) {
        const int i = m, j = (m + 1) % 3;
        s.value[3 + m] = 2.0 * b[i] * b[j];
        s.dlambda[3 + m][i] = 2.0 * b[j];
        s.dlambda[3 + m][j] = 2.0 * b[i];
    }
    return s;
}

ShapeValues evaluate_basis(BasisKind kind, int degree, const Bary& b) {
    return kind == BasisKind::lagrange ? lagrange_basis(degree, b) : bezier_basis(degree, b);
}

std::vector<Bary> lagrange_points(int degree) {
    check_degree(degree);
    std::vector<Bary> p{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    if (degree == 2) {
        p.push_back({0.5, 0.5, 0});
        p.push_back({0, 0.5, 0.5});
        p.push_back({0.5, 0, 0.5});
    }
    return p;
}

QuadratureRule volume_rule(int degree) {
    check_degree(degree);
    if (degree == 1) return {{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {1.0}};
    QuadratureRule r;
    r.points.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    r.weights.push_back(0.225);
    const std::pair<double, double> orbits[] = {{0.797426985353087, 0.125939180544827},
                                                {0.059715871789770, 0.132394152788506}};
    for (const auto& [a, w] : orbits) {
        const double b = 0.5 * (1.0 - a);
        r.points.push_back({a, b, b});
        r.points.push_back({b, a, b});
        r.points.push_back({b, b, a});
        for (int k = 0; k < 3; ++k) r.weights.push_back(w);
    }
    return r;
}

QuadratureRule midpoint_rule() {
    return {{{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
}

EdgeRule edge_rule() {
    const double c = 0.5 / std::sqrt(3.0);
    return {{0.5 - c, 0.5 + c}, {0.5, 0.5}};
}

Vec2 physical_gradient(const Bary& d, const std::array<Vec2, 3>& g) {
    return d[0] * g[0] + d[1] * g[1] + d[2] * g[2];
}

BasisTable::BasisTable(BasisKind k, int deg, std::vector<Bary> pts, std::vector<double> w)
    : kind(k), degree(deg), n_dofs(local_dof_count(deg)), points(std::move(pts)), weights(std::move(w)) {
    shapes.reserve(points.size());
    for (const auto& p : points) shapes.push_back(evaluate_basis(kind, degree, p));
}

Vec2 BasisTable::gradient(const Mesh& mesh, int e, int q, int s) const {
    return physical_gradient(shapes[q].dlambda[s], {mesh.grad_lambda(e, 0), mesh.grad_lambda(e, 1), mesh.grad_lambda(e, 2)});
}

std::array<double, kMaxLocalDofs> lagrange_to_bezier(int degree, const std::array<double, kMaxLocalDofs>& u) {
    check_degree(degree);
    auto c = u;
    if (degree == 2)
        for (int m = 0; m < 3; ++m) c[3 + m] = 2.0 * u[3 + m] - 0.5 * (u[m] + u[(m + 1) % 3]);
    return c;
}

std::array<double, kMaxLocalDofs> bezier_to_lagrange(int degree, const std::array<double, kMaxLocalDofs>& c) {
    check_degree(degree);
    auto u = c;
    if (degree == 2)
        for (int m = 0; m < 3; ++m) u[3 + m] = 0.25 * (c[m] + c[(m + 1) % 3]) + 0.5 * c[3 + m];
    return u;
}

}  // namespace rdent
