#pragma once

#include <array>
#include <vector>

#include "rdent/geometry.hpp"

namespace rdent {

class Mesh;

enum class BasisKind { lagrange, bezier };

constexpr int kMaxLocalDofs = 6;

int local_dof_count(int degree);

/// Shape values and derivatives with respect to the barycentric coordinates.
struct ShapeValues {
    int n = 0;
    std::array<double, kMaxLocalDofs> value{};
    std::array<Bary, kMaxLocalDofs> dlambda{};
};

ShapeValues lagrange_basis(int degree, const Bary& b);
/// Bernstein polynomials, same local ordering as the Lagrange points.
ShapeValues bezier_basis(int degree, const Bary& b);
ShapeValues evaluate_basis(BasisKind kind, int degree, const Bary& b);

/// Barycentric coordinates of the local Lagrange points.
std::vector<Bary> lagrange_points(int degree);

/// Weights are normalized to sum to one; multiply by |K| (or |e|).
struct QuadratureRule {
    std::vector<Bary> points;
    std::vector<double> weights;
};

/// 1D rule on [0,1].
struct EdgeRule {
    std::vector<double> points;
    std::vector<double> weights;
};

/// Centroid for degree 1, the degree-5 7-point rule for degree 2.
QuadratureRule volume_rule(int degree);
/// Edge-midpoint rule (exact for quadratics).
QuadratureRule midpoint_rule();
/// 2-point Gauss on [0,1].
EdgeRule edge_rule();

/// Shape values at a fixed set of reference points.
struct BasisTable {
    BasisKind kind = BasisKind::lagrange;
    int degree = 1;
    int n_dofs = 3;
    std::vector<Bary> points;
    std::vector<double> weights;
    std::vector<ShapeValues> shapes;

    BasisTable() = default;
    BasisTable(BasisKind kind, int degree, std::vector<Bary> points, std::vector<double> weights = {});

    double value(int q, int s) const { return shapes[q].value[s]; }
    /// Physical gradient of shape s at point q on element e.
    Vec2 gradient(const Mesh& mesh, int e, int q, int s) const;
};

/// Physical gradient from barycentric derivatives and the element's ∇λ.
Vec2 physical_gradient(const Bary& dlambda, const std::array<Vec2, 3>& grad_lambda);

/// Converts Lagrange point values of a quadratic to Bézier coefficients (and back).
std::array<double, kMaxLocalDofs> lagrange_to_bezier(int degree, const std::array<double, kMaxLocalDofs>& values);
std::array<double, kMaxLocalDofs> bezier_to_lagrange(int degree, const std::array<double, kMaxLocalDofs>& coeffs);

}  // namespace rdent
