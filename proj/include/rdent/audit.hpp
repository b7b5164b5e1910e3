#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rdent/solver.hpp"

namespace rdent {

using ScalarField = std::function<double(const Vec2&)>;

struct EntropySum {
    double interior = 0.0;
    double boundary = 0.0;
    double scale = 0.0;  ///< Σ |⟨V_σ, Φ_σ⟩|

    double total() const { return interior + boundary; }
};

/// Σ_σ Σ_K V_σ Φ'_σ^K + Σ_σ Σ_Γ V_σ Φ_σ^Γ with the scheme's residuals.
EntropySum entropy_residual_sum(const Discretization& d, std::span<const double> u);

struct ErrorNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

/// L1/L2 by the 7-point rule on every element, L∞ over DoF values.
ErrorNorms error_norms(const Discretization& d, std::span<const double> u, const ScalarField& exact);

/// log(e_i/e_{i+1}) / log(h_i/h_{i+1}); empty for fewer than two entries.
std::vector<double> slopes(std::span<const double> h, std::span<const double> err);

/// Element-wise L2 projection (7-point rule) into the discretization's space.
/// Meant for discontinuous spaces.
std::vector<double> l2_projection(const Discretization& d, const ScalarField& fn);

/// E(u, φ) = Σ_σ φ_σ R_σ(u) with φ interpolated into the space.
double truncation_error(const Discretization& d, std::span<const double> u, const ScalarField& phi);

struct IdentityCheck {
    double lhs = 0.0;  ///< Σ_σ v_σ R_σ
    double rhs = 0.0;  ///< face-jump route
    double scale = 0.0;
    double defect() const { return lhs - rhs; }
};

/// Both sides of the global Galerkin identity: Σ_σ v_σ R_σ versus
/// −∮_Ω ∇v·f + ∮_∂Ω v f̂(u,u_b) + Σ_e ∮_e [v] f̂
///   + Σ_K (1/#K) Σ_{σ,σ'} (v_σ − v_σ')(Φ_σ − Φ_σ^Gal).
IdentityCheck identity_check(const Discretization& d, std::span<const double> u, std::span<const double> v);

/// Evaluates the field u of `from` and interpolates it into the space of `to`.
std::vector<double> transfer(const Discretization& from, std::span<const double> u, const Discretization& to);

struct MeshLevel {
    int n = 0;  ///< cells per side
    double h = 0.0;
    int n_dofs = 0;
};

struct ConvergenceRow {
    MeshLevel level;
    ErrorNorms err;
    bool converged = false;
    int iterations = 0;
    double seconds = 0.0;
};

struct StudySetup {
    ProblemSpec problem;
    SchemeConfig scheme;
    int degree = 1;
    Continuity continuity = Continuity::continuous;
    Diagonal diagonal = Diagonal::fixed;
    /// Vertex shift passed to build_rect_mesh, in cell widths.
    double perturbation = 0.0;
    MarchConfig march;
    /// Start each level from the previous level's solution instead of the
    /// problem's initial guess.
    bool nested_start = false;
};

/// Steady solve on each N×N split-square mesh, error against the exact oracle.
std::vector<ConvergenceRow> convergence_study(const StudySetup& setup, const std::vector<int>& cells);

struct ProbeRow {
    MeshLevel level;
    double value = 0.0;
};

/// |E(π_h u, φ)| on each mesh.
std::vector<ProbeRow> truncation_probe(const StudySetup& setup, const std::vector<int>& cells, const ScalarField& phi);

/// max_K |E_K| of the base scheme on the element-wise L2 projection of the
/// exact solution (discontinuous space, so traces jump).
std::vector<ProbeRow> entropy_defect_study(const StudySetup& setup, const std::vector<int>& cells);

}  // namespace rdent
