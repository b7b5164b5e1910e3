#pragma once

#include <array>
#include <span>
#include <vector>

#include "rdent/residuals.hpp"

namespace rdent {

/// ∮_{∂K} ĝ_n(V|K, V|K⁻) dγ with the configured entropy numerical flux.
double entropy_flux_integral(const Discretization& d, int e, std::span<const double> u);

/// E = ∮ ĝ − Σ_σ V_σ Φ_σ over all entries of the base residual.
double entropy_defect(const Discretization& d, int e, std::span<const double> u, const ElementResidual& base);

struct Correction {
    double alpha = 0.0;
    std::array<double, kMaxLocalDofs> r{};
};

/// α = E / (Σ(V_σ − V̄)² + ε), r_σ = α (V_σ − V̄).
Correction correction(std::span<const double> V, double E, double epsilon);

/// θ h_K² Σ_e ∮_e [∇φ_σ]·[∇V^h] dγ over the interior faces of K.
ElementResidual filter_jump(const Discretization& d, int e, std::span<const double> u, double theta);
/// θ h_K ∮_K (a·∇φ_σ) τ_K (a·∇V^h) dx with a = ∂f/∂V.
ElementResidual filter_streamline(const Discretization& d, int e, std::span<const double> u, double theta);

/// Φ' = Φ + r + Ψ (r on the element's own DoFs).
ElementResidual corrected_residual(const ElementResidual& phi, const Correction& r, const ElementResidual& psi);

/// Σ_entries V(u_σ) Φ_σ
double entropy_production(const Discretization& d, std::span<const double> u, const ElementResidual& r);

struct ElementEntropyInfo {
    double defect = 0.0;      ///< E
    double alpha = 0.0;
    double production = 0.0;  ///< Σ V_σ Ψ_σ of the filter
};

/// Base residual, then correction (if enabled), then filter (if enabled).
ElementResidual element_residual(const Discretization& d, int e, std::span<const double> u,
                                 ElementEntropyInfo* info = nullptr);

struct EntropyCorrectionReport {
    std::vector<double> defect;
    std::vector<double> alpha;
    std::vector<double> production;
    std::vector<double> r;  ///< per DoF, summed over elements
};

EntropyCorrectionReport entropy_report(const Discretization& d, std::span<const double> u);

}  // namespace rdent
