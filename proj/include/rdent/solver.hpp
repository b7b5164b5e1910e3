#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rdent/entropy.hpp"
#include "rdent/residuals.hpp"

namespace rdent {

enum class VariableTag { conserved, entropy };

struct StateField {
    std::vector<double> values;
    VariableTag tag = VariableTag::conserved;
};

/// Side products of one assembly.
struct AssemblyStats {
    double entropy_interior = 0.0;  ///< Σ_K Σ_σ V_σ Φ'_σ^K
    double entropy_boundary = 0.0;  ///< Σ_Γ Σ_σ V_σ Φ_σ^Γ
    double entropy_scale = 0.0;     ///< Σ |V_σ Φ_σ| over all entries
    double boundary_flux = 0.0;     ///< Σ_Γ ∮ f̂(u, u_b) dγ

    double entropy_total() const { return entropy_interior + entropy_boundary; }
};

/// R_σ = Σ_K Φ'_σ^K + Σ_Γ Φ_σ^Γ, accumulated in element order.
void assemble(const Discretization& d, std::span<const double> u, std::vector<double>& R,
              AssemblyStats* stats = nullptr, std::vector<ElementEntropyInfo>* info = nullptr);
std::vector<double> assemble(const Discretization& d, std::span<const double> u);

/// |C_σ| = Σ_{K∋σ} |K| / #K.
std::vector<double> dual_volumes(const Mesh& mesh, const DofMap& dofmap);

/// u_σ ← u_σ − Δt R_σ / |C_σ|. Throws DomainError naming the DoF if the
/// result is inadmissible; u is left unchanged in that case.
void euler_step(std::vector<double>& u, std::span<const double> R, double dt, std::span<const double> C,
                const FluxFunction& flux);

/// cfl · min_K h_K / ((2k+1) ā_K), ā_K the largest |a| over the element DoFs.
double stable_dt(const Discretization& d, std::span<const double> u, double cfl);

enum class MarchMode { automatic, steady, unsteady };

struct MarchConfig {
    double cfl = 0.3;
    double t_end = 0.0;  ///< unsteady; 0 takes the problem's default
    double steady_tol = 1e-8;
    int max_iters = 200000;
    MarchMode mode = MarchMode::automatic;
    /// Steady mode: use the local Δt of each DoF instead of the global minimum.
    bool local_time_step = false;
    /// Steady mode: stop when ‖R‖∞ ≤ steady_tol · reference; ‖R⁰‖∞ when ≤ 0.
    double residual_reference = 0.0;
};

struct HistoryRow {
    int step = 0;
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;                  ///< Σ |C_σ| u_σ before the step
    double entropy_residual_sum = 0.0;  ///< interior + boundary, before the step
    double entropy_scale = 0.0;
    double res_inf = 0.0;
    double mass_drift = 0.0;  ///< M^{n+1} − M^n + Δt Σ_Γ ∮ f̂
};

struct MarchResult {
    std::vector<double> state;
    std::vector<HistoryRow> history;
    bool converged = false;
    int steps = 0;
    double time = 0.0;
};

using StepObserver = std::function<void(const HistoryRow&)>;

MarchResult march(const Discretization& d, std::vector<double> u0, const MarchConfig& config,
                  const StepObserver& observer = {});

}  // namespace rdent
