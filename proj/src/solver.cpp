#include "rdent/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rdent/errors.hpp"

namespace rdent {

void assemble(const Discretization& d, std::span<const double> u, std::vector<double>& R, AssemblyStats* stats,
              std::vector<ElementEntropyInfo>* info) {
    const auto& mesh = d.mesh();
    const auto& V = d.problem().entropy.V;
    R.assign(d.dofmap().n_dofs(), 0.0);
    if (info) info->assign(mesh.n_elements(), ElementEntropyInfo{});
    AssemblyStats s;
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const ElementResidual r = element_residual(d, e, u, info ? &(*info)[e] : nullptr);
        for (int i = 0; i < r.n; ++i) R[r.dofs[i]] += r.phi[i];
        if (stats)
            for (int i = 0; i < r.n; ++i) {
                const double t = V(u[r.dofs[i]]) * r.phi[i];
                s.entropy_interior += t;
                s.entropy_scale += std::abs(t);
            }
    }
    const int nb = static_cast<int>(mesh.boundary_faces().size());
    for (int b = 0; b < nb; ++b) {
        const ElementResidual r = d.boundary_residual(b, u);
        for (int i = 0; i < r.n; ++i) R[r.dofs[i]] += r.phi[i];
        if (stats) {
            s.boundary_flux += r.flux_integral;
            for (int i = 0; i < r.n; ++i) {
                const double t = V(u[r.dofs[i]]) * r.phi[i];
                s.entropy_boundary += t;
                s.entropy_scale += std::abs(t);
            }
        }
    }
    if (stats) *stats = s;
}

std::vector<double> assemble(const Discretization& d, std::span<const double> u) {
    std::vector<double> R;
    assemble(d, u, R);
    return R;
}

std::vector<double> dual_volumes(const Mesh& mesh, const DofMap& dofmap) {
    std::vector<double> C(dofmap.n_dofs(), 0.0);
    const int n = dofmap.dofs_per_element();
    for (int e = 0; e < mesh.n_elements(); ++e)
        for (int g : dofmap.element_dofs(e)) C[g] += mesh.area(e) / n;
    return C;
}

void euler_step(std::vector<double>& u, std::span<const double> R, double dt, std::span<const double> C,
                const FluxFunction& flux) {
    std::vector<double> next(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        next[i] = u[i] - dt / C[i] * R[i];
        if (!flux.admissible(next[i]))
            throw DomainError("euler_step: inadmissible value " + std::to_string(next[i]) + " at DoF " +
                                  std::to_string(i),
                              next[i], static_cast<int>(i));
    }
    u.swap(next);
}

namespace {

/// Per-element h_K / ((2k+1) ā_K); +inf for stagnant elements.
double element_dt(const Discretization& d, std::span<const double> u, int e) {
    const auto& flux = d.problem().flux;
    double amax = 0.0;
    for (int g : d.dofmap().element_dofs(e)) amax = std::max(amax, norm(flux.a(u[g])));
    if (!(amax > 0.0)) return std::numeric_limits<double>::infinity();
    return d.mesh().diameter(e) / ((2 * d.degree() + 1) * amax);
}

double mass(std::span<const double> u, std::span<const double> C) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) m += C[i] * u[i];
    return m;
}

}  // namespace

double stable_dt(const Discretization& d, std::span<const double> u, double cfl) {
    if (!(cfl > 0)) throw std::invalid_argument("cfl must be positive");
    double dt = std::numeric_limits<double>::infinity();
    for (int e = 0; e < d.mesh().n_elements(); ++e) dt = std::min(dt, element_dt(d, u, e));
    if (!std::isfinite(dt)) throw NumericalError("stable_dt: no finite wave speed");
    return cfl * dt;
}

MarchResult march(const Discretization& d, std::vector<double> u, const MarchConfig& cfg,
                  const StepObserver& observer) {
    if (!(cfg.cfl > 0)) throw std::invalid_argument("march: cfl must be positive");
    const auto& p = d.problem();
    const bool steady = cfg.mode == MarchMode::steady ||
                        (cfg.mode == MarchMode::automatic && p.mode == ProblemMode::steady);
    const double t_end = cfg.t_end > 0 ? cfg.t_end : p.t_end;
    if (!steady && !(t_end > 0)) throw std::invalid_argument("march: unsteady run needs t_end > 0");
    for (std::size_t i = 0; i < u.size(); ++i) p.flux.check(u[i], static_cast<int>(i));

    const auto C = dual_volumes(d.mesh(), d.dofmap());
    MarchResult out;
    std::vector<double> R;
    std::vector<double> local_dt;
    AssemblyStats stats;
    double t = 0.0;
    double res0 = -1.0;

    for (int step = 0;; ++step) {
        assemble(d, u, R, &stats);
        double res_inf = 0.0;
        for (double r : R) {
            if (!std::isfinite(r)) throw NumericalError("march: non-finite residual at step " + std::to_string(step));
            res_inf = std::max(res_inf, std::abs(r));
        }
        if (res0 < 0) res0 = cfg.residual_reference > 0.0 ? cfg.residual_reference : res_inf;

        HistoryRow row;
        row.step = step;
        row.t = t;
        row.mass = mass(u, C);
        row.entropy_residual_sum = stats.entropy_total();
        row.entropy_scale = stats.entropy_scale;
        row.res_inf = res_inf;

        if (steady) {
            if (res_inf <= cfg.steady_tol * res0) {
                out.converged = true;
                out.history.push_back(row);
                if (observer) observer(row);
                break;
            }
            if (step >= cfg.max_iters) {
                out.history.push_back(row);
                if (observer) observer(row);
                break;
            }
        } else if (t >= t_end * (1.0 - 1e-14)) {
            out.converged = true;
            out.history.push_back(row);
            if (observer) observer(row);
            break;
        }

        double dt = stable_dt(d, u, cfg.cfl);
        if (!steady) dt = std::min(dt, t_end - t);
        if (steady && cfg.local_time_step) {
            // Δt_σ = cfl · min over incident elements.
            local_dt.assign(u.size(), std::numeric_limits<double>::infinity());
            for (int e = 0; e < d.mesh().n_elements(); ++e) {
                const double de = cfg.cfl * element_dt(d, u, e);
                for (int g : d.dofmap().element_dofs(e)) local_dt[g] = std::min(local_dt[g], de);
            }
            for (std::size_t i = 0; i < u.size(); ++i) {
                u[i] -= local_dt[i] / C[i] * R[i];
                p.flux.check(u[i], static_cast<int>(i));
            }
        } else {
            euler_step(u, R, dt, C, p.flux);
        }
        row.dt = dt;
        row.mass_drift = mass(u, C) - row.mass + dt * stats.boundary_flux;
        t += dt;
        out.history.push_back(row);
        if (observer) observer(row);
        out.steps = step + 1;
    }
    out.time = t;
    out.state = std::move(u);
    return out;
}

}  // namespace rdent
