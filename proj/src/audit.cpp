#include "rdent/audit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace rdent {

EntropySum entropy_residual_sum(const Discretization& d, std::span<const double> u) {
    std::vector<double> R;
    AssemblyStats s;
    assemble(d, u, R, &s);
    return {s.entropy_interior, s.entropy_boundary, s.entropy_scale};
}

ErrorNorms error_norms(const Discretization& d, std::span<const double> u, const ScalarField& exact) {
    if (!exact) throw std::invalid_argument("error_norms: problem has no exact solution");
    const auto& mesh = d.mesh();
    const auto rule = volume_rule(2);
    ErrorNorms n;
    for (int e = 0; e < mesh.n_elements(); ++e) {
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double diff = std::abs(d.evaluate(e, rule.points[q], u) - exact(mesh.map(e, rule.points[q])));
            const double w = mesh.area(e) * rule.weights[q];
            n.l1 += w * diff;
            n.l2 += w * diff * diff;
        }
    }
    n.l2 = std::sqrt(n.l2);
    // L∞ over the point values at the Lagrange points.
    const auto lp = lagrange_points(d.degree());
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto dofs = d.dofmap().element_dofs(e);
        for (std::size_t i = 0; i < dofs.size(); ++i) {
            const double uh = d.scheme().basis == BasisKind::lagrange ? u[dofs[i]] : d.evaluate(e, lp[i], u);
            n.linf = std::max(n.linf, std::abs(uh - exact(d.dofmap().dof_points()[dofs[i]])));
        }
    }
    return n;
}

std::vector<double> slopes(std::span<const double> h, std::span<const double> err) {
    std::vector<double> s;
    for (std::size_t i = 0; i + 1 < h.size() && i + 1 < err.size(); ++i)
        s.push_back(std::log(err[i] / err[i + 1]) / std::log(h[i] / h[i + 1]));
    return s;
}

std::vector<double> l2_projection(const Discretization& d, const ScalarField& fn) {
    const auto& mesh = d.mesh();
    const auto rule = volume_rule(2);
    const BasisTable tab(d.scheme().basis, d.degree(), rule.points, rule.weights);
    const int n = tab.n_dofs;
    std::vector<double> u(d.dofmap().n_dofs(), 0.0);
    std::vector<double> count(u.size(), 0.0);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
        Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double fq = fn(mesh.map(e, rule.points[q]));
            for (int i = 0; i < n; ++i) {
                b(i) += rule.weights[q] * tab.value(q, i) * fq;
                for (int j = 0; j < n; ++j) M(i, j) += rule.weights[q] * tab.value(q, i) * tab.value(q, j);
            }
        }
        const Eigen::VectorXd c = M.ldlt().solve(b);
        const auto dofs = d.dofmap().element_dofs(e);
        for (int i = 0; i < n; ++i) {
            u[dofs[i]] += c(i);
            count[dofs[i]] += 1.0;
        }
    }
    for (std::size_t i = 0; i < u.size(); ++i) u[i] /= count[i];
    return u;
}

double truncation_error(const Discretization& d, std::span<const double> u, const ScalarField& phi) {
    const auto R = assemble(d, u);
    const auto ph = d.interpolate(phi);
    double s = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) s += ph[i] * R[i];
    return s;
}

IdentityCheck identity_check(const Discretization& d, std::span<const double> u, std::span<const double> v) {
    const auto& mesh = d.mesh();
    const auto& flux = d.problem().flux;
    IdentityCheck out;
    auto add = [&out](double t) {
        out.rhs += t;
        out.scale += std::abs(t);
    };

    const auto R = assemble(d, u);
    for (std::size_t i = 0; i < R.size(); ++i) out.lhs += v[i] * R[i];

    const auto& vt = d.volume_table();
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto dofs = d.dofmap().element_dofs(e);
        const std::array<Vec2, 3> gl{mesh.grad_lambda(e, 0), mesh.grad_lambda(e, 1), mesh.grad_lambda(e, 2)};
        for (std::size_t q = 0; q < vt.points.size(); ++q) {
            double uq = 0.0;
            Vec2 gv{};
            for (std::size_t i = 0; i < dofs.size(); ++i) {
                uq += vt.value(static_cast<int>(q), static_cast<int>(i)) * u[dofs[i]];
                gv += v[dofs[i]] * physical_gradient(vt.shapes[q].dlambda[i], gl);
            }
            add(-mesh.area(e) * vt.weights[q] * dot(gv, flux.f(uq)));
        }
    }
    const int nq = d.n_face_points();
    for (const auto& fc : mesh.interior_faces()) {
        const Vec2 nrm = mesh.scaled_normal(fc.elem_a, fc.local_a);
        for (int q = 0; q < nq; ++q) {
            const int qb = paired_point(mesh, fc, q, nq);
            const double ua = d.face_trace(fc.elem_a, fc.local_a, q, u);
            const double ub = d.face_trace(fc.elem_b, fc.local_b, qb, u);
            const double jump = d.face_trace(fc.elem_a, fc.local_a, q, v) - d.face_trace(fc.elem_b, fc.local_b, qb, v);
            const double fh = d.discontinuous() ? llf_flux(flux, ua, ub, nrm) : dot(flux.f(ua), nrm);
            add(d.face_table(fc.local_a).weights[q] * jump * fh);
        }
    }
    const auto& bfs = mesh.boundary_faces();
    for (int b = 0; b < static_cast<int>(bfs.size()); ++b) {
        const Vec2 nrm = mesh.scaled_normal(bfs[b].elem, bfs[b].local);
        for (int q = 0; q < nq; ++q) {
            const double ui = d.face_trace(bfs[b].elem, bfs[b].local, q, u);
            const double ubd = d.boundary_value(b, q);
            const double fh = d.scheme().boundary_flux == BoundaryFluxKind::llf ? llf_flux(flux, ui, ubd, nrm)
                                                                                 : upwind_flux(flux, ui, ubd, nrm);
            add(d.face_table(bfs[b].local).weights[q] * d.face_trace(bfs[b].elem, bfs[b].local, q, v) * fh);
        }
    }
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const ElementResidual full = element_residual(d, e, u);
        const ElementResidual gal = d.galerkin_residual(e, u);
        std::array<double, kMaxStencil> diff{};
        for (int i = 0; i < full.n; ++i) diff[i] = full.phi[i] - (i < gal.n ? gal.phi[i] : 0.0);
        double s = 0.0;
        for (int i = 0; i < full.n; ++i)
            for (int j = 0; j < full.n; ++j) s += (v[full.dofs[i]] - v[full.dofs[j]]) * diff[i];
        add(s / full.n);
    }
    return out;
}

namespace {

MeshLevel level_of(const Mesh& mesh, const DofMap& dm, int n) {
    double h = 0.0;
    for (int e = 0; e < mesh.n_elements(); ++e) h = std::max(h, mesh.diameter(e));
    return {n, h, dm.n_dofs()};
}

}  // namespace

std::vector<double> transfer(const Discretization& from, std::span<const double> u, const Discretization& to) {
    const PointLocator loc(from.mesh());
    return to.interpolate([&](const Vec2& p) {
        const int e = loc.locate(p, 1e-9);
        if (e < 0) throw std::invalid_argument("transfer: point outside the source mesh");
        Bary b = barycentric(from.mesh(), e, p);
        for (double& x : b) x = std::max(x, 0.0);
        const double s = b[0] + b[1] + b[2];
        for (double& x : b) x /= s;
        return from.evaluate(e, b, u);
    });
}

std::vector<ConvergenceRow> convergence_study(const StudySetup& s, const std::vector<int>& cells) {
    std::vector<ConvergenceRow> rows;
    std::unique_ptr<Mesh> prev_mesh;
    std::unique_ptr<DofMap> prev_dm;
    std::vector<double> prev_u;
    for (int n : cells) {
        const auto t0 = std::chrono::steady_clock::now();
        auto mesh = std::make_unique<Mesh>(build_rect_mesh(s.problem.domain, n, n, s.diagonal, s.perturbation));
        auto dm = std::make_unique<DofMap>(build_dof_map(*mesh, s.degree, s.continuity));
        const Discretization d(*mesh, *dm, s.problem, s.scheme);
        std::vector<double> u0 = d.interpolate(s.problem.initial);
        MarchConfig mc = s.march;
        if (s.nested_start && prev_mesh) {
            // tolerance stays relative to the cold-start residual on this mesh
            const auto r = assemble(d, u0);
            double ref = 0.0;
            for (double x : r) ref = std::max(ref, std::abs(x));
            mc.residual_reference = ref;
            const Discretization coarse(*prev_mesh, *prev_dm, s.problem, s.scheme);
            u0 = transfer(coarse, prev_u, d);
        }
        auto res = march(d, std::move(u0), mc);
        ConvergenceRow row;
        row.level = level_of(*mesh, *dm, n);
        row.err = error_norms(d, res.state, s.problem.exact);
        row.converged = res.converged;
        row.iterations = res.steps;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(row);
        prev_u = std::move(res.state);
        prev_mesh = std::move(mesh);
        prev_dm = std::move(dm);
    }
    return rows;
}

std::vector<ProbeRow> truncation_probe(const StudySetup& s, const std::vector<int>& cells, const ScalarField& phi) {
    if (!s.problem.exact) throw std::invalid_argument("truncation_probe: problem has no exact solution");
    std::vector<ProbeRow> rows;
    for (int n : cells) {
        const Mesh mesh = build_rect_mesh(s.problem.domain, n, n, s.diagonal, s.perturbation);
        const DofMap dm = build_dof_map(mesh, s.degree, s.continuity);
        const Discretization d(mesh, dm, s.problem, s.scheme);
        const auto u = d.interpolate(s.problem.exact);
        rows.push_back({level_of(mesh, dm, n), std::abs(truncation_error(d, u, phi))});
    }
    return rows;
}

std::vector<ProbeRow> entropy_defect_study(const StudySetup& s, const std::vector<int>& cells) {
    if (!s.problem.exact) throw std::invalid_argument("entropy_defect_study: problem has no exact solution");
    std::vector<ProbeRow> rows;
    for (int n : cells) {
        const Mesh mesh = build_rect_mesh(s.problem.domain, n, n, s.diagonal, s.perturbation);
        const DofMap dm = build_dof_map(mesh, s.degree, Continuity::discontinuous);
        SchemeConfig sc = s.scheme;
        sc.entropy_filter = EntropyFilter::none;
        sc.entropy_correction = false;
        const Discretization d(mesh, dm, s.problem, sc);
        const auto u = l2_projection(d, s.problem.exact);
        double m = 0.0;
        for (int e = 0; e < mesh.n_elements(); ++e)
            m = std::max(m, std::abs(entropy_defect(d, e, u, d.base_residual(e, u))));
        rows.push_back({level_of(mesh, dm, n), m});
    }
    return rows;
}

}  // namespace rdent
