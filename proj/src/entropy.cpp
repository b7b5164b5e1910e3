#include "rdent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdent {

double entropy_flux_integral(const Discretization& d, int e, std::span<const double> u) {
    const auto& p = d.problem();
    const auto& mesh = d.mesh();
    const auto dofs = d.dofmap().element_dofs(e);
    const int n = static_cast<int>(dofs.size());
    std::array<double, kMaxLocalDofs> V{};
    for (int i = 0; i < n; ++i) V[i] = p.entropy.V(u[dofs[i]]);
    const bool dg = d.discontinuous();
    const int nq = d.n_face_points();
    double total = 0.0;
    for (int f = 0; f < 3; ++f) {
        const Vec2 nrm = mesh.scaled_normal(e, f);
        const FaceLink& link = mesh.link(e, f);
        const auto& tab = d.face_table(f);
        for (int q = 0; q < nq; ++q) {
            double vin = 0.0;
            for (int i = 0; i < n; ++i) vin += tab.shapes[q].value[i] * V[i];
            double gh;
            if (dg && link.elem >= 0) {
                const auto& fc = mesh.interior_faces()[link.interior];
                const int qb = paired_point(mesh, fc, q, nq);
                const auto db = d.dofmap().element_dofs(link.elem);
                const auto& tb = d.face_table(link.local);
                double vout = 0.0;
                for (int j = 0; j < n; ++j) vout += tb.shapes[qb].value[j] * p.entropy.V(u[db[j]]);
                gh = entropy_numerical_flux(p, vin, vout, nrm, d.scheme().entropy_flux);
            } else {
                const double uin = p.entropy.u_of_V(vin);
                p.flux.check(uin, e);
                gh = dot(p.entropy.g(uin), nrm);
            }
            total += tab.weights[q] * gh;
        }
    }
    return total;
}

double entropy_production(const Discretization& d, std::span<const double> u, const ElementResidual& r) {
    const auto& V = d.problem().entropy.V;
    double s = 0.0;
    for (int i = 0; i < r.n; ++i) s += V(u[r.dofs[i]]) * r.phi[i];
    return s;
}

double entropy_defect(const Discretization& d, int e, std::span<const double> u, const ElementResidual& base) {
    return entropy_flux_integral(d, e, u) - entropy_production(d, u, base);
}

Correction correction(std::span<const double> V, double E, double epsilon) {
    if (!(epsilon > 0)) throw std::invalid_argument("correction: epsilon must be positive");
    const int n = static_cast<int>(V.size());
    double mean = 0.0;
    for (double v : V) mean += v;
    mean /= n;
    double vmax = 0.0;
    for (double v : V) vmax = std::max(vmax, std::abs(v));
    // deviations at round-off level of the mean count as zero
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * vmax;
    std::array<double, kMaxLocalDofs> dev{};
    double s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        dev[i] = std::abs(V[i] - mean) <= floor ? 0.0 : V[i] - mean;
        s2 += dev[i] * dev[i];
    }
    Correction c;
    c.alpha = E / (s2 + epsilon);
    for (int i = 0; i < n; ++i) c.r[i] = c.alpha * dev[i];
    return c;
}

namespace {

ElementResidual empty_for(const Discretization& d, int e) {
    ElementResidual r;
    const auto dofs = d.dofmap().element_dofs(e);
    r.n = r.n_own = static_cast<int>(dofs.size());
    for (int i = 0; i < r.n; ++i) r.dofs[i] = dofs[i];
    return r;
}

}  // namespace

ElementResidual filter_jump(const Discretization& d, int e, std::span<const double> u, double theta) {
    if (theta < 0) throw std::invalid_argument("filter_jump: θ must be non-negative");
    ElementResidual r = empty_for(d, e);
    d.add_jump_terms(r, e, u, theta, false, true);
    return r;
}

ElementResidual filter_streamline(const Discretization& d, int e, std::span<const double> u, double theta) {
    if (theta < 0) throw std::invalid_argument("filter_streamline: θ must be non-negative");
    ElementResidual r = empty_for(d, e);
    d.add_streamline_terms(r, e, u, theta * d.mesh().diameter(e), true, d.filter_table());
    return r;
}

ElementResidual corrected_residual(const ElementResidual& phi, const Correction& c, const ElementResidual& psi) {
    ElementResidual out = phi;
    for (int i = 0; i < out.n_own; ++i) out.phi[i] += c.r[i];
    out.merge(psi);
    return out;
}

ElementResidual element_residual(const Discretization& d, int e, std::span<const double> u, ElementEntropyInfo* info) {
    const auto& s = d.scheme();
    ElementResidual r = d.base_residual(e, u);
    if (s.entropy_correction) {
        const double E = entropy_defect(d, e, u, r);
        std::array<double, kMaxLocalDofs> V{};
        for (int i = 0; i < r.n_own; ++i) V[i] = d.problem().entropy.V(u[r.dofs[i]]);
        const Correction c = correction(std::span<const double>(V.data(), r.n_own), E, s.epsilon);
        for (int i = 0; i < r.n_own; ++i) r.phi[i] += c.r[i];
        if (info) {
            info->defect = E;
            info->alpha = c.alpha;
        }
    }
    if (s.entropy_filter != EntropyFilter::none && s.filter_theta > 0) {
        const ElementResidual psi = s.entropy_filter == EntropyFilter::jump ? filter_jump(d, e, u, s.filter_theta)
                                                                            : filter_streamline(d, e, u, s.filter_theta);
        if (info) info->production = entropy_production(d, u, psi);
        r.merge(psi);
    }
    return r;
}

EntropyCorrectionReport entropy_report(const Discretization& d, std::span<const double> u) {
    const int ne = d.mesh().n_elements();
    EntropyCorrectionReport rep;
    rep.defect.resize(ne);
    rep.alpha.resize(ne);
    rep.production.resize(ne);
    rep.r.assign(d.dofmap().n_dofs(), 0.0);
    for (int e = 0; e < ne; ++e) {
        const ElementResidual base = d.base_residual(e, u);
        const double E = entropy_defect(d, e, u, base);
        std::array<double, kMaxLocalDofs> V{};
        for (int i = 0; i < base.n_own; ++i) V[i] = d.problem().entropy.V(u[base.dofs[i]]);
        const Correction c = correction(std::span<const double>(V.data(), base.n_own), E, d.scheme().epsilon);
        rep.defect[e] = E;
        rep.alpha[e] = c.alpha;
        for (int i = 0; i < base.n_own; ++i) rep.r[base.dofs[i]] += c.r[i];
        const auto& s = d.scheme();
        if (s.entropy_filter == EntropyFilter::jump) rep.production[e] = entropy_production(d, u, filter_jump(d, e, u, s.filter_theta));
        else if (s.entropy_filter == EntropyFilter::streamline)
            rep.production[e] = entropy_production(d, u, filter_streamline(d, e, u, s.filter_theta));
    }
    return rep;
}

}  // namespace rdent
