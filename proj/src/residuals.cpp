#include "rdent/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdent/errors.hpp"

namespace rdent {

void SchemeConfig::validate() const {
    if (theta_jump < 0 || theta_stream < 0 || supg_theta < 0 || filter_theta < 0)
        throw std::invalid_argument("scheme: θ parameters must be non-negative");
    if (!(epsilon > 0)) throw std::invalid_argument("scheme: epsilon must be positive");
}

std::string to_string(BaseScheme b) {
    switch (b) {
        case BaseScheme::galerkin: return "galerkin";
        case BaseScheme::supg: return "supg";
        case BaseScheme::galerkin_jump: return "galerkin_jump";
        case BaseScheme::dg: return "dg";
        case BaseScheme::rusanov: return "rusanov";
        case BaseScheme::limited_rd: return "limited_rd";
    }
    return "?";
}

BaseScheme parse_base_scheme(const std::string& s) {
    for (auto b : {BaseScheme::galerkin, BaseScheme::supg, BaseScheme::galerkin_jump, BaseScheme::dg,
                   BaseScheme::rusanov, BaseScheme::limited_rd})
        if (to_string(b) == s) return b;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

double ElementResidual::sum() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += phi[i];
    return s;
}

int ElementResidual::find_or_add(int dof) {
    for (int i = 0; i < n; ++i)
        if (dofs[i] == dof) return i;
    if (n == kMaxStencil) throw std::logic_error("element stencil overflow");
    dofs[n] = dof;
    phi[n] = 0.0;
    return n++;
}

void ElementResidual::merge(const ElementResidual& o) {
    for (int i = 0; i < o.n; ++i) phi[find_or_add(o.dofs[i])] += o.phi[i];
}

std::array<double, kMaxLocalDofs> limiter_beta(std::span<const double> low, double total, double scale) {
    std::array<double, kMaxLocalDofs> beta{};
    const int n = static_cast<int>(low.size());
    if (std::abs(total) <= 1e-14 * scale || total == 0.0) {
        for (int i = 0; i < n; ++i) beta[i] = 1.0 / n;
        return beta;
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        beta[i] = std::max(0.0, low[i] / total);
        s += beta[i];
    }
    if (!(s > 0.0) || !std::isfinite(s)) {
        for (int i = 0; i < n; ++i) beta[i] = 1.0 / n;
        return beta;
    }
    for (int i = 0; i < n; ++i) beta[i] /= s;
    return beta;
}

namespace {

std::array<Vec2, 3> grad_lambdas(const Mesh& m, int e) {
    return {m.grad_lambda(e, 0), m.grad_lambda(e, 1), m.grad_lambda(e, 2)};
}

}  // namespace

Discretization::Discretization(const Mesh& mesh, const DofMap& dofmap, const ProblemSpec& problem,
                               SchemeConfig scheme)
    : mesh_(&mesh), dofmap_(&dofmap), problem_(&problem), scheme_(scheme) {
    scheme_.validate();
    const bool dg = dofmap.continuity() == Continuity::discontinuous;
    if (scheme_.base == BaseScheme::dg && !dg) throw std::invalid_argument("scheme 'dg' needs a discontinuous space");
    const bool jumps = scheme_.base == BaseScheme::galerkin_jump ||
                       (scheme_.base == BaseScheme::limited_rd && scheme_.theta_jump > 0) ||
                       scheme_.entropy_filter == EntropyFilter::jump;
    if (jumps && dg) throw std::invalid_argument("gradient-jump terms need a continuous space");

    const int k = dofmap.degree();
    const auto vr = volume_rule(k);
    volume_ = BasisTable(scheme_.basis, k, vr.points, vr.weights);
    const auto mr = midpoint_rule();
    reduced_ = BasisTable(scheme_.basis, k, mr.points, mr.weights);
    const auto er = edge_rule();
    n_face_points_ = static_cast<int>(er.points.size());
    for (int f = 0; f < 3; ++f) {
        std::vector<Bary> pts;
        for (int q = 0; q < n_face_points_; ++q) {
            Bary b{};
            b[(f + 1) % 3] = er.points[n_face_points_ - 1 - q];
            b[(f + 2) % 3] = er.points[q];
            pts.push_back(b);
        }
        faces_[f] = BasisTable(scheme_.basis, k, pts, er.weights);
    }
    const auto& bfs = mesh.boundary_faces();
    ub_.resize(bfs.size() * n_face_points_);
    for (std::size_t i = 0; i < bfs.size(); ++i)
        for (int q = 0; q < n_face_points_; ++q) {
            const Vec2 x = mesh.map(bfs[i].elem, faces_[bfs[i].local].points[q]);
            const double v = problem.boundary(x, bfs[i].tag);
            problem.flux.check(v);
            ub_[i * n_face_points_ + q] = v;
        }
    if (!dg) {
        const int n = dofmap.dofs_per_element();
        face_grad_.resize(static_cast<std::size_t>(mesh.n_elements()) * 3 * n_face_points_ * n);
        std::size_t pos = 0;
        for (int e = 0; e < mesh.n_elements(); ++e) {
            const auto gl = grad_lambdas(mesh, e);
            for (int f = 0; f < 3; ++f)
                for (int q = 0; q < n_face_points_; ++q)
                    for (int i = 0; i < n; ++i) face_grad_[pos++] = physical_gradient(faces_[f].shapes[q].dlambda[i], gl);
        }
    }
}

std::array<double, kMaxLocalDofs> Discretization::gather(int e, std::span<const double> u) const {
    std::array<double, kMaxLocalDofs> loc{};
    const auto d = dofmap_->element_dofs(e);
    for (std::size_t i = 0; i < d.size(); ++i) loc[i] = u[d[i]];
    return loc;
}

double Discretization::face_trace(int e, int f, int q, std::span<const double> u) const {
    const auto d = dofmap_->element_dofs(e);
    const auto& sv = faces_[f].shapes[q];
    double s = 0.0;
    for (int i = 0; i < sv.n; ++i) s += sv.value[i] * u[d[i]];
    return s;
}

double Discretization::evaluate(int e, const Bary& b, std::span<const double> u) const {
    const auto sv = evaluate_basis(scheme_.basis, degree(), b);
    const auto d = dofmap_->element_dofs(e);
    double s = 0.0;
    for (int i = 0; i < sv.n; ++i) s += sv.value[i] * u[d[i]];
    return s;
}

std::vector<double> Discretization::interpolate(const std::function<double(const Vec2&)>& fn) const {
    std::vector<double> u(dofmap_->n_dofs());
    for (int i = 0; i < dofmap_->n_dofs(); ++i) u[i] = fn(dofmap_->dof_points()[i]);
    if (scheme_.basis == BasisKind::bezier && degree() == 2) {
        std::vector<double> c(u.size());
        for (int e = 0; e < mesh_->n_elements(); ++e) {
            const auto b = lagrange_to_bezier(2, gather(e, u));
            const auto d = dofmap_->element_dofs(e);
            for (int i = 0; i < 6; ++i) c[d[i]] = b[i];
        }
        return c;
    }
    return u;
}

ElementResidual Discretization::start(int e) const {
    ElementResidual r;
    const auto d = dofmap_->element_dofs(e);
    r.n = r.n_own = static_cast<int>(d.size());
    for (int i = 0; i < r.n; ++i) r.dofs[i] = d[i];
    return r;
}

void Discretization::add_galerkin(ElementResidual& r, int e, const std::array<double, kMaxLocalDofs>& loc,
                                  std::span<const double> u) const {
    const auto& flux = problem_->flux;
    const int n = r.n_own;
    const double area = mesh_->area(e);
    const auto gl = grad_lambdas(*mesh_, e);
    for (std::size_t q = 0; q < volume_.points.size(); ++q) {
        const auto& sv = volume_.shapes[q];
        double uq = 0.0;
        for (int i = 0; i < n; ++i) uq += sv.value[i] * loc[i];
        flux.check(uq, e);
        const Vec2 F = flux.f(uq);
        const double w = area * volume_.weights[q];
        for (int i = 0; i < n; ++i) r.phi[i] -= w * dot(physical_gradient(sv.dlambda[i], gl), F);
    }
    const bool dg = discontinuous();
    for (int f = 0; f < 3; ++f) {
        const Vec2 nrm = mesh_->scaled_normal(e, f);
        const FaceLink& link = mesh_->link(e, f);
        const auto& tab = faces_[f];
        for (int q = 0; q < n_face_points_; ++q) {
            const auto& sv = tab.shapes[q];
            double uin = 0.0;
            for (int i = 0; i < n; ++i) uin += sv.value[i] * loc[i];
            double fh;
            if (dg && link.elem >= 0) {
                const auto& fc = mesh_->interior_faces()[link.interior];
                const int qb = paired_point(*mesh_, fc, q, n_face_points_);
                const double uout = face_trace(link.elem, link.local, qb, u);
                fh = llf_flux(flux, uin, uout, nrm);
            } else {
                flux.check(uin, e);
                fh = dot(flux.f(uin), nrm);
            }
            const double w = tab.weights[q];
            for (int i = 0; i < n; ++i) r.phi[i] += w * sv.value[i] * fh;
            r.flux_integral += w * fh;
        }
    }
}

ElementResidual Discretization::galerkin_residual(int e, std::span<const double> u) const {
    ElementResidual r = start(e);
    add_galerkin(r, e, gather(e, u), u);
    return r;
}

void Discretization::add_streamline_terms(ElementResidual& r, int e, std::span<const double> u, double coeff,
                                          bool entropy_variable, const BasisTable& tab) const {
    if (coeff == 0.0) return;
    const auto& p = *problem_;
    const int n = r.n_own;
    auto loc = gather(e, u);
    if (entropy_variable)
        for (int i = 0; i < n; ++i) loc[i] = p.entropy.V(loc[i]);
    const auto gl = grad_lambdas(*mesh_, e);
    const double area = mesh_->area(e);
    const std::size_t nq = tab.points.size();

    std::array<Vec2, 8> a{};
    std::array<Vec2, 8> grad_w{};
    std::array<std::array<Vec2, kMaxLocalDofs>, 8> grad_phi{};
    Vec2 abar{};
    for (std::size_t q = 0; q < nq; ++q) {
        const auto& sv = tab.shapes[q];
        double wq = 0.0;
        Vec2 g{};
        for (int i = 0; i < n; ++i) {
            grad_phi[q][i] = physical_gradient(sv.dlambda[i], gl);
            wq += sv.value[i] * loc[i];
            g += loc[i] * grad_phi[q][i];
        }
        if (entropy_variable) {
            const double uq = p.entropy.u_of_V(wq);
            p.flux.check(uq, e);
            a[q] = (1.0 / p.entropy.hessian(uq)) * p.flux.a(uq);
        } else {
            p.flux.check(wq, e);
            a[q] = p.flux.a(wq);
        }
        grad_w[q] = g;
        abar += tab.weights[q] * a[q];
    }
    double neg = 0.0, mag = 0.0;
    for (int i = 0; i < n; ++i) {
        Vec2 mean_grad{};
        for (std::size_t q = 0; q < nq; ++q) mean_grad += tab.weights[q] * grad_phi[q][i];
        const double k = dot(abar, mean_grad);
        neg += std::min(k, 0.0);
        mag += std::abs(k);
    }
    if (!(std::abs(neg) > 1e-14 * mag) || neg == 0.0) return;  // stagnant element
    const double tau = 1.0 / std::abs(neg);
    for (std::size_t q = 0; q < nq; ++q) {
        const double s = coeff * area * tab.weights[q] * tau * dot(a[q], grad_w[q]);
        for (int i = 0; i < n; ++i) r.phi[i] += s * dot(a[q], grad_phi[q][i]);
    }
}

void Discretization::add_jump_terms(ElementResidual& r, int e, std::span<const double> u, double theta,
                                    bool face_length_h, bool entropy_variable) const {
    if (theta == 0.0) return;
    if (face_grad_.empty()) throw std::invalid_argument("gradient-jump terms need a continuous space");
    const auto& p = *problem_;
    const int n = dofmap_->dofs_per_element();
    std::array<double, kMaxLocalDofs> wa{}, wb{};
    const auto da = dofmap_->element_dofs(e);
    for (int i = 0; i < n; ++i) wa[i] = entropy_variable ? p.entropy.V(u[da[i]]) : u[da[i]];
    const double hk = mesh_->diameter(e);
    const std::size_t stride = static_cast<std::size_t>(n_face_points_) * n;

    for (int f = 0; f < 3; ++f) {
        const FaceLink& link = mesh_->link(e, f);
        if (link.elem < 0) continue;
        const int nb = link.elem;
        const auto db = dofmap_->element_dofs(nb);
        for (int j = 0; j < n; ++j) wb[j] = entropy_variable ? p.entropy.V(u[db[j]]) : u[db[j]];
        std::array<int, kMaxLocalDofs> idx{};
        for (int j = 0; j < n; ++j) idx[j] = r.find_or_add(db[j]);
        const auto& fc = mesh_->interior_faces()[link.interior];
        const double len = mesh_->face_length(e, f);
        const double h = face_length_h ? len : hk;
        const auto& ta = faces_[f];
        const Vec2* gface_a = face_grad_.data() + (static_cast<std::size_t>(e) * 3 + f) * stride;
        const Vec2* gface_b = face_grad_.data() + (static_cast<std::size_t>(nb) * 3 + link.local) * stride;
        for (int q = 0; q < n_face_points_; ++q) {
            const int qb = paired_point(*mesh_, fc, q, n_face_points_);
            const Vec2* ga = gface_a + static_cast<std::size_t>(q) * n;
            const Vec2* gb = gface_b + static_cast<std::size_t>(qb) * n;
            Vec2 jump{};
            for (int i = 0; i < n; ++i) {
                jump += wa[i] * ga[i];
                jump -= wb[i] * gb[i];
            }
            const double w = theta * h * h * len * ta.weights[q];
            for (int i = 0; i < n; ++i) r.phi[i] += w * dot(ga[i], jump);
            for (int j = 0; j < n; ++j) r.phi[idx[j]] -= w * dot(gb[j], jump);
        }
    }
}

ElementResidual Discretization::supg_residual(int e, std::span<const double> u) const {
    ElementResidual r = galerkin_residual(e, u);
    add_streamline_terms(r, e, u, scheme_.supg_theta * mesh_->diameter(e), false, volume_);
    return r;
}

ElementResidual Discretization::jump_stabilized_residual(int e, std::span<const double> u) const {
    ElementResidual r = galerkin_residual(e, u);
    add_jump_terms(r, e, u, scheme_.theta_jump, true, false);
    return r;
}

double Discretization::rusanov_alpha(int e, std::span<const double> u) const {
    const auto loc = gather(e, u);
    const int n = dofmap_->dofs_per_element();
    const auto gl = grad_lambdas(*mesh_, e);
    const double area = mesh_->area(e);
    std::array<std::array<double, kMaxLocalDofs>, kMaxLocalDofs> k{};
    for (std::size_t q = 0; q < volume_.points.size(); ++q) {
        const auto& sv = volume_.shapes[q];
        double uq = 0.0;
        for (int i = 0; i < n; ++i) uq += sv.value[i] * loc[i];
        problem_->flux.check(uq, e);
        const Vec2 a = problem_->flux.a(uq);
        const double w = area * volume_.weights[q];
        for (int j = 0; j < n; ++j) {
            const double ag = w * dot(a, physical_gradient(sv.dlambda[j], gl));
            for (int i = 0; i < n; ++i) k[i][j] += sv.value[i] * ag;
        }
    }
    double m = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m = std::max(m, std::abs(k[i][j]));
    return n * m;
}

ElementResidual Discretization::rusanov_residual(int e, std::span<const double> u) const {
    ElementResidual r = galerkin_residual(e, u);
    const auto loc = gather(e, u);
    const int n = r.n_own;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += loc[i];
    mean /= n;
    const double alpha = rusanov_alpha(e, u);
    for (int i = 0; i < n; ++i) r.phi[i] += alpha * (loc[i] - mean);
    return r;
}

ElementResidual Discretization::limited_rd_residual(int e, std::span<const double> u) const {
    const ElementResidual low = rusanov_residual(e, u);
    const int n = low.n_own;
    const double total = low.flux_integral;
    double fmax = 0.0;
    for (std::size_t q = 0; q < volume_.points.size(); ++q)
        fmax = std::max(fmax, norm(problem_->flux.f(evaluate(e, volume_.points[q], u))));
    const double scale = 1.0 + fmax * mesh_->diameter(e);
    const auto beta = limiter_beta(std::span<const double>(low.phi.data(), n), total, scale);
    ElementResidual r = start(e);
    r.flux_integral = total;
    for (int i = 0; i < n; ++i) r.phi[i] = beta[i] * total;
    add_streamline_terms(r, e, u, scheme_.theta_stream * mesh_->diameter(e), false, volume_);
    add_jump_terms(r, e, u, scheme_.theta_jump, false, false);
    return r;
}

ElementResidual Discretization::base_residual(int e, std::span<const double> u) const {
    switch (scheme_.base) {
        case BaseScheme::galerkin:
        case BaseScheme::dg: return galerkin_residual(e, u);
        case BaseScheme::supg: return supg_residual(e, u);
        case BaseScheme::galerkin_jump: return jump_stabilized_residual(e, u);
        case BaseScheme::rusanov: return rusanov_residual(e, u);
        case BaseScheme::limited_rd: return limited_rd_residual(e, u);
    }
    throw std::logic_error("unhandled scheme");
}

ElementResidual Discretization::boundary_residual(int bf, std::span<const double> u) const {
    const auto& face = mesh_->boundary_faces()[bf];
    const auto& flux = problem_->flux;
    const auto local = face_local_dofs(degree(), face.local);
    const auto d = dofmap_->element_dofs(face.elem);
    ElementResidual r;
    r.n = r.n_own = static_cast<int>(local.size());
    for (int i = 0; i < r.n; ++i) r.dofs[i] = d[local[i]];
    const Vec2 nrm = mesh_->scaled_normal(face.elem, face.local);
    const auto& tab = faces_[face.local];
    for (int q = 0; q < n_face_points_; ++q) {
        const double uin = face_trace(face.elem, face.local, q, u);
        const double ub = boundary_value(bf, q);
        const double fh = scheme_.boundary_flux == BoundaryFluxKind::llf ? llf_flux(flux, uin, ub, nrm)
                                                                         : upwind_flux(flux, uin, ub, nrm);
        const double w = tab.weights[q];
        const double integrand = fh - dot(flux.f(uin), nrm);
        for (int i = 0; i < r.n; ++i) r.phi[i] += w * tab.shapes[q].value[local[i]] * integrand;
        r.flux_integral += w * fh;
    }
    return r;
}

}  // namespace rdent
