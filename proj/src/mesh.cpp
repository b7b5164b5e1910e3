#include "rdent/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "rdent/basis.hpp"

namespace rdent {

std::string to_string(BoundaryTag tag) {
    switch (tag) {
        case BoundaryTag::left: return "left";
        case BoundaryTag::right: return "right";
        case BoundaryTag::bottom: return "bottom";
        case BoundaryTag::top: return "top";
        case BoundaryTag::other: break;
    }
    return "other";
}

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

BoundaryTag classify(const Vec2& a, const Vec2& b, const Rect& r) {
    const double tol = 1e-12 * std::max({1.0, r.xmax - r.xmin, r.ymax - r.ymin});
    auto near = [tol](double u, double v) { return std::abs(u - v) <= tol; };
    if (near(a.x, r.xmin) && near(b.x, r.xmin)) return BoundaryTag::left;
    if (near(a.x, r.xmax) && near(b.x, r.xmax)) return BoundaryTag::right;
    if (near(a.y, r.ymin) && near(b.y, r.ymin)) return BoundaryTag::bottom;
    if (near(a.y, r.ymax) && near(b.y, r.ymax)) return BoundaryTag::top;
    return BoundaryTag::other;
}

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> elements)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
    if (vertices_.empty() || elements_.empty()) throw std::invalid_argument("mesh: empty vertex or element list");
    const int nv = n_vertices();

    bounds_ = {vertices_[0].x, vertices_[0].x, vertices_[0].y, vertices_[0].y};
    for (const auto& p : vertices_) {
        bounds_.xmin = std::min(bounds_.xmin, p.x);
        bounds_.xmax = std::max(bounds_.xmax, p.x);
        bounds_.ymin = std::min(bounds_.ymin, p.y);
        bounds_.ymax = std::max(bounds_.ymax, p.y);
    }

    geo_.resize(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        auto& t = elements_[e];
        for (int v : t)
            if (v < 0 || v >= nv) throw std::invalid_argument("mesh: element " + std::to_string(e) + " has a bad vertex index");
        double a2 = cross(vertices_[t[1]] - vertices_[t[0]], vertices_[t[2]] - vertices_[t[0]]);
        if (a2 == 0.0) throw std::invalid_argument("mesh: degenerate element " + std::to_string(e));
        if (a2 < 0.0) {
            std::swap(t[1], t[2]);
            a2 = -a2;
        }
        Geometry& g = geo_[e];
        g.area = 0.5 * a2;
        g.diameter = 0.0;
        for (int f = 0; f < 3; ++f) {
            const Vec2 d = vertices_[t[(f + 2) % 3]] - vertices_[t[(f + 1) % 3]];
            g.normal[f] = {d.y, -d.x};
            g.length[f] = norm(d);
            g.diameter = std::max(g.diameter, g.length[f]);
            g.grad[f] = (-1.0 / a2) * g.normal[f];
        }
    }

    links_.assign(3 * elements_.size(), FaceLink{});
    std::map<std::pair<int, int>, std::pair<int, int>> open;
    for (int e = 0; e < n_elements(); ++e) {
        for (int f = 0; f < 3; ++f) {
            const auto key = edge_key(elements_[e][(f + 1) % 3], elements_[e][(f + 2) % 3]);
            auto it = open.find(key);
            if (it == open.end()) {
                open.emplace(key, std::pair{e, f});
                continue;
            }
            const auto [eb, fb] = it->second;
            if (eb < 0) throw std::invalid_argument("mesh: non-conformal edge shared by more than two elements");
            const int idx = static_cast<int>(interior_.size());
            interior_.push_back({eb, fb, e, f});
            links_[3 * eb + fb] = {e, f, -1, idx};
            links_[3 * e + f] = {eb, fb, -1, idx};
            it->second = {-1, -1};
        }
    }
    for (int e = 0; e < n_elements(); ++e) {
        for (int f = 0; f < 3; ++f) {
            FaceLink& l = links_[3 * e + f];
            if (l.elem >= 0) continue;
            const Vec2 a = vertices_[elements_[e][(f + 1) % 3]];
            const Vec2 b = vertices_[elements_[e][(f + 2) % 3]];
            l.boundary = static_cast<int>(boundary_.size());
            boundary_.push_back({e, f, classify(a, b, bounds_)});
        }
    }
}

Vec2 Mesh::map(int e, const Bary& b) const {
    const auto& t = elements_[e];
    return b[0] * vertices_[t[0]] + b[1] * vertices_[t[1]] + b[2] * vertices_[t[2]];
}

double Mesh::total_area() const {
    double s = 0.0;
    for (const auto& g : geo_) s += g.area;
    return s;
}

Mesh build_rect_mesh(const Rect& bounds, int nx, int ny, Diagonal diagonal, double perturbation) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("build_rect_mesh: cell counts must be >= 1");
    if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin))
        throw std::invalid_argument("build_rect_mesh: degenerate bounds");
    if (!(std::abs(perturbation) < 0.5)) throw std::invalid_argument("build_rect_mesh: perturbation must lie in (-0.5, 0.5)");
    std::vector<Vec2> v;
    v.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j) {
        // endpoints set exactly so boundary tags are clean
        const double y = j == ny ? bounds.ymax : bounds.ymin + (bounds.ymax - bounds.ymin) * j / ny;
        for (int i = 0; i <= nx; ++i) {
            const double x = i == nx ? bounds.xmax : bounds.xmin + (bounds.xmax - bounds.xmin) * i / nx;
            // odd-odd interior vertices only, so no two of them share a triangle
            if (perturbation != 0.0 && i % 2 == 1 && j % 2 == 1 && i < nx && j < ny)
                v.push_back({x + perturbation * (bounds.xmax - bounds.xmin) / nx,
                             y + 0.6 * perturbation * (bounds.ymax - bounds.ymin) / ny});
            else
                v.push_back({x, y});
        }
    }
    std::vector<std::array<int, 3>> t;
    t.reserve(2 * static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = j * (nx + 1) + i, v10 = v00 + 1, v01 = v00 + nx + 1, v11 = v01 + 1;
            if (diagonal == Diagonal::alternating && (i + j) % 2 == 1) {
                t.push_back({v00, v10, v01});
                t.push_back({v10, v11, v01});
            } else {
                t.push_back({v00, v10, v11});
                t.push_back({v00, v11, v01});
            }
        }
    }
    return Mesh(std::move(v), std::move(t));
}

Mesh read_mesh(std::istream& in) {
    long nv = 0, ne = 0;
    if (!(in >> nv >> ne) || nv < 3 || ne < 1) throw std::invalid_argument("read_mesh: bad header");
    std::vector<Vec2> v(static_cast<std::size_t>(nv));
    for (auto& p : v)
        if (!(in >> p.x >> p.y)) throw std::invalid_argument("read_mesh: truncated vertex list");
    std::vector<std::array<int, 3>> t(static_cast<std::size_t>(ne));
    for (auto& tri : t)
        if (!(in >> tri[0] >> tri[1] >> tri[2])) throw std::invalid_argument("read_mesh: truncated element list");
    return Mesh(std::move(v), std::move(t));
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    out.precision(17);
    out << mesh.n_vertices() << ' ' << mesh.n_elements() << '\n';
    for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
    for (const auto& t : mesh.elements()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_mesh_vtk(std::ostream& out, const Mesh& mesh) {
    out.precision(17);
    out << "# vtk DataFile Version 3.0\nrdent mesh\nASCII\nDATASET POLYDATA\n";
    out << "POINTS " << mesh.n_vertices() << " double\n";
    for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << " 0\n";
    out << "POLYGONS " << mesh.n_elements() << ' ' << 4 * mesh.n_elements() << '\n';
    for (const auto& t : mesh.elements()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

DofMap::DofMap(int degree, Continuity continuity, int per_element, std::vector<int> element_dofs,
               std::vector<Vec2> dof_points)
    : degree_(degree), continuity_(continuity), per_element_(per_element), dofs_(std::move(element_dofs)),
      points_(std::move(dof_points)) {}

std::vector<int> face_local_dofs(int degree, int f) {
    std::vector<int> d{(f + 1) % 3, (f + 2) % 3};
    if (degree == 2) d.push_back(3 + (f + 1) % 3);
    return d;
}

DofMap build_dof_map(const Mesh& mesh, int degree, Continuity continuity) {
    if (degree != 1 && degree != 2) throw std::invalid_argument("build_dof_map: degree must be 1 or 2");
    const int per = local_dof_count(degree);
    const int ne = mesh.n_elements();
    const auto lp = lagrange_points(degree);
    std::vector<int> dofs(static_cast<std::size_t>(ne) * per);
    std::vector<Vec2> points;

    if (continuity == Continuity::discontinuous) {
        points.reserve(dofs.size());
        for (int e = 0; e < ne; ++e)
            for (int l = 0; l < per; ++l) {
                dofs[static_cast<std::size_t>(e) * per + l] = e * per + l;
                points.push_back(mesh.map(e, lp[l]));
            }
        return DofMap(degree, continuity, per, std::move(dofs), std::move(points));
    }

    points = mesh.vertices();
    std::map<std::pair<int, int>, int> edge_dof;
    for (int e = 0; e < ne; ++e) {
        const auto& t = mesh.elements()[e];
        for (int l = 0; l < 3; ++l) dofs[static_cast<std::size_t>(e) * per + l] = t[l];
        if (degree == 1) continue;
        for (int m = 0; m < 3; ++m) {
            const int a = t[m], b = t[(m + 1) % 3];
            auto [it, inserted] = edge_dof.try_emplace(edge_key(a, b), static_cast<int>(points.size()));
            if (inserted) points.push_back(0.5 * (mesh.vertices()[a] + mesh.vertices()[b]));
            dofs[static_cast<std::size_t>(e) * per + 3 + m] = it->second;
        }
    }
    return DofMap(degree, continuity, per, std::move(dofs), std::move(points));
}

int paired_point(const Mesh& mesh, const InteriorFace& face, int q, int n_points) {
    const auto& ta = mesh.elements()[face.elem_a];
    const auto& tb = mesh.elements()[face.elem_b];
    const int end_a = ta[(face.local_a + 2) % 3];
    const int start_b = tb[(face.local_b + 1) % 3];
    return start_b == end_a ? n_points - 1 - q : q;
}

std::vector<FacePointPair> face_pairing(const Mesh& mesh, const DofMap&, int face) {
    const auto& fc = mesh.interior_faces().at(static_cast<std::size_t>(face));
    const EdgeRule rule = edge_rule();
    const int n = static_cast<int>(rule.points.size());
    auto point_on = [&](int e, int f, int q) {
        const Vec2 a = mesh.vertex(e, (f + 1) % 3), b = mesh.vertex(e, (f + 2) % 3);
        return rule.points[n - 1 - q] * a + rule.points[q] * b;
    };
    const Vec2 na = mesh.scaled_normal(fc.elem_a, fc.local_a);
    const Vec2 nb = mesh.scaled_normal(fc.elem_b, fc.local_b);
    std::vector<FacePointPair> out;
    for (int q = 0; q < n; ++q) {
        const int qb = paired_point(mesh, fc, q, n);
        out.push_back({point_on(fc.elem_a, fc.local_a, q), point_on(fc.elem_b, fc.local_b, qb),
                       (1.0 / norm(na)) * na, (1.0 / norm(nb)) * nb, rule.weights[q]});
    }
    return out;
}

}  // namespace rdent

namespace rdent {

Bary barycentric(const Mesh& mesh, int e, const Vec2& p) {
    const Vec2 a = mesh.vertex(e, 0), b = mesh.vertex(e, 1), c = mesh.vertex(e, 2);
    const double det = cross(b - a, c - a);
    const double l1 = cross(p - a, c - a) / det;
    const double l2 = cross(b - a, p - a) / det;
    return {1.0 - l1 - l2, l1, l2};
}

PointLocator::PointLocator(const Mesh& mesh, int bins_per_side) : mesh_(&mesh), box_(mesh.bounds()) {
    nb_ = bins_per_side > 0 ? bins_per_side
                            : std::max(1, static_cast<int>(std::sqrt(static_cast<double>(mesh.n_elements()) / 2.0)));
    bins_.assign(static_cast<std::size_t>(nb_) * nb_, {});
    const double wx = box_.xmax - box_.xmin, wy = box_.ymax - box_.ymin;
    auto bin = [&](double v, double lo, double w) {
        return std::clamp(static_cast<int>((v - lo) / w * nb_), 0, nb_ - 1);
    };
    for (int e = 0; e < mesh.n_elements(); ++e) {
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        for (int l = 0; l < 3; ++l) {
            const Vec2 v = mesh.vertex(e, l);
            x0 = std::min(x0, v.x);
            x1 = std::max(x1, v.x);
            y0 = std::min(y0, v.y);
            y1 = std::max(y1, v.y);
        }
        for (int j = bin(y0, box_.ymin, wy); j <= bin(y1, box_.ymin, wy); ++j)
            for (int i = bin(x0, box_.xmin, wx); i <= bin(x1, box_.xmin, wx); ++i) bins_[j * nb_ + i].push_back(e);
    }
}

int PointLocator::locate(const Vec2& p, double tol) const {
    const double wx = box_.xmax - box_.xmin, wy = box_.ymax - box_.ymin;
    const int i = std::clamp(static_cast<int>((p.x - box_.xmin) / wx * nb_), 0, nb_ - 1);
    const int j = std::clamp(static_cast<int>((p.y - box_.ymin) / wy * nb_), 0, nb_ - 1);
    int best = -1;
    double best_min = -1e300;
    for (int e : bins_[j * nb_ + i]) {
        const Bary b = barycentric(*mesh_, e, p);
        const double m = std::min({b[0], b[1], b[2]});
        if (m > best_min) {
            best_min = m;
            best = e;
        }
    }
    return best_min >= -tol ? best : -1;
}

}  // namespace rdent
