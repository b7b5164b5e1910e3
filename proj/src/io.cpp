#include "rdent/io.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rdent {

namespace {

constexpr std::array<std::array<int, 3>, 4> kP2Split = {{{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}}};

}  // namespace

void write_field_vtk(std::ostream& out, const DofMap& dofmap, std::span<const double> u, const std::string& name) {
    const auto& pts = dofmap.dof_points();
    const int per = dofmap.dofs_per_element();
    out.precision(17);
    out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET POLYDATA\n";
    out << "POINTS " << pts.size() << " double\n";
    for (const auto& p : pts) out << p.x << ' ' << p.y << " 0\n";
    const int n_elements = dofmap.n_elements();
    const int sub = per == 3 ? 1 : 4;
    const int n_tri = n_elements * sub;
    out << "POLYGONS " << n_tri << ' ' << 4 * n_tri << '\n';
    for (int e = 0; e < n_elements; ++e) {
        const auto d = dofmap.element_dofs(e);
        if (per == 3) {
            out << "3 " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
        } else {
            for (const auto& t : kP2Split) out << "3 " << d[t[0]] << ' ' << d[t[1]] << ' ' << d[t[2]] << '\n';
        }
    }
    out << "POINT_DATA " << pts.size() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : u) out << v << '\n';
}

void write_history_csv(std::ostream& out, std::span<const HistoryRow> rows) {
    out.precision(17);
    out << "step,t,dt,mass,entropy_residual_sum,entropy_scale,res_inf,mass_drift\n";
    for (const auto& r : rows)
        out << r.step << ',' << r.t << ',' << r.dt << ',' << r.mass << ',' << r.entropy_residual_sum << ','
            << r.entropy_scale << ',' << r.res_inf << ',' << r.mass_drift << '\n';
}

void write_entropy_dump(std::ostream& out, const EntropyCorrectionReport& report) {
    out.precision(17);
    out << "element,defect,alpha,production\n";
    for (std::size_t e = 0; e < report.defect.size(); ++e)
        out << e << ',' << report.defect[e] << ',' << report.alpha[e] << ',' << report.production[e] << '\n';
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
    std::vector<double> h, l1, l2, li;
    for (const auto& r : rows) {
        h.push_back(r.level.h);
        l1.push_back(r.err.l1);
        l2.push_back(r.err.l2);
        li.push_back(r.err.linf);
    }
    const auto s1 = slopes(h, l1), s2 = slopes(h, l2), si = slopes(h, li);
    out.precision(10);
    out << "n,h,n_dofs,L1,slope_L1,L2,slope_L2,Linf,slope_Linf,converged,iterations\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        auto slope = [&](const std::vector<double>& s) {
            if (i > 0 && i - 1 < s.size()) out << s[i - 1];
        };
        out << r.level.n << ',' << r.level.h << ',' << r.level.n_dofs << ',' << r.err.l1 << ',';
        slope(s1);
        out << ',' << r.err.l2 << ',';
        slope(s2);
        out << ',' << r.err.linf << ',';
        slope(si);
        out << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << '\n';
    }
}

std::vector<std::vector<double>> element_residual_table(const Discretization& d, std::span<const double> u) {
    std::vector<std::vector<double>> out;
    out.reserve(d.mesh().n_elements());
    for (int e = 0; e < d.mesh().n_elements(); ++e) {
        const ElementResidual r = element_residual(d, e, u);
        std::vector<double> psi(r.phi.begin(), r.phi.begin() + r.n_own);
        double mean = 0.0;
        for (double p : psi) mean += p;
        mean /= static_cast<double>(psi.size());
        for (double& p : psi) p -= mean;
        out.push_back(std::move(psi));
    }
    return out;
}

void write_element_residuals(std::ostream& out, const std::vector<std::vector<double>>& psi) {
    out.precision(17);
    const std::size_t n = psi.empty() ? 0 : psi.front().size();
    out << "element";
    for (std::size_t i = 0; i < n; ++i) out << ",psi_" << i;
    out << '\n';
    for (std::size_t e = 0; e < psi.size(); ++e) {
        out << e;
        for (double p : psi[e]) out << ',' << p;
        out << '\n';
    }
}

std::vector<std::vector<double>> read_element_residuals(std::istream& in) {
    std::vector<std::vector<double>> out;
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty() || line.rfind("element", 0) == 0) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) {
                first = false;
                continue;
            }
            try {
                std::size_t pos = 0;
                row.push_back(std::stod(cell, &pos));
                if (pos != cell.size() && cell.find_first_not_of(" \t\r", pos) != std::string::npos)
                    throw std::invalid_argument("");
            } catch (const std::logic_error&) {
                throw std::invalid_argument("line " + std::to_string(ln) + ": bad number '" + cell + "'");
            }
        }
        if (row.size() != 3 && row.size() != 6)
            throw std::invalid_argument("line " + std::to_string(ln) + ": expected 3 or 6 residuals");
        out.push_back(std::move(row));
    }
    return out;
}

void write_flux_graph(std::ostream& out, int element, const FluxGraph& g, std::span<const double> psi, bool header) {
    out.precision(17);
    if (header) out << "element,from,to,flux,node_defect_from\n";
    const auto sums = g.node_sums();
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const int a = g.edges[k].first;
        out << element << ',' << a << ',' << g.edges[k].second << ',' << g.flux[k] << ','
            << sums[a] - psi[a] << '\n';
    }
}

}  // namespace rdent
