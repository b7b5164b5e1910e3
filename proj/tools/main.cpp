#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "rdent/config.hpp"
#include "rdent/errors.hpp"
#include "rdent/fvrecover.hpp"
#include "rdent/io.hpp"

namespace fs = std::filesystem;
using namespace rdent;

namespace {

struct Options {
    std::string config;
    std::string input;
    std::string out = ".";
    bool deterministic = false;
    bool dump_entropy = false;
};

struct Setup {
    RunSettings settings;
    ProblemSpec problem;
    Mesh mesh;
    DofMap dofmap;
    std::unique_ptr<Discretization> disc;
};

RunSettings load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return resolve(Config::parse(in));
}

std::unique_ptr<Setup> build(const RunSettings& s, int n_override = 0) {
    auto su = std::make_unique<Setup>();
    su->settings = s;
    su->problem = make_problem(s.problem_name);
    if (!s.mesh.file.empty() && n_override == 0) {
        std::ifstream in(s.mesh.file);
        if (!in) throw ConfigError("mesh.file: cannot open '" + s.mesh.file + "'");
        su->mesh = read_mesh(in);
    } else {
        const int nx = n_override ? n_override : s.mesh.nx;
        const int ny = n_override ? n_override : s.mesh.ny;
        su->mesh = build_rect_mesh(su->problem.domain, nx, ny, s.mesh.diagonal);
    }
    su->dofmap = build_dof_map(su->mesh, s.degree, s.continuity);
    su->disc = std::make_unique<Discretization>(su->mesh, su->dofmap, su->problem, s.scheme);
    return su;
}

std::ofstream open_out(const Options& o, const std::string& name) {
    fs::create_directories(o.out);
    std::ofstream f(fs::path(o.out) / name);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(o.out) / name).string());
    return f;
}

void write_effective(const Options& o, const RunSettings& s) {
    auto f = open_out(o, "config.effective");
    write_config(f, s);
}

int cmd_run(const Options& o) {
    const RunSettings s = load(o.config);
    auto su = build(s);
    write_effective(o, s);
    const auto& d = *su->disc;
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = march(d, d.interpolate(su->problem.initial), s.march);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    {
        auto f = open_out(o, "history.csv");
        write_history_csv(f, res.history);
    }
    {
        auto f = open_out(o, "field.vtk");
        write_field_vtk(f, su->dofmap, res.state);
    }
    {
        auto f = open_out(o, "element_residuals.csv");
        write_element_residuals(f, element_residual_table(d, res.state));
    }
    if (o.dump_entropy) {
        auto f = open_out(o, "entropy_dump.csv");
        write_entropy_dump(f, entropy_report(d, res.state));
    }
    std::printf("%s: %d elements, %d dofs, %d steps, t = %.6g, %s (%.2f s)\n", s.problem_name.c_str(),
                su->mesh.n_elements(), su->dofmap.n_dofs(), res.steps, res.time,
                res.converged ? "converged" : "not converged", secs);
    if (su->problem.exact) {
        const auto e = error_norms(d, res.state, su->problem.exact);
        std::printf("errors: L1 %.6e  L2 %.6e  Linf %.6e\n", e.l1, e.l2, e.linf);
    }
    return 0;
}

int cmd_convergence(const Options& o) {
    const RunSettings s = load(o.config);
    if (s.mesh.list.empty()) throw ConfigError("convergence needs mesh.list");
    StudySetup st;
    st.problem = make_problem(s.problem_name);
    if (!st.problem.exact) throw ConfigError("problem '" + s.problem_name + "' has no exact solution");
    st.scheme = s.scheme;
    st.degree = s.degree;
    st.continuity = s.continuity;
    st.diagonal = s.mesh.diagonal;
    st.march = s.march;
    st.march.mode = MarchMode::steady;
    st.nested_start = true;
    write_effective(o, s);
    const auto rows = convergence_study(st, s.mesh.list);
    {
        auto f = open_out(o, "convergence.csv");
        write_convergence_csv(f, rows);
    }
    write_convergence_csv(std::cout, rows);
    for (const auto& r : rows)
        if (!r.converged) std::fprintf(stderr, "warning: N=%d did not reach the steady tolerance\n", r.level.n);
    return 0;
}

int cmd_audit(const Options& o) {
    const RunSettings s = load(o.config);
    std::vector<HistoryRow> hist[2];
    for (int pass = 0; pass < 2; ++pass) {
        RunSettings sp = s;
        sp.scheme.entropy_correction = pass == 0;
        auto su = build(sp);
        const auto& d = *su->disc;
        hist[pass] = march(d, d.interpolate(su->problem.initial), sp.march).history;
    }
    write_effective(o, s);
    auto f = open_out(o, "audit.csv");
    f.precision(17);
    f << "step,t,mass,mass_drift_rel,entropy_sum_on,entropy_scale_on,entropy_sum_off,entropy_scale_off\n";
    const std::size_t n = std::min(hist[0].size(), hist[1].size());
    double worst_drift = 0.0, worst_on = 0.0, min_off = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = hist[0][i];
        const auto& b = hist[1][i];
        const double drift = std::abs(a.mass_drift) / std::max(std::abs(a.mass), 1e-300);
        f << a.step << ',' << a.t << ',' << a.mass << ',' << drift << ',' << a.entropy_residual_sum << ','
          << a.entropy_scale << ',' << b.entropy_residual_sum << ',' << b.entropy_scale << '\n';
        worst_drift = std::max(worst_drift, drift);
        worst_on = std::max(worst_on, std::abs(a.entropy_residual_sum) / (1.0 + a.entropy_scale));
        if (i > 0) min_off = std::min(min_off, std::abs(b.entropy_residual_sum) / (1.0 + b.entropy_scale));
    }
    std::printf("steps %zu\nmax relative mass drift %.3e\nmax entropy sum (on)  %.3e\nmin entropy sum (off) %.3e\n", n,
                worst_drift, worst_on, min_off);
    return 0;
}

int cmd_recover(const Options& o) {
    std::ifstream in(o.input);
    if (!in) throw ConfigError("cannot open residual file '" + o.input + "'");
    const auto table = read_element_residuals(in);
    auto f = open_out(o, "fluxes.csv");
    double worst = 0.0;
    for (std::size_t e = 0; e < table.size(); ++e) {
        const auto& psi = table[e];
        const FluxGraph g = recover_laplacian(psi, psi.size() == 3 ? p1_graph() : p2_graph());
        write_flux_graph(f, static_cast<int>(e), g, psi, e == 0);
        const auto sums = g.node_sums();
        for (std::size_t i = 0; i < psi.size(); ++i) worst = std::max(worst, std::abs(sums[i] - psi[i]));
    }
    std::printf("%zu elements, max node defect %.3e\n", table.size(), worst);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Residual distribution solver with entropy correction"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "configuration file")->required();
        sub->add_option("--out", o.out, "output directory");
        sub->add_flag("--deterministic", o.deterministic, "fixed-order reductions (always on)");
    };
    auto* run = app.add_subcommand("run", "march one configuration");
    add_common(run);
    run->add_flag("--dump-entropy", o.dump_entropy, "write per-element defect and alpha");
    auto* conv = app.add_subcommand("convergence", "steady solves over mesh.list");
    add_common(conv);
    auto* audit = app.add_subcommand("audit", "mass and entropy audit, correction on and off");
    add_common(audit);
    auto* rec = app.add_subcommand("recover", "recover edge fluxes from a CSV of element residuals");
    rec->add_option("--input", o.input, "element residual CSV (as written by run)")->required();
    rec->add_option("--config", o.config, "unused; accepted for symmetry");
    rec->add_option("--out", o.out, "output directory");
    rec->add_flag("--deterministic", o.deterministic, "fixed-order reductions (always on)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        if (*run) return cmd_run(o);
        if (*conv) return cmd_convergence(o);
        if (*audit) return cmd_audit(o);
        if (*rec) return cmd_recover(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
