#include "rdent/config.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace rdent {

ConfigError::ConfigError(const std::string& msg, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg
                                  : msg),
      line_(line), column_(column) {}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

Config Config::parse(std::istream& in) {
    Config c;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = hash == std::string::npos ? raw : raw.substr(0, hash);
        if (trim(text).empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            const auto first = text.find_first_not_of(" \t");
            throw ConfigError("expected 'key = value'", line, static_cast<int>(first) + 1);
        }
        const std::string key = trim(text.substr(0, eq));
        if (key.empty()) throw ConfigError("missing key", line, 1);
        for (char ch : key)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '_'))
                throw ConfigError("invalid character in key '" + key + "'", line,
                                  static_cast<int>(text.find(ch)) + 1);
        const std::string value = trim(text.substr(eq + 1));
        if (c.entries_.count(key))
            throw ConfigError("duplicate key '" + key + "'", line, static_cast<int>(text.find(key[0])) + 1);
        const auto vpos = text.find_first_not_of(" \t", eq + 1);
        c.entries_[key] = {value, line, static_cast<int>(vpos == std::string::npos ? eq + 1 : vpos) + 1};
    }
    return c;
}

Config Config::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

void Config::fail(const std::string& key, const std::string& msg) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(key + ": " + msg);
    throw ConfigError(key + ": " + msg, it->second.line, it->second.column);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second.value;
}

double Config::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key, "");
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) fail(key, "trailing characters in number '" + v + "'");
        return d;
    } catch (const std::logic_error&) {
        fail(key, "expected a number, got '" + v + "'");
    }
}

int Config::get_int(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key, "");
    int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) fail(key, "expected an integer, got '" + v + "'");
    return out;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get(key, "");
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    fail(key, "expected on/off, got '" + v + "'");
}

void Config::set(const std::string& key, const std::string& value) { entries_[key] = {value, 0, 0}; }

std::vector<std::string> Config::keys() const {
    std::vector<std::string> k;
    for (const auto& [key, _] : entries_) k.push_back(key);
    return k;
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> k = {
        "problem.name",        "mesh.nx",          "mesh.ny",          "mesh.diagonal",       "mesh.file",
        "mesh.list",           "space.degree",     "space.continuity", "space.basis",         "scheme.base",
        "scheme.theta_jump",   "scheme.theta_stream", "scheme.supg_theta", "scheme.entropy_correction",
        "scheme.entropy_filter", "scheme.filter_theta", "scheme.epsilon", "scheme.entropy_flux",
        "scheme.boundary_flux", "scheme.filter_quadrature", "march.cfl", "march.t_end", "march.steady_tol",
        "march.max_iters",     "march.mode",       "march.local_time_step"};
    return k;
}

template <class E>
E pick(const Config& c, const std::string& key, const std::string& fallback,
       std::initializer_list<std::pair<const char*, E>> options) {
    const std::string v = c.get(key, fallback);
    for (const auto& [name, val] : options)
        if (v == name) return val;
    std::string list;
    for (const auto& [name, _] : options) list += (list.empty() ? "" : " | ") + std::string(name);
    c.fail(key, "unknown value '" + v + "' (expected " + list + ")");
}

}  // namespace

RunSettings resolve(const Config& c) {
    for (const auto& k : c.keys())
        if (!known_keys().count(k)) c.fail(k, "unknown key");
    RunSettings s;
    s.problem_name = c.get("problem.name", "");
    if (s.problem_name.empty()) throw ConfigError("problem.name is required");
    try {
        make_problem(s.problem_name);
    } catch (const std::invalid_argument& e) {
        c.fail("problem.name", e.what());
    }

    s.mesh.nx = c.get_int("mesh.nx", 40);
    s.mesh.ny = c.get_int("mesh.ny", s.mesh.nx);
    if (s.mesh.nx < 1 || s.mesh.ny < 1) throw ConfigError("mesh.nx/mesh.ny must be >= 1");
    s.mesh.diagonal = pick<Diagonal>(c, "mesh.diagonal", "fixed",
                                     {{"fixed", Diagonal::fixed}, {"alternating", Diagonal::alternating}});
    s.mesh.file = c.get("mesh.file", "");
    const std::string list = c.get("mesh.list", "");
    std::stringstream ls(list);
    for (std::string item; std::getline(ls, item, ',');) {
        item = trim(item);
        if (item.empty()) continue;
        int n = 0;
        const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), n);
        if (ec != std::errc{} || p != item.data() + item.size() || n < 1)
            throw ConfigError("mesh.list: bad entry '" + item + "'");
        s.mesh.list.push_back(n);
    }

    s.degree = c.get_int("space.degree", 1);
    if (s.degree != 1 && s.degree != 2) throw ConfigError("space.degree must be 1 or 2");
    s.continuity = pick<Continuity>(c, "space.continuity", "continuous",
                                    {{"continuous", Continuity::continuous}, {"discontinuous", Continuity::discontinuous}});
    s.scheme.basis = pick<BasisKind>(c, "space.basis", "lagrange",
                                     {{"lagrange", BasisKind::lagrange}, {"bezier", BasisKind::bezier}});

    try {
        s.scheme.base = parse_base_scheme(c.get("scheme.base", "galerkin"));
    } catch (const std::invalid_argument& e) {
        c.fail("scheme.base", e.what());
    }
    s.scheme.theta_jump = c.get_double("scheme.theta_jump", 0.0);
    s.scheme.theta_stream = c.get_double("scheme.theta_stream", 0.0);
    s.scheme.supg_theta = c.get_double("scheme.supg_theta", 1.0);
    s.scheme.entropy_correction = c.get_bool("scheme.entropy_correction", false);
    s.scheme.entropy_filter = pick<EntropyFilter>(
        c, "scheme.entropy_filter", "none",
        {{"none", EntropyFilter::none}, {"jump", EntropyFilter::jump}, {"streamline", EntropyFilter::streamline}});
    s.scheme.filter_theta = c.get_double("scheme.filter_theta", 0.0);
    s.scheme.epsilon = c.get_double("scheme.epsilon", 1e-20);
    s.scheme.entropy_flux = pick<EntropyFluxKind>(
        c, "scheme.entropy_flux", "potential",
        {{"potential", EntropyFluxKind::potential}, {"llf_entropy", EntropyFluxKind::llf_entropy}});
    s.scheme.boundary_flux = pick<BoundaryFluxKind>(c, "scheme.boundary_flux", "llf",
                                                    {{"llf", BoundaryFluxKind::llf}, {"upwind", BoundaryFluxKind::upwind}});
    s.scheme.reduced_filter_quadrature =
        pick<bool>(c, "scheme.filter_quadrature", "full", {{"full", false}, {"reduced", true}});
    try {
        s.scheme.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    s.march.cfl = c.get_double("march.cfl", 0.3);
    if (!(s.march.cfl > 0)) throw ConfigError("march.cfl must be positive");
    s.march.t_end = c.get_double("march.t_end", 0.0);
    s.march.steady_tol = c.get_double("march.steady_tol", 1e-8);
    s.march.max_iters = c.get_int("march.max_iters", 200000);
    s.march.mode = pick<MarchMode>(c, "march.mode", "auto",
                                   {{"auto", MarchMode::automatic}, {"steady", MarchMode::steady}, {"unsteady", MarchMode::unsteady}});
    s.march.local_time_step = c.get_bool("march.local_time_step", false);
    return s;
}

void write_config(std::ostream& out, const RunSettings& s) {
    out.precision(17);
    auto onoff = [](bool b) { return b ? "on" : "off"; };
    out << "problem.name = " << s.problem_name << '\n';
    out << "mesh.nx = " << s.mesh.nx << '\n' << "mesh.ny = " << s.mesh.ny << '\n';
    out << "mesh.diagonal = " << (s.mesh.diagonal == Diagonal::fixed ? "fixed" : "alternating") << '\n';
    if (!s.mesh.file.empty()) out << "mesh.file = " << s.mesh.file << '\n';
    if (!s.mesh.list.empty()) {
        out << "mesh.list = ";
        for (std::size_t i = 0; i < s.mesh.list.size(); ++i) out << (i ? "," : "") << s.mesh.list[i];
        out << '\n';
    }
    out << "space.degree = " << s.degree << '\n';
    out << "space.continuity = " << (s.continuity == Continuity::continuous ? "continuous" : "discontinuous") << '\n';
    out << "space.basis = " << (s.scheme.basis == BasisKind::lagrange ? "lagrange" : "bezier") << '\n';
    const auto& sc = s.scheme;
    out << "scheme.base = " << to_string(sc.base) << '\n';
    out << "scheme.theta_jump = " << sc.theta_jump << '\n';
    out << "scheme.theta_stream = " << sc.theta_stream << '\n';
    out << "scheme.supg_theta = " << sc.supg_theta << '\n';
    out << "scheme.entropy_correction = " << onoff(sc.entropy_correction) << '\n';
    out << "scheme.entropy_filter = "
        << (sc.entropy_filter == EntropyFilter::none ? "none" : sc.entropy_filter == EntropyFilter::jump ? "jump" : "streamline")
        << '\n';
    out << "scheme.filter_theta = " << sc.filter_theta << '\n';
    out << "scheme.epsilon = " << sc.epsilon << '\n';
    out << "scheme.entropy_flux = " << (sc.entropy_flux == EntropyFluxKind::potential ? "potential" : "llf_entropy") << '\n';
    out << "scheme.boundary_flux = " << (sc.boundary_flux == BoundaryFluxKind::llf ? "llf" : "upwind") << '\n';
    out << "scheme.filter_quadrature = " << (sc.reduced_filter_quadrature ? "reduced" : "full") << '\n';
    out << "march.cfl = " << s.march.cfl << '\n';
    out << "march.t_end = " << s.march.t_end << '\n';
    out << "march.steady_tol = " << s.march.steady_tol << '\n';
    out << "march.max_iters = " << s.march.max_iters << '\n';
    out << "march.mode = "
        << (s.march.mode == MarchMode::automatic ? "auto" : s.march.mode == MarchMode::steady ? "steady" : "unsteady") << '\n';
    out << "march.local_time_step = " << onoff(s.march.local_time_step) << '\n';
}

}  // namespace rdent
