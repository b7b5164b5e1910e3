#include "rdent/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rdent/errors.hpp"

namespace rdent {

void FluxFunction::check(double u, int location) const {
    if (!admissible(u))
        throw DomainError("inadmissible state " + std::to_string(u) +
                              (location >= 0 ? " at index " + std::to_string(location) : std::string{}),
                          u, location);
}

double llf_flux(const FluxFunction& flux, double uL, double uR, const Vec2& n) {
    flux.check(uL);
    flux.check(uR);
    const double s = std::max(std::abs(dot(flux.a(uL), n)), std::abs(dot(flux.a(uR), n)));
    return 0.5 * dot(flux.f(uL) + flux.f(uR), n) - 0.5 * s * (uR - uL);
}

double upwind_flux(const FluxFunction& flux, double u, double ub, const Vec2& n) {
    flux.check(u);
    flux.check(ub);
    const double um = 0.5 * (u + ub);
    return dot(flux.a(um), n) >= 0.0 ? dot(flux.f(u), n) : dot(flux.f(ub), n);
}

double entropy_numerical_flux(const ProblemSpec& p, double VL, double VR, const Vec2& n, EntropyFluxKind kind) {
    const auto& e = p.entropy;
    const double uL = e.u_of_V(VL), uR = e.u_of_V(VR);
    if (kind == EntropyFluxKind::potential) {
        const double Vm = 0.5 * (VL + VR);
        return Vm * llf_flux(p.flux, uL, uR, n) - dot(e.theta(Vm), n);
    }
    p.flux.check(uL);
    p.flux.check(uR);
    const double s = std::max(std::abs(dot(p.flux.a(uL), n)), std::abs(dot(p.flux.a(uR), n)));
    return 0.5 * dot(e.g(uL) + e.g(uR), n) - 0.5 * s * (VR - VL);
}

namespace {

EntropyPair square_entropy(std::function<Vec2(double)> g, std::function<Vec2(double)> theta) {
    EntropyPair e;
    e.U = [](double u) { return 0.5 * u * u; };
    e.V = [](double u) { return u; };
    e.u_of_V = [](double v) { return v; };
    e.hessian = [](double) { return 1.0; };
    e.g = std::move(g);
    e.theta = std::move(theta);
    return e;
}

FluxFunction sinh_flux() {
    FluxFunction f;
    f.f = [](double u) { return Vec2{std::sinh(u), u}; };
    f.a = [](double u) { return Vec2{std::cosh(u), 1.0}; };
    return f;
}

EntropyPair sinh_entropy() {
    return square_entropy([](double u) { return Vec2{u * std::sinh(u) - std::cosh(u) + 1.0, 0.5 * u * u}; },
                          [](double v) { return Vec2{std::cosh(v) - 1.0, 0.5 * v * v}; });
}

constexpr double kProfileWidth = 0.3;

double profile_slope(double s) {
    if (s >= 0.0) return 1.0;
    const double t = s / kProfileWidth;
    return std::pow(1.0 + t * t * t * t, -1.25);
}

}  // namespace

double sinh_inflow_profile(double s) {
    if (s >= 0.0) return s - 0.5;
    const double t = s / kProfileWidth;
    return -0.5 + s / std::pow(1.0 + t * t * t * t, 0.25);
}

double exact_sinh_steady(double x, double y) {
    if (y == 0.0) return sinh_inflow_profile(x);
    auto G = [x, y](double s) { return s + y * std::cosh(sinh_inflow_profile(s)) - x; };
    // G is strictly increasing; G(x - y) >= 0 since cosh >= 1.
    double hi = x - y;
    if (G(hi) == 0.0) return sinh_inflow_profile(hi);
    double lo = hi - 1.0;
    while (G(lo) >= 0.0) lo -= 2.0 * (hi - lo);
    double s = std::clamp(x - y * std::cosh(x - 0.5), lo, hi);
    for (int it = 0; it < 200; ++it) {
        const double u = sinh_inflow_profile(s);
        const double g = s + y * std::cosh(u) - x;
        if (g > 0.0) hi = s; else lo = s;
        const double dg = 1.0 + y * std::sinh(u) * profile_slope(s);
        double next = s - g / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - s) <= 1e-15 * (1.0 + std::abs(s)) || hi - lo <= 1e-15 * (1.0 + std::abs(s)))
            return sinh_inflow_profile(next);
        s = next;
    }
    throw NumericalError("exact_sinh_steady: no convergence at (" + std::to_string(x) + ", " + std::to_string(y) + ")");
}

ProblemSpec make_problem(std::string_view name) {
    ProblemSpec p;
    p.name = std::string(name);
    if (name == "sqrt_advect") {
        p.flux.f = [](double u) { return Vec2{std::sqrt(u), u}; };
        p.flux.a = [](double u) { return Vec2{0.5 / std::sqrt(u), 1.0}; };
        p.flux.lower = 0.0;
        p.entropy = square_entropy([](double u) { return Vec2{u * std::sqrt(u) / 3.0, 0.5 * u * u}; },
                                   [](double v) { return Vec2{2.0 * v * std::sqrt(v) / 3.0, 0.5 * v * v}; });
        p.domain = {-20.0, 20.0, -20.0, 20.0};
        p.initial = [](const Vec2& x) {
            const double r = norm(x - Vec2{-5.0, -5.0});
            return r < 0.5 ? 1.0 + 2.0 * std::sin(std::numbers::pi / 4.0 * (1.0 - 2.0 * r)) : 1.0;
        };
        p.boundary = [init = p.initial](const Vec2& x, BoundaryTag) { return init(x); };
        p.mode = ProblemMode::unsteady;
        p.t_end = 5.0;
    } else if (name == "sinh_steady") {
        p.flux = sinh_flux();
        p.entropy = sinh_entropy();
        p.domain = {0.0, 1.0, 0.0, 1.0};
        p.exact = [](const Vec2& x) { return exact_sinh_steady(x.x, x.y); };
        p.boundary = [](const Vec2& x, BoundaryTag) { return exact_sinh_steady(x.x, x.y); };
        p.initial = [](const Vec2&) { return 0.0; };
        p.mode = ProblemMode::steady;
    } else if (name == "sinh_burgers") {
        p.flux = sinh_flux();
        p.entropy = sinh_entropy();
        p.domain = {0.0, 1.0, 0.0, 1.0};
        p.boundary = [](const Vec2& x, BoundaryTag) { return 0.5 - x.x; };
        p.initial = [](const Vec2& x) { return 0.5 - x.x; };
        p.mode = ProblemMode::steady;
    } else {
        throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
    }
    return p;
}

}  // namespace rdent
