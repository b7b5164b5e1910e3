#pragma once

#include <functional>
#include <limits>
#include <string>
#include <string_view>

#include "rdent/geometry.hpp"
#include "rdent/mesh.hpp"

namespace rdent {

/// Physical flux f(u) = (f_x, f_y) and wave speed a(u) = f'(u).
struct FluxFunction {
    std::function<Vec2(double)> f;
    std::function<Vec2(double)> a;
    /// Open interval of admissible states.
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    bool admissible(double u) const { return std::isfinite(u) && u > lower && u < upper; }
    /// Throws DomainError if u is not admissible.
    void check(double u, int location = -1) const;
};

/// Entropy U with flux g, entropy variable V = U', its inverse and the
/// potential θ(V) = V f(u(V)) - g(u(V)).
struct EntropyPair {
    std::function<double(double)> U;
    std::function<Vec2(double)> g;
    std::function<double(double)> V;
    std::function<double(double)> u_of_V;
    /// U''(u)
    std::function<double(double)> hessian;
    /// θ as a function of the entropy variable.
    std::function<Vec2(double)> theta;
};

enum class ProblemMode { steady, unsteady };

struct ProblemSpec {
    std::string name;
    FluxFunction flux;
    EntropyPair entropy;
    Rect domain;
    std::function<double(const Vec2&, BoundaryTag)> boundary;
    /// Initial state (unsteady) or starting guess (steady).
    std::function<double(const Vec2&)> initial;
    /// Empty when no exact solution is known.
    std::function<double(const Vec2&)> exact;
    ProblemMode mode = ProblemMode::steady;
    double t_end = 0.0;
};

/// ½(f(uL)+f(uR))·n − ½ s (uR−uL), s = max(|a(uL)·n|, |a(uR)·n|). n may be scaled.
double llf_flux(const FluxFunction& flux, double uL, double uR, const Vec2& n);
/// f(u)·n if a(½(u+ub))·n >= 0, else f(ub)·n.
double upwind_flux(const FluxFunction& flux, double u, double ub, const Vec2& n);

enum class EntropyFluxKind {
    potential,    ///< {V}·f̂(VL,VR) − θ({V})·n with f̂ the interior LLF flux
    llf_entropy,  ///< ½(g(uL)+g(uR))·n − ½ s (VR−VL)
};

double entropy_numerical_flux(const ProblemSpec& problem, double VL, double VR, const Vec2& n,
                              EntropyFluxKind kind = EntropyFluxKind::potential);

/// sqrt_advect | sinh_steady | sinh_burgers
ProblemSpec make_problem(std::string_view name);

/// Inflow profile of the smooth steady problem on the line y = 0: s − ½ for
/// s >= 0, flattened smoothly for s < 0 so that no characteristic entering the
/// unit square crosses another.
double sinh_inflow_profile(double s);
/// Exact steady solution by characteristics: u = u0(s) with s + y cosh(u0(s)) = x.
/// Where s >= 0 this is the root of u + y cosh u − x + ½ = 0.
double exact_sinh_steady(double x, double y);

}  // namespace rdent
