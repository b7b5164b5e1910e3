#pragma once

#include <random>
#include <vector>

#include "rdent/audit.hpp"
#include "rdent/problems.hpp"

namespace testing {

/// Linear advection f = (u, 0) with the square entropy; handy for hand checks.
inline rdent::ProblemSpec linear_x_problem() {
    using namespace rdent;
    ProblemSpec p;
    p.name = "linear_x";
    p.flux.f = [](double u) { return Vec2{u, 0.0}; };
    p.flux.a = [](double) { return Vec2{1.0, 0.0}; };
    p.entropy.U = [](double u) { return 0.5 * u * u; };
    p.entropy.V = [](double u) { return u; };
    p.entropy.u_of_V = [](double v) { return v; };
    p.entropy.hessian = [](double) { return 1.0; };
    p.entropy.g = [](double u) { return Vec2{0.5 * u * u, 0.0}; };
    p.entropy.theta = [](double v) { return Vec2{0.5 * v * v, 0.0}; };
    p.domain = {0.0, 1.0, 0.0, 1.0};
    p.boundary = [](const Vec2&, BoundaryTag) { return 0.0; };
    p.initial = [](const Vec2&) { return 0.0; };
    return p;
}

inline std::vector<double> random_state(std::mt19937& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> u(n);
    for (double& x : u) x = d(rng);
    return u;
}

}  // namespace testing
