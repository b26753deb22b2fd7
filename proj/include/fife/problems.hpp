#pragma once

#include "fife/solver.hpp"

namespace fife {

/// A manufactured interface problem: geometry, coefficients and exact
/// solution with its per-side derivatives.
struct ExampleProblem {
    Rect domain;
    Curve curve;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    SideFunction u;        // exact solution per side
    SideGradient grad_u;
    SideFunction f;        // -div(beta grad u) per side
    SideFunction g;        // Dirichlet trace (= u)
    std::function<bool(const Vec2&)> in_plus;
};

/// Circular interface |x| = 1/sqrt(3) in (-1,1)^2 with the piecewise
/// cos(pi |x|^2) solution; continuous with continuous flux across the circle.
ExampleProblem make_example1(double beta_minus, double beta_plus);

/// Quartic level-set interface (x^2-y^2)^2 - 4x^2y^2 + 1/2 = 0 in
/// (0.6,1.6)x(0.2,1.2); the solution mixes the level function and its
/// harmonic conjugate, so it is piecewise harmonic (f = 0).
ExampleProblem make_example2(double beta_minus, double beta_plus);

/// Analytic check that the Example 1 solution satisfies value and flux
/// continuity at `samples` interface points. Throws ConfigError on failure.
void verify_example1_interface(double beta_minus, double beta_plus, int samples = 20);

} // namespace fife
