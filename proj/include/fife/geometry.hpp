#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "fife/errors.hpp"

namespace fife {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// 2D cross product u ^ v = u^T Q v with Q = [[0,1],[-1,0]].
inline double wedge(const Vec2& u, const Vec2& v) {
    return u.x() * v.y() - u.y() * v.x();
}

/// A regular parametric curve g : [xi_begin, xi_end] -> R^2 with analytic
/// derivatives. The third derivative is optional; a central-difference
/// fallback of d2g is used when it is absent.
struct Curve {
    std::function<Vec2(double)> g;
    std::function<Vec2(double)> dg;
    std::function<Vec2(double)> d2g;
    std::function<Vec2(double)> d3g; // may be empty
    double xi_begin = 0.0;
    double xi_end = 1.0;
    bool periodic = false; // closed curve, g is xi_end-xi_begin periodic

    double domain_length() const { return xi_end - xi_begin; }

    /// True when xi lies in [xi_begin, xi_end] up to `margin`. Periodic
    /// curves accept any parameter.
    bool contains_param(double xi, double margin = 0.0) const {
        if (periodic) return true;
        return xi >= xi_begin - margin && xi <= xi_end + margin;
    }

    /// Shift xi by whole periods so it is as close as possible to ref.
    double unwrap_near(double xi, double ref) const;

    Vec2 third_derivative(double xi) const;

    static Curve circle(double radius, const Vec2& center = Vec2::Zero());
    static Curve line(const Vec2& p0, const Vec2& direction, double xi0, double xi1);
};

/// Sanity-checks a user-supplied curve: ||g'|| > 0 and the derivative
/// callables agree with finite differences of g at `probes` points.
/// Throws GeometryError on failure.
void validate_curve(const Curve& curve, int probes = 16);

/// Checks that n = Q tau points into the plus side reported by
/// `in_plus` at `samples` points along the curve. Throws ConfigError
/// on mismatch instead of silently flipping the orientation.
void validate_orientation(const Curve& curve,
                          const std::function<bool(const Vec2&)>& in_plus,
                          int samples = 32,
                          double offset = 1e-4);

/// Frenet frame of the curve at a parameter value.
struct FrenetFrame {
    Vec2 tau;     // unit tangent
    Vec2 n;       // unit normal, n = Q tau
    double kappa; // signed curvature
    double speed; // ||g'||
};

/// Point expressed in Frenet coordinates: signed normal offset eta and
/// curve parameter xi.
struct FrenetPoint {
    double eta = 0.0;
    double xi = 0.0;
};

FrenetFrame frenet_apparatus(const Curve& curve, double xi);

/// d kappa / d xi, analytic when d3g is available, else finite differences.
double curvature_derivative(const Curve& curve, double xi);

/// Forward Frenet map x = g(xi) + eta * n(xi).
Vec2 frenet_forward(const Curve& curve, const FrenetPoint& p);

/// Jacobian of the forward map, columns [n, ||g'|| (1 + eta kappa) tau].
Mat2 frenet_forward_jacobian(const Curve& curve, const FrenetPoint& p);

/// Inverse Frenet map by Newton iteration started from `hint`.
FrenetPoint frenet_inverse(const Curve& curve, const Vec2& x, const FrenetPoint& hint,
                           double tol = 1e-12, int max_iter = 50);

/// Parameter of the closest curve point to x: coarse line search, one
/// Newton step, then Barzilai-Borwein descent on |g(xi)-x|^2.
double closest_point_param(const Curve& curve, const Vec2& x,
                           int scan_samples = 200, int max_iter = 50);

/// Metric coefficients of the Frenet Laplacian
///   L(u) = u_ee + J0 u_xx + J1 u_e + J2 u_x
/// at (eta, xi), together with their eta-derivatives at eta = 0 up to
/// order max_order.
struct MetricCoeffs {
    double J0 = 0.0;
    double J1 = 0.0;
    double J2 = 0.0;
    // d_eta[i][l] = d^l J_i / d eta^l at (0, xi), l = 0..max_order
    std::array<std::vector<double>, 3> d_eta;
};

MetricCoeffs metric_coeffs(const Curve& curve, double xi, double eta, int max_order);

/// Push a Frenet-coordinate gradient (du_eta, du_xi) forward to the
/// Cartesian gradient at the given tube point.
Vec2 pushforward_gradient(const Curve& curve, const FrenetPoint& p,
                          double du_eta, double du_xi);

} // namespace fife
