#include "fife/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fife {

namespace {
constexpr double kDegenerateSpeed = 1e-13;
} // namespace

double Curve::unwrap_near(double xi, double ref) const {
    if (!periodic) return xi;
    const double period = domain_length();
    double k = std::round((ref - xi) / period);
    return xi + k * period;
}

Vec2 Curve::third_derivative(double xi) const {
    if (d3g) return d3g(xi);
    const double step = 1e-6 * domain_length();
    return (d2g(xi + step) - d2g(xi - step)) / (2.0 * step);
}

Curve Curve::circle(double radius, const Vec2& center) {
    Curve c;
    c.g = [=](double t) { return Vec2(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t)); };
    c.dg = [=](double t) { return Vec2(-radius * std::sin(t), radius * std::cos(t)); };
    c.d2g = [=](double t) { return Vec2(-radius * std::cos(t), -radius * std::sin(t)); };
    c.d3g = [=](double t) { return Vec2(radius * std::sin(t), -radius * std::cos(t)); };
    c.xi_begin = 0.0;
    c.xi_end = 2.0 * std::numbers::pi;
    c.periodic = true;
    return c;
}

Curve Curve::line(const Vec2& p0, const Vec2& direction, double xi0, double xi1) {
    Curve c;
    c.g = [=](double t) { return Vec2(p0 + t * direction); };
    c.dg = [=](double) { return direction; };
    c.d2g = [=](double) { return Vec2(Vec2::Zero()); };
    c.d3g = [=](double) { return Vec2(Vec2::Zero()); };
    c.xi_begin = xi0;
    c.xi_end = xi1;
    c.periodic = false;
    return c;
}

void validate_curve(const Curve& curve, int probes) {
    if (!curve.g || !curve.dg || !curve.d2g)
        throw GeometryError("curve is missing g, dg or d2g");
    if (!(curve.xi_end > curve.xi_begin))
        throw GeometryError("curve has an empty parameter domain");

    const double len = curve.domain_length();
    const double delta = 1e-5 * len;
    for (int i = 0; i < probes; ++i) {
        // keep probe stencils inside the domain for open curves
        const double lo = curve.periodic ? curve.xi_begin : curve.xi_begin + 2 * delta;
        const double hi = curve.periodic ? curve.xi_end : curve.xi_end - 2 * delta;
        const double xi = lo + (hi - lo) * (i + 0.5) / probes;

        const double speed = curve.dg(xi).norm();
        if (speed <= kDegenerateSpeed)
            throw GeometryError("curve parametrization is not regular: ||g'|| ~ 0");

        const Vec2 fd1 = (curve.g(xi + delta) - curve.g(xi - delta)) / (2 * delta);
        if ((fd1 - curve.dg(xi)).norm() > 1e-6 * (1.0 + speed))
            throw GeometryError("dg is inconsistent with finite differences of g");

        const Vec2 fd2 = (curve.dg(xi + delta) - curve.dg(xi - delta)) / (2 * delta);
        if ((fd2 - curve.d2g(xi)).norm() > 1e-5 * (1.0 + curve.d2g(xi).norm()))
            throw GeometryError("d2g is inconsistent with finite differences of dg");
    }
}

void validate_orientation(const Curve& curve,
                          const std::function<bool(const Vec2&)>& in_plus,
                          int samples, double offset) {
    for (int i = 0; i < samples; ++i) {
        const double xi = curve.xi_begin + curve.domain_length() * (i + 0.5) / samples;
        const FrenetFrame fr = frenet_apparatus(curve, xi);
        const Vec2 base = curve.g(xi);
        if (!in_plus(base + offset * fr.n) || in_plus(base - offset * fr.n))
            throw ConfigError("curve orientation mismatch: n = Q tau does not point into the plus side");
    }
}

FrenetFrame frenet_apparatus(const Curve& curve, double xi) {
    const Vec2 d1 = curve.dg(xi);
    const double speed = d1.norm();
    if (speed < kDegenerateSpeed)
        throw GeometryError("degenerate tangent: ||g'(xi)|| < 1e-13");
    FrenetFrame f;
    f.speed = speed;
    f.tau = d1 / speed;
    f.n = Vec2(f.tau.y(), -f.tau.x()); // Q tau
    f.kappa = wedge(d1, curve.d2g(xi)) / (speed * speed * speed);
    return f;
}

double curvature_derivative(const Curve& curve, double xi) {
    const Vec2 d1 = curve.dg(xi);
    const Vec2 d2 = curve.d2g(xi);
    const Vec2 d3 = curve.third_derivative(xi);
    const double s2 = d1.squaredNorm();
    const double s = std::sqrt(s2);
    if (s < kDegenerateSpeed)
        throw GeometryError("degenerate tangent in curvature_derivative");
    const double s3 = s2 * s;
    // kappa = (g' ^ g'') / ||g'||^3
    return wedge(d1, d3) / s3 - 3.0 * wedge(d1, d2) * d1.dot(d2) / (s3 * s2);
}

Vec2 frenet_forward(const Curve& curve, const FrenetPoint& p) {
    const FrenetFrame f = frenet_apparatus(curve, p.xi);
    return curve.g(p.xi) + p.eta * f.n;
}

Mat2 frenet_forward_jacobian(const Curve& curve, const FrenetPoint& p) {
    const FrenetFrame f = frenet_apparatus(curve, p.xi);
    Mat2 jac;
    jac.col(0) = f.n;
    jac.col(1) = f.speed * (1.0 + p.eta * f.kappa) * f.tau;
    return jac;
}

FrenetPoint frenet_inverse(const Curve& curve, const Vec2& x, const FrenetPoint& hint,
                           double tol, int max_iter) {
    const double margin = 0.05 * curve.domain_length();
    const double resid_tol = tol * (1.0 + x.norm());

    FrenetPoint p = hint;
    if (!std::isfinite(p.eta) || !std::isfinite(p.xi))
        throw ConvergenceError("frenet_inverse: non-finite hint");

    Vec2 r = frenet_forward(curve, p) - x;
    for (int it = 0; it < max_iter; ++it) {
        if (r.norm() <= resid_tol) return p;

        const FrenetFrame f = frenet_apparatus(curve, p.xi);
        const double rho = 1.0 + p.eta * f.kappa;
        if (rho <= 1e-12)
            throw GeometryError("frenet_inverse left the valid tube: 1 + eta kappa <= 0");

        // DR_Gamma rows are n^T and psi/||g'|| tau^T
        double d_eta = f.n.dot(r);
        double d_xi = f.tau.dot(r) / (f.speed * rho);

        // damped update: keep the residual decreasing
        double scale = 1.0;
        FrenetPoint next = p;
        for (int half = 0; half < 6; ++half) {
            next.eta = p.eta - scale * d_eta;
            next.xi = p.xi - scale * d_xi;
            if (!curve.contains_param(next.xi, margin))
                throw DomainError("frenet_inverse: xi left the parameter domain");
            const Vec2 rn = frenet_forward(curve, next) - x;
            if (rn.norm() < r.norm() || scale < 0.05) {
                r = rn;
                break;
            }
            scale *= 0.5;
        }
        p = next;
    }
    if (r.norm() <= resid_tol) return p;
    throw ConvergenceError("frenet_inverse: Newton iteration did not converge");
}

namespace {

double dist2(const Curve& curve, double xi, const Vec2& x) {
    return (curve.g(xi) - x).squaredNorm();
}

double dist2_deriv(const Curve& curve, double xi, const Vec2& x) {
    return 2.0 * curve.dg(xi).dot(curve.g(xi) - x);
}

} // namespace

double closest_point_param(const Curve& curve, const Vec2& x,
                           int scan_samples, int max_iter) {
    const double a = curve.xi_begin;
    const double len = curve.domain_length();
    const double step = len / scan_samples;

    // coarse line search over the whole domain
    std::vector<double> f(scan_samples + 1);
    for (int i = 0; i <= scan_samples; ++i) f[i] = dist2(curve, a + i * step, x);

    int best = 0;
    for (int i = 1; i <= scan_samples; ++i)
        if (f[i] < f[best]) best = i;

    // ambiguity check: a second local minimum at a distinct curve point
    // with nearly the same distance means x is outside the tube
    const double best_dist = std::sqrt(f[best]);
    for (int i = 1; i < scan_samples; ++i) {
        if (f[i] > f[i - 1] || f[i] > f[i + 1]) continue;
        if (std::abs(i - best) <= 2) continue;
        const Vec2 gap = curve.g(a + i * step) - curve.g(a + best * step);
        if (gap.norm() < 1e-6 * (1.0 + best_dist)) continue; // same physical point
        if (std::sqrt(f[i]) - best_dist < 1e-9 * (1.0 + best_dist))
            throw GeometryError("closest_point_param: ambiguous projection, two minima tie");
    }

    double xi = a + best * step;

    // one Newton iteration on |g(xi)-x|^2 = 0 (helps when x lies on the curve)
    {
        const double d = dist2_deriv(curve, xi, x);
        if (std::abs(d) > 1e-14) {
            const double cand = xi - dist2(curve, xi, x) / d;
            if (curve.contains_param(cand, 0.0) || curve.periodic) {
                if (dist2(curve, cand, x) < dist2(curve, xi, x)) xi = cand;
            }
        }
    }

    // Barzilai-Borwein descent on the squared distance; in 1D the BB step
    // is the secant step for the stationarity equation
    const double tol = 1e-12 * (1.0 + x.squaredNorm());
    double xi_prev = (best > 0) ? a + (best - 1) * step : a + step;
    if (xi_prev == xi) xi_prev = xi + 0.5 * step;
    double d_prev = dist2_deriv(curve, xi_prev, x);
    double d = dist2_deriv(curve, xi, x);

    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(d) <= tol) return xi;
        const double denom = d - d_prev;
        double gamma;
        if (std::abs(denom) > 1e-300)
            gamma = (xi - xi_prev) / denom;
        else
            gamma = step / (1.0 + std::abs(d));
        double next = xi - d * gamma;
        if (!curve.periodic)
            next = std::clamp(next, a, curve.xi_end);
        if (next == xi) break;
        xi_prev = xi;
        d_prev = d;
        xi = next;
        d = dist2_deriv(curve, xi, x);
    }
    if (std::abs(d) <= 1e3 * tol) return xi;
    throw ConvergenceError("closest_point_param: descent did not reach stationarity");
}

MetricCoeffs metric_coeffs(const Curve& curve, double xi, double eta, int max_order) {
    const Vec2 d1 = curve.dg(xi);
    const Vec2 d2 = curve.d2g(xi);
    const double s2 = d1.squaredNorm();
    const double s = std::sqrt(s2);
    if (s < kDegenerateSpeed)
        throw GeometryError("degenerate tangent in metric_coeffs");

    const double kappa = wedge(d1, d2) / (s2 * s);
    const double rho = 1.0 + eta * kappa;
    if (rho <= 0.0)
        throw GeometryError("metric_coeffs: 1 + eta kappa <= 0, point outside the valid tube");
    const double psi = 1.0 / rho;
    const double kp = curvature_derivative(curve, xi);
    const double gdot = d1.dot(d2);

    MetricCoeffs mc;
    mc.J0 = (psi / s) * (psi / s);
    mc.J1 = kappa * psi;
    mc.J2 = -(psi / s) * (psi / s) * (eta * kp * psi + gdot / s2);

    double factorial = 1.0;      // l!
    double kappa_pow = 1.0;      // kappa^l
    double kappa_pow_prev = 0.0; // kappa^(l-1), meaningful for l >= 1
    for (int l = 0; l <= max_order; ++l) {
        if (l > 0) {
            factorial *= l;
            kappa_pow_prev = kappa_pow;
            kappa_pow *= kappa;
        }
        const double sign = (l % 2 == 0) ? 1.0 : -1.0;
        const double fact_l1 = factorial * (l + 1); // (l+1)!
        mc.d_eta[0].push_back(sign * fact_l1 * kappa_pow / s2);
        mc.d_eta[1].push_back(kappa * sign * factorial * kappa_pow);
        double j2 = -gdot / (s2 * s2) * sign * fact_l1 * kappa_pow;
        if (l >= 1)
            j2 -= kp / s2 * (l * (-sign) * fact_l1 / 2.0 * kappa_pow_prev);
        mc.d_eta[2].push_back(j2);
    }
    return mc;
}

Vec2 pushforward_gradient(const Curve& curve, const FrenetPoint& p,
                          double du_eta, double du_xi) {
    const FrenetFrame f = frenet_apparatus(curve, p.xi);
    const double rho = 1.0 + p.eta * f.kappa;
    if (rho <= 0.0)
        throw GeometryError("pushforward_gradient: point outside the valid tube");
    return du_eta * f.n + du_xi / (f.speed * rho) * f.tau;
}

} // namespace fife
