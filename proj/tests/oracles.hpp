#pragma once

// Independent test oracles: finite differences, chain-rule derivatives of
// u composed with the forward Frenet map, quadtree cut-cell integration
// against an analytic level function, and Monte Carlo areas. These stay
// off the library's code paths on purpose.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fife/geometry.hpp"
#include "fife/mesh.hpp"
#include "fife/quadrature.hpp"

namespace oracles {

using fife::Vec2;

inline double fd_derivative(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline Vec2 fd_gradient(const std::function<double(const Vec2&)>& f, const Vec2& x, double h) {
    return Vec2((f(x + Vec2(h, 0)) - f(x - Vec2(h, 0))) / (2 * h),
                (f(x + Vec2(0, h)) - f(x - Vec2(0, h))) / (2 * h));
}

/// Derivatives of u-hat = u o P_Gamma by the chain rule, from analytic
/// gradient and Hessian of u and the curve derivatives.
struct HatDerivatives {
    double u_eta, u_xi, u_etaeta, u_xixi;
};

inline HatDerivatives hat_derivatives(const fife::Curve& curve, double eta, double xi,
                                      const std::function<Vec2(const Vec2&)>& grad,
                                      const std::function<Eigen::Matrix2d(const Vec2&)>& hess) {
    const Vec2 d1 = curve.dg(xi);
    const Vec2 d2 = curve.d2g(xi);
    const double s = d1.norm();
    const Vec2 tau = d1 / s;
    const Vec2 n(tau.y(), -tau.x());
    const double kappa = fife::wedge(d1, d2) / (s * s * s);
    const double sp = d1.dot(d2) / s;                     // d ||g'|| / d xi
    const double kp = fife::curvature_derivative(curve, xi);

    const Vec2 x = curve.g(xi) + eta * n;
    const Vec2 gu = grad(x);
    const Eigen::Matrix2d H = hess(x);

    const Vec2 P_xi = s * (1.0 + eta * kappa) * tau;
    // n'' = (kappa s)' tau + kappa s tau' with tau' = -kappa s n
    const Vec2 n2 = (kp * s + kappa * sp) * tau - kappa * kappa * s * s * n;
    const Vec2 P_xixi = d2 + eta * n2;

    HatDerivatives h;
    h.u_eta = gu.dot(n);
    h.u_xi = gu.dot(P_xi);
    h.u_etaeta = n.dot(H * n);
    h.u_xixi = P_xi.dot(H * P_xi) + gu.dot(P_xixi);
    return h;
}

/// Integral of f over {x in box : sign(level(x)) matches side} by quadtree
/// subdivision; leaves crossed by the zero set are split by the secant
/// through the boundary crossings.
class CutIntegrator {
public:
    CutIntegrator(std::function<double(const Vec2&)> level, int max_depth = 9)
        : level_(std::move(level)), max_depth_(max_depth) {}

    double integrate(const fife::Rect& box, bool minus_side,
                     const std::function<double(const Vec2&)>& f) const {
        return recurse(box, minus_side, f, 0);
    }

private:
    std::function<double(const Vec2&)> level_;
    int max_depth_;

    static double gauss_cell(const fife::Rect& b, const std::function<double(const Vec2&)>& f) {
        static const double xs[4] = {-0.8611363115940526, -0.3399810435848563,
                                     0.3399810435848563, 0.8611363115940526};
        static const double ws[4] = {0.3478548451374538, 0.6521451548625461,
                                     0.6521451548625461, 0.3478548451374538};
        double sum = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                const Vec2 p(0.5 * (b.x0 + b.x1) + 0.5 * b.width() * xs[i],
                             0.5 * (b.y0 + b.y1) + 0.5 * b.height() * xs[j]);
                sum += ws[i] * ws[j] * f(p);
            }
        return sum * 0.25 * b.area();
    }

    static double tri_integral(const Vec2& a, const Vec2& b, const Vec2& c,
                               const std::function<double(const Vec2&)>& f) {
        // degree-2 exact rule is enough at leaf scale; use midpoints
        const double area = 0.5 * std::abs(fife::wedge(b - a, c - a));
        const Vec2 m1 = 0.5 * (a + b), m2 = 0.5 * (b + c), m3 = 0.5 * (c + a);
        return area * (f(m1) + f(m2) + f(m3)) / 3.0;
    }

    double leaf_cut(const fife::Rect& box, bool minus_side,
                    const std::function<double(const Vec2&)>& f) const {
        // polygon of the requested side bounded by the secant line
        std::vector<Vec2> poly;
        for (int k = 0; k < 4; ++k) {
            const Vec2 a = box.corner(k), b = box.corner(k + 1);
            const double la = level_(a), lb = level_(b);
            const bool keep_a = minus_side ? la < 0 : la >= 0;
            if (keep_a) poly.push_back(a);
            if ((la < 0) != (lb < 0)) {
                double lo = 0, hi = 1, fl = la;
                for (int it = 0; it < 50; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = level_(a + mid * (b - a));
                    if ((fm < 0) == (fl < 0)) lo = mid;
                    else hi = mid;
                }
                poly.push_back(a + 0.5 * (lo + hi) * (b - a));
            }
        }
        if (poly.size() < 3) return 0.0;
        Vec2 centroid = Vec2::Zero();
        for (const auto& p : poly) centroid += p;
        centroid /= static_cast<double>(poly.size());
        double sum = 0.0;
        for (size_t i = 0; i < poly.size(); ++i)
            sum += tri_integral(centroid, poly[i], poly[(i + 1) % poly.size()], f);
        return sum;
    }

    double recurse(const fife::Rect& box, bool minus_side,
                   const std::function<double(const Vec2&)>& f, int depth) const {
        bool any_minus = false, any_plus = false;
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; j <= 2; ++j) {
                const Vec2 p(box.x0 + 0.5 * i * box.width(), box.y0 + 0.5 * j * box.height());
                (level_(p) < 0 ? any_minus : any_plus) = true;
            }
        const bool uncut = !(any_minus && any_plus);
        if (uncut && depth >= 3) // sample spacing is fine enough to trust by now
            return any_minus == minus_side ? gauss_cell(box, f) : 0.0;
        if (depth >= max_depth_)
            return uncut ? (any_minus == minus_side ? gauss_cell(box, f) : 0.0)
                         : leaf_cut(box, minus_side, f);
        const double xm = 0.5 * (box.x0 + box.x1), ym = 0.5 * (box.y0 + box.y1);
        return recurse({box.x0, box.y0, xm, ym}, minus_side, f, depth + 1) +
               recurse({xm, box.y0, box.x1, ym}, minus_side, f, depth + 1) +
               recurse({box.x0, ym, xm, box.y1}, minus_side, f, depth + 1) +
               recurse({xm, ym, box.x1, box.y1}, minus_side, f, depth + 1);
    }
};

struct MonteCarloArea {
    double estimate = 0.0;
    double std_error = 0.0;
};

inline MonteCarloArea mc_area(const fife::Rect& box, const std::function<bool(const Vec2&)>& in_region,
                              long samples, unsigned seed = 12345) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.x0, box.x1), uy(box.y0, box.y1);
    long hits = 0;
    for (long i = 0; i < samples; ++i)
        if (in_region(Vec2(ux(rng), uy(rng)))) ++hits;
    const double p = static_cast<double>(hits) / samples;
    MonteCarloArea out;
    out.estimate = p * box.area();
    out.std_error = box.area() * std::sqrt(p * (1.0 - p) / samples);
    return out;
}

/// Adaptive Simpson integration on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 24) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
            const double flm = f(lm), frm = f(rm);
            const double left = (mid - lo) / 6.0 * (flo + 4 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4 * frm + fhi);
            if (d <= 0 || std::abs(left + right - whole) < 15 * tol)
                return left + right + (left + right - whole) / 15.0;
            return rec(lo, mid, flo, flm, fmid, left, d - 1) +
                   rec(mid, hi, fmid, frm, fhi, right, d - 1);
        };
    const double mid = 0.5 * (a + b);
    const double fa = f(a), fm = f(mid), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, depth);
}

} // namespace oracles
