#include "fife/problems.hpp"

#include <cmath>
#include <numbers>

namespace fife {

namespace {
constexpr double kPi = std::numbers::pi;
}

ExampleProblem make_example1(double beta_minus, double beta_plus) {
    ExampleProblem p;
    p.domain = Rect{-1.0, -1.0, 1.0, 1.0};
    const double r0 = 1.0 / std::sqrt(3.0);
    p.curve = Curve::circle(r0);
    p.beta_minus = beta_minus;
    p.beta_plus = beta_plus;

    const double jump_const = std::cos(kPi * r0 * r0) * (1.0 / beta_minus - 1.0 / beta_plus);
    p.u = [=](const Vec2& x, Side s) {
        const double r2 = x.squaredNorm();
        if (s == Side::minus) return std::cos(kPi * r2) / beta_minus;
        return std::cos(kPi * r2) / beta_plus + jump_const;
    };
    p.grad_u = [=](const Vec2& x, Side s) {
        const double beta = s == Side::minus ? beta_minus : beta_plus;
        return Vec2(-2.0 * kPi * std::sin(kPi * x.squaredNorm()) / beta * x);
    };
    p.f = [](const Vec2& x, Side) {
        const double r2 = x.squaredNorm();
        return 4.0 * kPi * std::sin(kPi * r2) + 4.0 * kPi * kPi * r2 * std::cos(kPi * r2);
    };
    p.g = p.u;
    p.in_plus = [=](const Vec2& x) { return x.norm() > r0; };
    return p;
}

namespace {

// level function of the Example 2 interface and its harmonic conjugate
double level_L(const Vec2& x) {
    const double a = x.x() * x.x() - x.y() * x.y();
    return a * a - 4.0 * x.x() * x.x() * x.y() * x.y() + 0.5;
}

Vec2 grad_L(const Vec2& x) {
    const double xx = x.x(), yy = x.y();
    return Vec2(4.0 * xx * xx * xx - 12.0 * xx * yy * yy,
                4.0 * yy * yy * yy - 12.0 * xx * xx * yy);
}

double conj_L(const Vec2& x) {
    return 4.0 * x.x() * x.y() * (x.x() * x.x() - x.y() * x.y());
}

Vec2 grad_conj_L(const Vec2& x) {
    const double xx = x.x(), yy = x.y();
    return Vec2(12.0 * xx * xx * yy - 4.0 * yy * yy * yy,
                4.0 * xx * xx * xx - 12.0 * xx * yy * yy);
}

Curve example2_curve() {
    // g(xi) = 1/2 ( (2 e^{2 xi} + 1)^{1/4}, (3 (2 e^{2 xi} + 1)^{1/2} - 4 e^{xi})^{1/2} )
    auto w0 = [](double xi) { return 2.0 * std::exp(2.0 * xi) + 1.0; };
    auto wp = [](double xi) { return 4.0 * std::exp(2.0 * xi); };

    Curve c;
    c.g = [=](double xi) {
        const double w = w0(xi);
        const double v = 3.0 * std::sqrt(w) - 4.0 * std::exp(xi);
        return Vec2(0.5 * std::pow(w, 0.25), 0.5 * std::sqrt(v));
    };
    c.dg = [=](double xi) {
        const double w = w0(xi), dw = wp(xi), E = std::exp(xi);
        const double dA = 0.25 * std::pow(w, -0.75) * dw;
        const double v = 3.0 * std::sqrt(w) - 4.0 * E;
        const double dv = 1.5 * dw / std::sqrt(w) - 4.0 * E;
        const double dB = 0.5 * dv / std::sqrt(v);
        return Vec2(0.5 * dA, 0.5 * dB);
    };
    c.d2g = [=](double xi) {
        const double w = w0(xi), dw = wp(xi), ddw = 2.0 * wp(xi), E = std::exp(xi);
        const double d2A = 0.25 * (-0.75 * std::pow(w, -1.75) * dw * dw + std::pow(w, -0.75) * ddw);
        const double v = 3.0 * std::sqrt(w) - 4.0 * E;
        const double dv = 1.5 * dw / std::sqrt(w) - 4.0 * E;
        const double ddv = 1.5 * (-0.5 * std::pow(w, -1.5) * dw * dw + ddw / std::sqrt(w)) - 4.0 * E;
        const double d2B = 0.5 * (-0.5 * std::pow(v, -1.5) * dv * dv + ddv / std::sqrt(v));
        return Vec2(0.5 * d2A, 0.5 * d2B);
    };
    c.d3g = [=](double xi) {
        const double w = w0(xi), dw = wp(xi), ddw = 2.0 * wp(xi), dddw = 4.0 * wp(xi);
        const double E = std::exp(xi);
        const double d3A = 0.25 * (21.0 / 16.0 * std::pow(w, -2.75) * dw * dw * dw -
                                   2.25 * std::pow(w, -1.75) * dw * ddw + std::pow(w, -0.75) * dddw);
        const double v = 3.0 * std::sqrt(w) - 4.0 * E;
        const double dv = 1.5 * dw / std::sqrt(w) - 4.0 * E;
        const double ddv = 1.5 * (-0.5 * std::pow(w, -1.5) * dw * dw + ddw / std::sqrt(w)) - 4.0 * E;
        const double dddv = 1.5 * (0.75 * std::pow(w, -2.5) * dw * dw * dw -
                                   1.5 * std::pow(w, -1.5) * dw * ddw + dddw / std::sqrt(w)) -
                            4.0 * E;
        const double d3B = 0.5 * (0.75 * std::pow(v, -2.5) * dv * dv * dv -
                                  1.5 * std::pow(v, -1.5) * dv * ddv + dddv / std::sqrt(v));
        return Vec2(0.5 * d3A, 0.5 * d3B);
    };
    c.periodic = false;

    // parameter window: smallest interval whose image covers the curve
    // inside the closed domain, padded by 5%
    const Rect domain{0.6, 0.2, 1.6, 1.2};
    const double scan_lo = -3.0, scan_hi = 4.0;
    const int nscan = 8192;
    double lo = scan_hi, hi = scan_lo;
    for (int i = 0; i <= nscan; ++i) {
        const double xi = scan_lo + (scan_hi - scan_lo) * i / nscan;
        if (domain.contains(c.g(xi), 1e-12)) {
            lo = std::min(lo, xi);
            hi = std::max(hi, xi);
        }
    }
    if (!(lo < hi))
        throw ConfigError("example2_curve: interface does not intersect the domain");
    const double pad = 0.05 * (hi - lo);
    c.xi_begin = lo - pad;
    c.xi_end = hi + pad;
    return c;
}

} // namespace

ExampleProblem make_example2(double beta_minus, double beta_plus) {
    ExampleProblem p;
    p.domain = Rect{0.6, 0.2, 1.6, 1.2};
    p.curve = example2_curve();
    p.beta_minus = beta_minus;
    p.beta_plus = beta_plus;

    p.u = [=](const Vec2& x, Side s) {
        const double beta = s == Side::minus ? beta_minus : beta_plus;
        const double L = level_L(x), Lt = conj_L(x);
        return L / beta + Lt + Lt * L / beta;
    };
    p.grad_u = [=](const Vec2& x, Side s) {
        const double beta = s == Side::minus ? beta_minus : beta_plus;
        const double L = level_L(x), Lt = conj_L(x);
        const Vec2 gL = grad_L(x), gLt = grad_conj_L(x);
        return Vec2((gL + Lt * gL + L * gLt) / beta + gLt);
    };
    // u is piecewise harmonic: L and its conjugate are harmonic and
    // grad L . grad Lt = 0 by the Cauchy-Riemann equations
    p.f = [](const Vec2&, Side) { return 0.0; };
    p.g = p.u;
    p.in_plus = [](const Vec2& x) { return level_L(x) > 0.0; };
    return p;
}

void verify_example1_interface(double beta_minus, double beta_plus, int samples) {
    const ExampleProblem p = make_example1(beta_minus, beta_plus);
    const double r0 = 1.0 / std::sqrt(3.0);
    for (int i = 0; i < samples; ++i) {
        const double t = 2.0 * kPi * i / samples;
        const Vec2 x(r0 * std::cos(t), r0 * std::sin(t));
        const Vec2 n = x / x.norm();
        const double value_jump = p.u(x, Side::plus) - p.u(x, Side::minus);
        const double flux_jump = beta_plus * p.grad_u(x, Side::plus).dot(n) -
                                 beta_minus * p.grad_u(x, Side::minus).dot(n);
        if (std::abs(value_jump) > 1e-12 || std::abs(flux_jump) > 1e-10)
            throw ConfigError("verify_example1_interface: exact solution violates the jump conditions");
    }
}

} // namespace fife
