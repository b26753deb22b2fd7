#include <doctest.h>

#include <numbers>
#include <random>

#include "fife/geometry.hpp"
#include "fife/problems.hpp"
#include "oracles.hpp"

using namespace fife;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

Curve example2() { return make_example2(1.0, 10.0).curve; }
} // namespace

TEST_SUITE_BEGIN("geometry");

TEST_CASE("frenet apparatus on a radius-2 circle") {
    const Curve c = Curve::circle(2.0);
    const FrenetFrame f = frenet_apparatus(c, 0.0);
    CHECK(f.tau.x() == Approx(0.0).epsilon(1e-14));
    CHECK(f.tau.y() == Approx(1.0).epsilon(1e-14));
    CHECK(f.n.x() == Approx(1.0).epsilon(1e-14));
    CHECK(f.n.y() == Approx(0.0).epsilon(1e-14));
    CHECK(f.kappa == Approx(0.5).epsilon(1e-14));
    CHECK(f.speed == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("frenet apparatus on a line") {
    const Curve c = Curve::line(Vec2(0, 0), Vec2(1, 0), -5.0, 5.0);
    for (double xi : {-3.0, 0.0, 2.5}) {
        const FrenetFrame f = frenet_apparatus(c, xi);
        CHECK(f.kappa == Approx(0.0));
        CHECK(f.tau.x() == Approx(1.0));
        CHECK(f.n.x() == Approx(0.0));
        CHECK(f.n.y() == Approx(-1.0));
    }
}

TEST_CASE("frame invariants: unit vectors and n = Q tau") {
    const Curve c = example2();
    for (int i = 0; i < 20; ++i) {
        const double xi = c.xi_begin + c.domain_length() * (i + 0.5) / 20.0;
        const FrenetFrame f = frenet_apparatus(c, xi);
        CHECK(std::abs(f.tau.norm() - 1.0) < 1e-14);
        CHECK(std::abs(f.n.norm() - 1.0) < 1e-14);
        CHECK(f.n.x() == Approx(f.tau.y()).epsilon(1e-15));
        CHECK(f.n.y() == Approx(-f.tau.x()).epsilon(1e-15));
    }
}

TEST_CASE("degenerate tangent raises") {
    Curve c;
    c.g = [](double t) { return Vec2(t * t * t, 0.0); };
    c.dg = [](double t) { return Vec2(3 * t * t, 0.0); };
    c.d2g = [](double t) { return Vec2(6 * t, 0.0); };
    c.xi_begin = -1.0;
    c.xi_end = 1.0;
    CHECK_THROWS_AS(frenet_apparatus(c, 0.0), GeometryError);
}

TEST_CASE("curve validation") {
    CHECK_NOTHROW(validate_curve(Curve::circle(1.0)));
    CHECK_NOTHROW(validate_curve(example2()));

    Curve bad = Curve::circle(1.0);
    bad.dg = [](double t) { return Vec2(-1.1 * std::sin(t), 1.1 * std::cos(t)); };
    CHECK_THROWS_AS(validate_curve(bad), GeometryError);
}

TEST_CASE("Frenet-Serret by finite differences, Example 2 curve") {
    const Curve c = example2();
    const double step = 1e-6 * c.domain_length();
    for (int i = 0; i < 100; ++i) {
        const double xi = c.xi_begin + 2 * step +
                          (c.domain_length() - 4 * step) * (i + 0.5) / 100.0;
        const FrenetFrame f = frenet_apparatus(c, xi);
        const FrenetFrame fp = frenet_apparatus(c, xi + step);
        const FrenetFrame fm = frenet_apparatus(c, xi - step);
        const Vec2 dtau = (fp.tau - fm.tau) / (2 * step);
        const Vec2 dn = (fp.n - fm.n) / (2 * step);
        const Vec2 expected_dtau = -f.kappa * f.speed * f.n;
        const Vec2 expected_dn = f.kappa * f.speed * f.tau;
        CHECK((dtau - expected_dtau).norm() < 1e-6 * (1.0 + expected_dtau.norm()));
        CHECK((dn - expected_dn).norm() < 1e-6 * (1.0 + expected_dn.norm()));
    }
}

TEST_CASE("curvature derivative matches finite differences") {
    const Curve c = example2();
    const double step = 1e-6 * c.domain_length();
    for (double frac : {0.2, 0.5, 0.8}) {
        const double xi = c.xi_begin + frac * c.domain_length();
        const double fd = (frenet_apparatus(c, xi + step).kappa -
                           frenet_apparatus(c, xi - step).kappa) / (2 * step);
        CHECK(curvature_derivative(c, xi) == Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("forward map on the unit circle") {
    const Curve c = Curve::circle(1.0);
    const Vec2 on = frenet_forward(c, FrenetPoint{0.0, 0.0});
    CHECK(on.x() == Approx(1.0));
    CHECK(on.y() == Approx(0.0));
    const Vec2 out = frenet_forward(c, FrenetPoint{0.1, 0.0});
    CHECK(out.x() == Approx(1.1));
    CHECK(out.y() == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("forward Jacobian matches finite differences, Example 2 curve") {
    const Curve c = example2();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ue(-0.05, 0.05);
    std::uniform_real_distribution<double> ux(c.xi_begin + 0.05, c.xi_end - 0.05);
    const double step = 1e-6;
    for (int k = 0; k < 30; ++k) {
        const FrenetPoint p{ue(rng), ux(rng)};
        const Mat2 jac = frenet_forward_jacobian(c, p);
        const Vec2 de = (frenet_forward(c, {p.eta + step, p.xi}) -
                         frenet_forward(c, {p.eta - step, p.xi})) / (2 * step);
        const Vec2 dx = (frenet_forward(c, {p.eta, p.xi + step}) -
                         frenet_forward(c, {p.eta, p.xi - step})) / (2 * step);
        CHECK((jac.col(0) - de).norm() < 1e-7 * (1.0 + jac.col(0).norm()));
        CHECK((jac.col(1) - dx).norm() < 1e-7 * (1.0 + jac.col(1).norm()));
    }
}

TEST_CASE("inverse map on the unit circle") {
    const Curve c = Curve::circle(1.0);
    const FrenetPoint p1 = frenet_inverse(c, Vec2(1.1, 0.0), FrenetPoint{0.0, 0.0});
    CHECK(p1.eta == Approx(0.1).epsilon(1e-12));
    CHECK(std::abs(p1.xi) < 1e-12);

    const FrenetPoint p2 = frenet_inverse(c, Vec2(0.0, 0.8), FrenetPoint{0.0, kPi / 2});
    CHECK(p2.eta == Approx(-0.2).epsilon(1e-12));
    CHECK(p2.xi == Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("round trip P(R(x)) = x at 1000 tube points, Example 2 curve") {
    const Curve c = example2();
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ue(-0.08, 0.08);
    std::uniform_real_distribution<double> ux(c.xi_begin + 0.05, c.xi_end - 0.05);
    for (int k = 0; k < 1000; ++k) {
        const FrenetPoint p{ue(rng), ux(rng)};
        const Vec2 x = frenet_forward(c, p);
        const FrenetPoint q = frenet_inverse(c, x, FrenetPoint{0.0, p.xi + 0.02});
        CHECK((frenet_forward(c, q) - x).norm() < 1e-10);
        CHECK(std::abs(q.eta - p.eta) < 1e-10);
        CHECK(std::abs(q.xi - p.xi) < 1e-9);
    }
}

TEST_CASE("inverse map errors") {
    const Curve line = Curve::line(Vec2(0, 0), Vec2(1, 0), 0.0, 1.0);
    CHECK_THROWS_AS(frenet_inverse(line, Vec2(5.0, 0.1), FrenetPoint{0.0, 0.5}), DomainError);

    Curve c = Curve::circle(1.0);
    CHECK_THROWS_AS(frenet_inverse(c, Vec2(1.5, 0.0),
                                   FrenetPoint{std::nan(""), 0.0}),
                    ConvergenceError);
}

TEST_CASE("closest point parameter") {
    SUBCASE("radial point of the unit circle") {
        const Curve c = Curve::circle(1.0);
        const double xi = closest_point_param(c, Vec2(0.5, 0.0));
        CHECK((c.g(xi) - Vec2(1.0, 0.0)).norm() < 1e-10);
    }
    SUBCASE("orthogonal projection onto a line") {
        const Curve c = Curve::line(Vec2(0, 0), Vec2(1, 0), -10.0, 10.0);
        CHECK(closest_point_param(c, Vec2(3.0, 7.0)) == Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("matches a dense-grid argmin on the Example 2 curve") {
        const Curve c = example2();
        const Vec2 vertices[] = {Vec2(0.8, 0.6), Vec2(1.0, 0.8), Vec2(1.2, 0.6), Vec2(0.7, 0.7)};
        for (const Vec2& x : vertices) {
            const double xi = closest_point_param(c, x);
            // dense sampling plus parabolic refinement
            const int N = 100000;
            int best = 0;
            double best_d = 1e300;
            for (int i = 0; i <= N; ++i) {
                const double t = c.xi_begin + c.domain_length() * i / N;
                const double d = (c.g(t) - x).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            const double h = c.domain_length() / N;
            const double t0 = c.xi_begin + best * h;
            auto f = [&](double t) { return (c.g(t) - x).squaredNorm(); };
            const double denom = f(t0 - h) - 2 * f(t0) + f(t0 + h);
            const double refined =
                denom > 0 ? t0 + 0.5 * h * (f(t0 - h) - f(t0 + h)) / denom : t0;
            CHECK(xi == Approx(refined).epsilon(1e-6));
        }
    }
    SUBCASE("ambiguous projection raises") {
        const Curve c = Curve::circle(1.0);
        CHECK_THROWS_AS(closest_point_param(c, Vec2(0.0, 0.0)), GeometryError);
    }
}

TEST_CASE("metric coefficients on the unit circle") {
    const Curve c = Curve::circle(1.0); // unit speed, kappa = 1
    const MetricCoeffs mc = metric_coeffs(c, 0.7, 0.0, 2);
    CHECK(mc.J0 == Approx(1.0).epsilon(1e-14));
    CHECK(mc.J1 == Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(mc.J2) < 1e-13);
    // d J1 / d eta (0, xi) = kappa * (-1) * 1! * kappa = -1
    CHECK(mc.d_eta[1][1] == Approx(-1.0).epsilon(1e-13));

    CHECK_THROWS_AS(metric_coeffs(c, 0.0, -1.5, 0), GeometryError);
}

TEST_CASE("eta-derivatives of the metric coefficients vs finite differences") {
    const Curve c = example2();
    const double step = 1e-4;
    for (double frac : {0.25, 0.5, 0.75}) {
        const double xi = c.xi_begin + frac * c.domain_length();
        const MetricCoeffs mc = metric_coeffs(c, xi, 0.0, 2);
        for (int comp = 0; comp < 3; ++comp) {
            auto J = [&](double eta) {
                const MetricCoeffs m2 = metric_coeffs(c, xi, eta, 0);
                return comp == 0 ? m2.J0 : (comp == 1 ? m2.J1 : m2.J2);
            };
            const double d1 = (J(step) - J(-step)) / (2 * step);
            const double d2 = (J(step) - 2 * J(0.0) + J(-step)) / (step * step);
            CHECK(mc.d_eta[comp][1] == Approx(d1).epsilon(2e-6));
            CHECK(mc.d_eta[comp][2] == Approx(d2).epsilon(2e-5));
        }
    }
}

TEST_CASE("gradient pushforward") {
    SUBCASE("unit normal derivative direction") {
        const Curve c = example2();
        const FrenetPoint p{0.03, 0.5 * (c.xi_begin + c.xi_end)};
        const FrenetFrame f = frenet_apparatus(c, p.xi);
        const Vec2 v = pushforward_gradient(c, p, 1.0, 0.0);
        CHECK((v - f.n).norm() < 1e-14);
    }
    SUBCASE("unit tangential derivative on the unit circle at eta = 0") {
        const Curve c = Curve::circle(1.0);
        const Vec2 v = pushforward_gradient(c, FrenetPoint{0.0, 1.0}, 0.0, 1.0);
        const FrenetFrame f = frenet_apparatus(c, 1.0);
        CHECK((v - f.tau).norm() < 1e-14);
    }
    SUBCASE("chain rule: u = x^2 + y^2 on the Example 2 curve") {
        const Curve c = example2();
        auto u = [&](const FrenetPoint& p) {
            return frenet_forward(c, p).squaredNorm();
        };
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> ue(-0.05, 0.05);
        std::uniform_real_distribution<double> ux(c.xi_begin + 0.05, c.xi_end - 0.05);
        const double step = 1e-6;
        for (int k = 0; k < 20; ++k) {
            const FrenetPoint p{ue(rng), ux(rng)};
            const double du_eta =
                (u({p.eta + step, p.xi}) - u({p.eta - step, p.xi})) / (2 * step);
            const double du_xi =
                (u({p.eta, p.xi + step}) - u({p.eta, p.xi - step})) / (2 * step);
            const Vec2 grad = pushforward_gradient(c, p, du_eta, du_xi);
            const Vec2 exact = 2.0 * frenet_forward(c, p);
            CHECK((grad - exact).norm() < 1e-8 * (1.0 + exact.norm()));
        }
    }
}

TEST_CASE("gradients of the eta and xi coordinate fields") {
    const Curve c = example2();
    const double step = 1e-6;
    for (int k = 0; k < 25; ++k) {
        const double xi = c.xi_begin + 0.1 + (c.domain_length() - 0.2) * k / 25.0;
        const FrenetPoint p{0.04 * std::sin(3.0 * k), xi};
        const Vec2 x = frenet_forward(c, p);
        auto eta_field = [&](const Vec2& y) {
            return frenet_inverse(c, y, p).eta;
        };
        auto xi_field = [&](const Vec2& y) {
            return frenet_inverse(c, y, p).xi;
        };
        const Vec2 grad_eta = oracles::fd_gradient(eta_field, x, step);
        const Vec2 grad_xi = oracles::fd_gradient(xi_field, x, step);
        const FrenetFrame f = frenet_apparatus(c, p.xi);
        const double psi = 1.0 / (1.0 + p.eta * f.kappa);
        CHECK((grad_eta - f.n).norm() < 1e-6);
        CHECK((grad_xi - psi / f.speed * f.tau).norm() < 1e-6 * (1.0 + psi / f.speed));
    }
}

TEST_CASE("Frenet Laplacian identity for u = x^3 y^2") {
    auto grad = [](const Vec2& x) {
        return Vec2(3.0 * x.x() * x.x() * x.y() * x.y(), 2.0 * x.x() * x.x() * x.x() * x.y());
    };
    auto hess = [](const Vec2& x) {
        Eigen::Matrix2d H;
        H << 6.0 * x.x() * x.y() * x.y(), 6.0 * x.x() * x.x() * x.y(),
            6.0 * x.x() * x.x() * x.y(), 2.0 * x.x() * x.x() * x.x();
        return H;
    };
    auto laplacian = [](const Vec2& x) {
        return 6.0 * x.x() * x.y() * x.y() + 2.0 * x.x() * x.x() * x.x();
    };

    for (const Curve& c : {Curve::circle(1.0), Curve::circle(2.0), example2()}) {
        std::mt19937 rng(17);
        const double tube = c.periodic ? 0.2 : 0.06;
        std::uniform_real_distribution<double> ue(-tube, tube);
        std::uniform_real_distribution<double> ux(c.xi_begin + 0.02 * c.domain_length(),
                                                  c.xi_end - 0.02 * c.domain_length());
        for (int k = 0; k < 100; ++k) {
            const FrenetPoint p{ue(rng), ux(rng)};
            const oracles::HatDerivatives hd =
                oracles::hat_derivatives(c, p.eta, p.xi, grad, hess);
            const MetricCoeffs mc = metric_coeffs(c, p.xi, p.eta, 0);
            const double L = hd.u_etaeta + mc.J0 * hd.u_xixi + mc.J1 * hd.u_eta + mc.J2 * hd.u_xi;
            const Vec2 x = frenet_forward(c, p);
            CHECK(L == Approx(laplacian(x)).epsilon(1e-8));
        }
    }
}

TEST_CASE("orientation validation") {
    const ExampleProblem p1 = make_example1(1.0, 10.0);
    CHECK_NOTHROW(validate_orientation(p1.curve, p1.in_plus));

    // reversing the parametrization flips n and must be rejected
    Curve reversed = p1.curve;
    const Curve base = p1.curve;
    reversed.g = [base](double t) { return base.g(-t); };
    reversed.dg = [base](double t) { return Vec2(-base.dg(-t)); };
    reversed.d2g = [base](double t) { return base.d2g(-t); };
    reversed.xi_begin = -2 * kPi;
    reversed.xi_end = 0.0;
    CHECK_THROWS_AS(validate_orientation(reversed, p1.in_plus), ConfigError);

    const ExampleProblem p2 = make_example2(1.0, 100.0);
    CHECK_NOTHROW(validate_orientation(p2.curve, p2.in_plus));
}

TEST_CASE("periodic parameter unwrapping") {
    const Curve c = Curve::circle(1.0);
    CHECK(c.unwrap_near(0.1, 2 * kPi) == Approx(2 * kPi + 0.1));
    CHECK(c.unwrap_near(2 * kPi - 0.1, 0.0) == Approx(-0.1));
    const Curve line = Curve::line(Vec2(0, 0), Vec2(1, 0), 0, 1);
    CHECK(line.unwrap_near(0.9, 0.0) == Approx(0.9));
}

TEST_SUITE_END();
