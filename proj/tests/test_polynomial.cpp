#include <doctest.h>

#include <random>

#include "fife/polynomial.hpp"

using namespace fife;
using doctest::Approx;

TEST_SUITE_BEGIN("polynomial");

TEST_CASE("Legendre values and derivatives on a mapped interval") {
    const double a = 0.3, b = 1.7;
    const int m = 5;
    std::vector<double> p(m + 1), dp(m + 1), d2p(m + 1);

    // endpoint values L_i(1) = 1, L_i(-1) = (-1)^i
    basis_values(Basis1D::legendre, a, b, m, b, p.data());
    for (int i = 0; i <= m; ++i) CHECK(p[i] == Approx(1.0));
    basis_values(Basis1D::legendre, a, b, m, a, p.data());
    for (int i = 0; i <= m; ++i) CHECK(p[i] == Approx(i % 2 == 0 ? 1.0 : -1.0));

    // derivatives against finite differences
    const double xi = 0.77, h = 1e-6;
    std::vector<double> pp(m + 1), pm(m + 1);
    basis_values(Basis1D::legendre, a, b, m, xi, p.data(), dp.data(), d2p.data());
    basis_values(Basis1D::legendre, a, b, m, xi + h, pp.data());
    basis_values(Basis1D::legendre, a, b, m, xi - h, pm.data());
    for (int i = 0; i <= m; ++i) {
        CHECK(dp[i] == Approx((pp[i] - pm[i]) / (2 * h)).epsilon(1e-8));
        CHECK(d2p[i] == Approx((pp[i] - 2 * p[i] + pm[i]) / (h * h)).epsilon(1e-3));
    }
}

TEST_CASE("derivative matrix agrees with pointwise derivatives") {
    const double a = -0.4, b = 0.9;
    for (Basis1D basis : {Basis1D::legendre, Basis1D::monomial}) {
        const int m = 4;
        const Eigen::MatrixXd D = basis_derivative_matrix(basis, a, b, m);
        std::vector<double> p(m + 1), dp(m + 1);
        for (double xi : {-0.3, 0.1, 0.85}) {
            basis_values(basis, a, b, m, xi, p.data(), dp.data());
            for (int i = 0; i <= m; ++i) {
                double from_matrix = 0.0;
                for (int k = 0; k <= m; ++k) from_matrix += D(k, i) * p[k];
                CHECK(from_matrix == Approx(dp[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("bivariate evaluation matches the monomial expansion") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    for (Basis1D basis : {Basis1D::legendre, Basis1D::monomial}) {
        BivariatePoly v(3, 0.2, 1.1, basis);
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; j <= 3; ++j) v.c(i, j) = uc(rng);

        const Eigen::MatrixXd mono = v.monomial_coefficients();
        std::uniform_real_distribution<double> ux(0.2, 1.1), ue(-0.5, 0.5);
        for (int k = 0; k < 5; ++k) {
            const double xi = ux(rng), eta = ue(rng);
            double direct = 0.0;
            for (int p = 0; p <= 3; ++p)
                for (int j = 0; j <= 3; ++j)
                    direct += mono(p, j) * std::pow(xi, p) * std::pow(eta, j);
            CHECK(v.eval(eta, xi) == Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("coefficient-level derivatives match evaluated derivatives") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    BivariatePoly v(4, -1.0, 2.0, Basis1D::legendre);
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j) v.c(i, j) = uc(rng);

    const BivariatePoly ve = v.deta();
    const BivariatePoly vx = v.dxi();
    for (int k = 0; k < 10; ++k) {
        const double eta = uc(rng), xi = 0.5 + uc(rng);
        CHECK(ve.eval(eta, xi) == Approx(v.eval_deta(eta, xi)).epsilon(1e-12));
        CHECK(vx.eval(eta, xi) == Approx(v.eval_dxi(eta, xi)).epsilon(1e-12));
        const double h = 1e-6;
        CHECK(v.eval_deta(eta, xi) ==
              Approx((v.eval(eta + h, xi) - v.eval(eta - h, xi)) / (2 * h)).epsilon(1e-7));
        CHECK(v.eval_dxi(eta, xi) ==
              Approx((v.eval(eta, xi + h) - v.eval(eta, xi - h)) / (2 * h)).epsilon(1e-7));
    }
}

TEST_SUITE_END();
