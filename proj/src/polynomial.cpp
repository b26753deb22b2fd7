#include "fife/polynomial.hpp"

#include <cmath>

namespace fife {

void basis_values(Basis1D basis, double a, double b, int m, double xi,
                  double* values, double* first, double* second) {
    const double scale = 2.0 / (b - a);
    const double t = (2.0 * xi - a - b) / (b - a);

    if (basis == Basis1D::monomial) {
        double tp = 1.0;
        for (int i = 0; i <= m; ++i) {
            values[i] = tp;
            if (first) first[i] = (i >= 1) ? i * std::pow(t, i - 1) * scale : 0.0;
            if (second) second[i] = (i >= 2) ? i * (i - 1) * std::pow(t, i - 2) * scale * scale : 0.0;
            tp *= t;
        }
        return;
    }

    // Legendre recurrences for values and t-derivatives
    std::vector<double> L(m + 1), dL(m + 1), d2L(m + 1);
    L[0] = 1.0;
    dL[0] = 0.0;
    d2L[0] = 0.0;
    if (m >= 1) {
        L[1] = t;
        dL[1] = 1.0;
        d2L[1] = 0.0;
    }
    for (int i = 1; i < m; ++i) {
        L[i + 1] = ((2 * i + 1) * t * L[i] - i * L[i - 1]) / (i + 1);
        dL[i + 1] = ((2 * i + 1) * (L[i] + t * dL[i]) - i * dL[i - 1]) / (i + 1);
        d2L[i + 1] = ((2 * i + 1) * (2 * dL[i] + t * d2L[i]) - i * d2L[i - 1]) / (i + 1);
    }
    for (int i = 0; i <= m; ++i) {
        values[i] = L[i];
        if (first) first[i] = dL[i] * scale;
        if (second) second[i] = d2L[i] * scale * scale;
    }
}

Eigen::MatrixXd basis_derivative_matrix(Basis1D basis, double a, double b, int m) {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m + 1, m + 1);
    const double scale = 2.0 / (b - a);
    if (basis == Basis1D::monomial) {
        for (int i = 1; i <= m; ++i) D(i - 1, i) = i * scale;
        return D;
    }
    // L_i' = sum_{k = i-1, i-3, ...} (2k+1) L_k
    for (int i = 1; i <= m; ++i)
        for (int k = i - 1; k >= 0; k -= 2) D(k, i) = (2 * k + 1) * scale;
    return D;
}

double BivariatePoly::eval(double eta, double xi) const {
    std::vector<double> p(m + 1);
    basis_values(basis, a, b, m, xi, p.data());
    double result = 0.0;
    double ep = 1.0;
    for (int j = 0; j <= m; ++j) {
        double row = 0.0;
        for (int i = 0; i <= m; ++i) row += c(i, j) * p[i];
        result += row * ep;
        ep *= eta;
    }
    return result;
}

double BivariatePoly::eval_deta(double eta, double xi) const {
    std::vector<double> p(m + 1);
    basis_values(basis, a, b, m, xi, p.data());
    double result = 0.0;
    double ep = 1.0;
    for (int j = 1; j <= m; ++j) {
        double row = 0.0;
        for (int i = 0; i <= m; ++i) row += c(i, j) * p[i];
        result += j * row * ep;
        ep *= eta;
    }
    return result;
}

double BivariatePoly::eval_dxi(double eta, double xi) const {
    std::vector<double> p(m + 1), dp(m + 1);
    basis_values(basis, a, b, m, xi, p.data(), dp.data());
    double result = 0.0;
    double ep = 1.0;
    for (int j = 0; j <= m; ++j) {
        double row = 0.0;
        for (int i = 0; i <= m; ++i) row += c(i, j) * dp[i];
        result += row * ep;
        ep *= eta;
    }
    return result;
}

BivariatePoly BivariatePoly::deta() const {
    BivariatePoly out(m, a, b, basis);
    for (int j = 1; j <= m; ++j)
        out.c.col(j - 1) = j * c.col(j);
    return out;
}

BivariatePoly BivariatePoly::dxi() const {
    BivariatePoly out(m, a, b, basis);
    const Eigen::MatrixXd D = basis_derivative_matrix(basis, a, b, m);
    out.c = D * c;
    return out;
}

Eigen::MatrixXd BivariatePoly::monomial_coefficients() const {
    // expand each p_i over {xi^p} by evaluating the basis change on powers
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m + 1, m + 1); // T(p, i): p_i = sum_p T(p, i) xi^p
    const double mid = 0.5 * (a + b);
    const double scale = 2.0 / (b - a);
    // t = scale * (xi - mid); build t^k in xi powers, then Legendre from t powers
    Eigen::MatrixXd tpow = Eigen::MatrixXd::Zero(m + 1, m + 1); // tpow(p, k): t^k = sum_p tpow(p,k) xi^p
    tpow(0, 0) = 1.0;
    for (int k = 1; k <= m; ++k) {
        // t^k = (scale xi - scale mid) * t^(k-1)
        for (int p = 0; p <= k - 1; ++p) {
            tpow(p + 1, k) += scale * tpow(p, k - 1);
            tpow(p, k) += -scale * mid * tpow(p, k - 1);
        }
    }
    if (basis == Basis1D::monomial) {
        T = tpow;
    } else {
        // Legendre in powers of t, then compose with tpow
        Eigen::MatrixXd Lc = Eigen::MatrixXd::Zero(m + 1, m + 1); // Lc(k, i): L_i = sum_k Lc(k,i) t^k
        Lc(0, 0) = 1.0;
        if (m >= 1) Lc(1, 1) = 1.0;
        for (int i = 1; i < m; ++i) {
            for (int k = 0; k <= i; ++k) {
                Lc(k + 1, i + 1) += (2.0 * i + 1.0) / (i + 1.0) * Lc(k, i);
                Lc(k, i + 1) += -static_cast<double>(i) / (i + 1.0) * Lc(k, i - 1);
            }
        }
        T = tpow * Lc;
    }
    return T * c; // (p, j) coefficient of xi^p eta^j
}

} // namespace fife
