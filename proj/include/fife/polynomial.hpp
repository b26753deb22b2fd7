#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fife/errors.hpp"

namespace fife {

enum class Basis1D { legendre, monomial };

/// Values of the degree-0..m basis polynomials on [a, b] at xi.
/// Legendre polynomials are mapped affinely from [-1, 1]; the monomial
/// basis uses the scaled variable t = (2 xi - a - b)/(b - a).
void basis_values(Basis1D basis, double a, double b, int m, double xi,
                  double* values, double* first = nullptr, double* second = nullptr);

/// Matrix D with (d/dxi) p_i = sum_k D(k, i) p_k in the same basis.
Eigen::MatrixXd basis_derivative_matrix(Basis1D basis, double a, double b, int m);

/// Tensor polynomial in Frenet coordinates on a chart interval [a, b]:
///   v(eta, xi) = sum_{i,j} c(i, j) p_i(xi) eta^j,  0 <= i, j <= m.
struct BivariatePoly {
    int m = 0;
    double a = 0.0;
    double b = 1.0;
    Basis1D basis = Basis1D::legendre;
    Eigen::MatrixXd c; // (m+1) x (m+1), rows = xi index i, cols = eta power j

    BivariatePoly() = default;
    BivariatePoly(int degree, double a_, double b_, Basis1D basis_ = Basis1D::legendre)
        : m(degree), a(a_), b(b_), basis(basis_),
          c(Eigen::MatrixXd::Zero(degree + 1, degree + 1)) {}

    double eval(double eta, double xi) const;
    double eval_deta(double eta, double xi) const;
    double eval_dxi(double eta, double xi) const;

    BivariatePoly deta() const;  // coefficient-level d/deta
    BivariatePoly dxi() const;   // coefficient-level d/dxi

    /// Coefficients over the plain monomial basis {xi^p eta^j}; used by
    /// tests to cross-check evaluation.
    Eigen::MatrixXd monomial_coefficients() const;
};

} // namespace fife
