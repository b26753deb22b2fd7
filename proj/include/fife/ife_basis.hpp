#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "fife/mesh.hpp"
#include "fife/polynomial.hpp"

namespace fife {

/// Piecewise tensor polynomial across eta = 0: one polynomial per side.
struct PiecewisePoly {
    BivariatePoly minus;
    BivariatePoly plus;

    const BivariatePoly& branch(Side s) const { return s == Side::minus ? minus : plus; }

    double eval(double eta, double xi) const { return branch(eta < 0 ? Side::minus : Side::plus).eval(eta, xi); }
};

/// The m(m+1) shape functions eta^j p_i(xi) / beta-hat, j >= 1. They satisfy
/// all interface conditions with no linear solve.
std::vector<PiecewisePoly> cheap_basis(const FrenetChart& chart, int m,
                                       double beta_minus, double beta_plus,
                                       Basis1D basis = Basis1D::legendre);

/// The trace d^j/d eta^j L(v)(0, xi) as an evaluable function of xi, where
/// L is the Frenet Laplacian of the chart's curve.
std::function<double(double)> laplacian_trace(const BivariatePoly& v,
                                              const FrenetChart& chart, int j);

/// Full Frenet Laplacian L(v)(eta, xi); test and diagnostics helper.
double frenet_laplacian(const BivariatePoly& v, const Curve& curve, double eta, double xi);

/// Linear system of the weak Laplacian jump conditions. A is square of
/// size m^2-1 and independent of beta; with the Legendre basis it is
/// lower triangular, with monomials block lower triangular.
struct ExtensionSystem {
    int m = 1;
    Eigen::MatrixXd A; // (m^2-1) x (m^2-1)
    Eigen::MatrixXd B; // (m^2-1) x (m+1), columns indexed by i of p_i
};

ExtensionSystem extension_system(const FrenetChart& chart, int m,
                                 Basis1D basis = Basis1D::legendre);

/// Solve A C = ((beta^- - beta^+)/beta^+) B by block forward substitution.
Eigen::MatrixXd solve_extension(const ExtensionSystem& sys, double beta_minus, double beta_plus);

/// All (m+1)^2 shape functions of one element.
struct LocalSpace {
    enum class Kind { standard, ife };

    Kind kind = Kind::standard;
    int m = 1;
    Basis1D basis = Basis1D::legendre;

    // standard elements: tensor polynomials on the physical rectangle
    Rect box;
    Side side = Side::plus;

    // interface elements
    FrenetChart chart;
    double beta_minus = 1.0;
    double beta_plus = 1.0;
    std::vector<PiecewisePoly> shapes;  // indexed i*(m+1)+j; j = 0 extended
    Eigen::MatrixXd ext_coeffs;         // (m^2-1) x (m+1)

    int ndof() const { return (m + 1) * (m + 1); }

    /// Values and Frenet partial derivatives of every shape at (eta, xi)
    /// on the given side. Arrays must hold ndof() entries.
    void eval_frenet_all(double eta, double xi, Side s,
                         std::span<double> values, std::span<double> d_eta,
                         std::span<double> d_xi) const;

    /// Values and Cartesian gradients of every shape of a standard element.
    void eval_standard_all(const Vec2& x, std::span<double> values,
                           std::span<double> grad_x, std::span<double> grad_y) const;
};

LocalSpace standard_space(const Rect& box, int m, Side side);

/// Algorithm: cheap shapes plus the m+1 extended shapes phi_{i,0} with
/// phi^- = p_i and phi^+ = p_i + sum_l c_l^(i) N_l.
LocalSpace build_local_space(const FrenetChart& chart, int m,
                             double beta_minus, double beta_plus,
                             Basis1D basis = Basis1D::legendre);

/// Point evaluation through the inverse Frenet map (interface elements)
/// or directly (standard elements).
double eval_shape(const LocalSpace& space, int shape, const Vec2& x);
Vec2 eval_shape_grad(const LocalSpace& space, int shape, const Vec2& x);

struct JumpResidual {
    double value_jump = 0.0; // max |[phi]| over shapes and interface samples
    double flux_jump = 0.0;  // max |[beta phi_eta]|
    double scale = 1.0;      // max magnitude of the sampled traces
    std::vector<double> weak; // max weak Laplacian-condition residual per j
};

JumpResidual jump_residual(const LocalSpace& space, int samples = 50);

/// Condition numbers of the Jacobi-preconditioned extension matrix for the
/// near-vertex elements K(eps) = (1/sqrt(2) - eps, .) + [0, 1/2]^2 against
/// the given curve.
std::vector<double> conditioning_study(const Curve& curve, int m,
                                       std::span<const double> epsilons,
                                       Basis1D basis = Basis1D::legendre);

/// Matrix-market-style dump (row col value) of A, B and the extension
/// coefficients; diagnostics behind a debug flag in the experiment driver.
void dump_extension_system(std::ostream& os, const ExtensionSystem& sys,
                           const Eigen::MatrixXd* coeffs = nullptr);

} // namespace fife
