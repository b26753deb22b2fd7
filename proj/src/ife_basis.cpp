#include "fife/ife_basis.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <Eigen/SVD>

#include "fife/quadrature.hpp"

namespace fife {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// N_l = eta^q p_i with l = (q-2)(m+1) + i + 1, eta^2 block first
inline int n_index(int m, int q, int i) { return (q - 2) * (m + 1) + i; } // zero-based column

} // namespace

std::vector<PiecewisePoly> cheap_basis(const FrenetChart& chart, int m,
                                       double beta_minus, double beta_plus,
                                       Basis1D basis) {
    if (m < 1) throw Error("cheap_basis: degree must be >= 1");
    if (beta_minus <= 0.0 || beta_plus <= 0.0) throw Error("cheap_basis: beta must be positive");

    std::vector<PiecewisePoly> shapes;
    shapes.reserve(static_cast<size_t>(m) * (m + 1));
    for (int i = 0; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
            PiecewisePoly s{BivariatePoly(m, chart.a, chart.b, basis),
                            BivariatePoly(m, chart.a, chart.b, basis)};
            s.minus.c(i, j) = 1.0 / beta_minus;
            s.plus.c(i, j) = 1.0 / beta_plus;
            shapes.push_back(std::move(s));
        }
    }
    return shapes;
}

namespace {

// d^j/d eta^j L(v)(0, xi) from the coefficient matrix of v and the
// eta-derivatives of the metric coefficients at eta = 0
double laplacian_trace_at(const BivariatePoly& v, const Curve& curve, int j, double xi) {
    const int m = v.m;
    std::vector<double> p(m + 1), dp(m + 1), d2p(m + 1);
    basis_values(v.basis, v.a, v.b, m, xi, p.data(), dp.data(), d2p.data());
    const MetricCoeffs mc = metric_coeffs(curve, xi, 0.0, j);

    double result = 0.0;
    if (j + 2 <= m) {
        double row = 0.0;
        for (int i = 0; i <= m; ++i) row += v.c(i, j + 2) * p[i];
        result += factorial(j + 2) * row;
    }
    for (int q = 0; q <= std::min(j, m); ++q) {
        double vxx = 0.0, vx = 0.0;
        for (int i = 0; i <= m; ++i) {
            vxx += v.c(i, q) * d2p[i];
            vx += v.c(i, q) * dp[i];
        }
        const double f = binomial(j, q) * factorial(q);
        result += f * (mc.d_eta[0][j - q] * vxx + mc.d_eta[2][j - q] * vx);
    }
    for (int q = 1; q <= std::min(j + 1, m); ++q) {
        double val = 0.0;
        for (int i = 0; i <= m; ++i) val += v.c(i, q) * p[i];
        result += binomial(j, q - 1) * factorial(q) * mc.d_eta[1][j - q + 1] * val;
    }
    return result;
}

} // namespace

std::function<double(double)> laplacian_trace(const BivariatePoly& v,
                                              const FrenetChart& chart, int j) {
    if (j < 0 || j > v.m - 2)
        throw Error("laplacian_trace: order j must satisfy 0 <= j <= m-2");
    const Curve* curve = chart.curve;
    BivariatePoly copy = v;
    return [copy, curve, j](double xi) { return laplacian_trace_at(copy, *curve, j, xi); };
}

double frenet_laplacian(const BivariatePoly& v, const Curve& curve, double eta, double xi) {
    const MetricCoeffs mc = metric_coeffs(curve, xi, eta, 0);
    const BivariatePoly ve = v.deta();
    const BivariatePoly vee = ve.deta();
    const BivariatePoly vx = v.dxi();
    const BivariatePoly vxx = vx.dxi();
    return vee.eval(eta, xi) + mc.J0 * vxx.eval(eta, xi) + mc.J1 * ve.eval(eta, xi) +
           mc.J2 * vx.eval(eta, xi);
}

ExtensionSystem extension_system(const FrenetChart& chart, int m, Basis1D basis) {
    if (m < 1) throw Error("extension_system: degree must be >= 1");
    ExtensionSystem sys;
    sys.m = m;
    const int rows = m * m - 1; // (m-1)(m+1)
    if (m == 1) {
        sys.A.resize(0, 0);
        sys.B.resize(0, 2);
        return sys;
    }
    sys.A = Eigen::MatrixXd::Zero(rows, rows);
    sys.B = Eigen::MatrixXd::Zero(rows, m + 1);

    const Curve& curve = *chart.curve;
    const int npts = (3 * m + 3 + 1) / 2 + 2; // over-resolves the smooth metric factors
    const QuadRule1D quad = gauss_rule(npts, chart.a, chart.b);

    std::vector<double> p(m + 1), dp(m + 1), d2p(m + 1);
    for (int gq = 0; gq < npts; ++gq) {
        const double xi = quad.x[gq];
        const double w = quad.w[gq];
        basis_values(basis, chart.a, chart.b, m, xi, p.data(), dp.data(), d2p.data());
        const MetricCoeffs mc = metric_coeffs(curve, xi, 0.0, m - 2 + 1);

        for (int j = 0; j <= m - 2; ++j) {
            for (int k = 0; k <= m; ++k) {
                const int row = j * (m + 1) + k;
                const double wk = w * p[k];

                // A columns: N_l = eta^q p_i
                for (int q = 2; q <= m; ++q) {
                    for (int i = 0; i <= m; ++i) {
                        double term = 0.0;
                        if (q == j + 2) term += factorial(j + 2) * p[i];
                        if (q <= j)
                            term += binomial(j, q) * factorial(q) *
                                    (mc.d_eta[0][j - q] * d2p[i] + mc.d_eta[2][j - q] * dp[i]);
                        if (q >= 1 && q <= j + 1)
                            term += binomial(j, q - 1) * factorial(q) * mc.d_eta[1][j - q + 1] * p[i];
                        if (term != 0.0) sys.A(row, n_index(m, q, i)) += wk * term;
                    }
                }
                // B columns: v = p_i
                for (int i = 0; i <= m; ++i)
                    sys.B(row, i) += wk * (mc.d_eta[0][j] * d2p[i] + mc.d_eta[2][j] * dp[i]);
            }
        }
    }
    return sys;
}

Eigen::MatrixXd solve_extension(const ExtensionSystem& sys, double beta_minus, double beta_plus) {
    const int m = sys.m;
    const int rows = m * m - 1;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(std::max(rows, 0), m + 1);
    if (m == 1) return C;

    const double factor = (beta_minus - beta_plus) / beta_plus;
    Eigen::MatrixXd rhs = factor * sys.B;

    // block forward substitution: the j-th condition block determines the
    // eta^(j+2) coefficient block
    const int bs = m + 1;
    for (int j = 0; j <= m - 2; ++j) {
        Eigen::MatrixXd r = rhs.middleRows(j * bs, bs);
        for (int q = 2; q <= j + 1; ++q)
            r -= sys.A.block(j * bs, (q - 2) * bs, bs, bs) * C.middleRows((q - 2) * bs, bs);
        const Eigen::MatrixXd D = sys.A.block(j * bs, j * bs, bs, bs);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(D);
        C.middleRows(j * bs, bs) = lu.solve(r);
        if (!C.middleRows(j * bs, bs).allFinite())
            throw SolveError("solve_extension: singular diagonal block (should not happen)");
    }
    return C;
}

LocalSpace standard_space(const Rect& box, int m, Side side) {
    LocalSpace space;
    space.kind = LocalSpace::Kind::standard;
    space.m = m;
    space.box = box;
    space.side = side;
    return space;
}

LocalSpace build_local_space(const FrenetChart& chart, int m,
                             double beta_minus, double beta_plus, Basis1D basis) {
    if (beta_minus <= 0.0 || beta_plus <= 0.0)
        throw Error("build_local_space: beta must be positive");

    LocalSpace space;
    space.kind = LocalSpace::Kind::ife;
    space.m = m;
    space.basis = basis;
    space.chart = chart;
    space.beta_minus = beta_minus;
    space.beta_plus = beta_plus;

    const ExtensionSystem sys = extension_system(chart, m, basis);
    space.ext_coeffs = solve_extension(sys, beta_minus, beta_plus);

    const std::vector<PiecewisePoly> cheap = cheap_basis(chart, m, beta_minus, beta_plus, basis);
    space.shapes.resize(space.ndof());
    for (int i = 0; i <= m; ++i) {
        // extended shape phi_{i,0}
        PiecewisePoly ext{BivariatePoly(m, chart.a, chart.b, basis),
                          BivariatePoly(m, chart.a, chart.b, basis)};
        ext.minus.c(i, 0) = 1.0;
        ext.plus.c(i, 0) = 1.0;
        for (int q = 2; q <= m; ++q)
            for (int ii = 0; ii <= m; ++ii)
                ext.plus.c(ii, q) += space.ext_coeffs(n_index(m, q, ii), i);
        space.shapes[i * (m + 1)] = std::move(ext);
        for (int j = 1; j <= m; ++j)
            space.shapes[i * (m + 1) + j] = cheap[i * m + (j - 1)];
    }
    return space;
}

void LocalSpace::eval_frenet_all(double eta, double xi, Side s,
                                 std::span<double> values, std::span<double> d_eta,
                                 std::span<double> d_xi) const {
    const int nd = ndof();
    std::vector<double> p(m + 1), dp(m + 1);
    basis_values(basis, chart.a, chart.b, m, xi, p.data(), dp.data());
    std::vector<double> epow(m + 1);
    epow[0] = 1.0;
    for (int j = 1; j <= m; ++j) epow[j] = epow[j - 1] * eta;

    for (int k = 0; k < nd; ++k) {
        const Eigen::MatrixXd& c = shapes[k].branch(s).c;
        double v = 0.0, ve = 0.0, vx = 0.0;
        for (int j = 0; j <= m; ++j) {
            double row = 0.0, drow = 0.0;
            for (int i = 0; i <= m; ++i) {
                row += c(i, j) * p[i];
                drow += c(i, j) * dp[i];
            }
            v += row * epow[j];
            vx += drow * epow[j];
            if (j >= 1) ve += j * row * epow[j - 1];
        }
        values[k] = v;
        d_eta[k] = ve;
        d_xi[k] = vx;
    }
}

void LocalSpace::eval_standard_all(const Vec2& x, std::span<double> values,
                                   std::span<double> grad_x, std::span<double> grad_y) const {
    std::vector<double> px(m + 1), dpx(m + 1), py(m + 1), dpy(m + 1);
    basis_values(Basis1D::legendre, box.x0, box.x1, m, x.x(), px.data(), dpx.data());
    basis_values(Basis1D::legendre, box.y0, box.y1, m, x.y(), py.data(), dpy.data());
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            const int k = i * (m + 1) + j;
            values[k] = px[i] * py[j];
            grad_x[k] = dpx[i] * py[j];
            grad_y[k] = px[i] * dpy[j];
        }
    }
}

double eval_shape(const LocalSpace& space, int shape, const Vec2& x) {
    if (space.kind == LocalSpace::Kind::standard) {
        const int m = space.m;
        std::vector<double> px(m + 1), py(m + 1);
        basis_values(Basis1D::legendre, space.box.x0, space.box.x1, m, x.x(), px.data());
        basis_values(Basis1D::legendre, space.box.y0, space.box.y1, m, x.y(), py.data());
        return px[shape / (m + 1)] * py[shape % (m + 1)];
    }
    const FrenetPoint p = frenet_inverse(*space.chart.curve, x,
                                         FrenetPoint{0.0, space.chart.midpoint()}, 1e-14);
    const Side s = p.eta < 0 ? Side::minus : Side::plus;
    return space.shapes[shape].branch(s).eval(p.eta, p.xi);
}

Vec2 eval_shape_grad(const LocalSpace& space, int shape, const Vec2& x) {
    if (space.kind == LocalSpace::Kind::standard) {
        const int m = space.m;
        std::vector<double> px(m + 1), dpx(m + 1), py(m + 1), dpy(m + 1);
        basis_values(Basis1D::legendre, space.box.x0, space.box.x1, m, x.x(), px.data(), dpx.data());
        basis_values(Basis1D::legendre, space.box.y0, space.box.y1, m, x.y(), py.data(), dpy.data());
        return Vec2(dpx[shape / (m + 1)] * py[shape % (m + 1)],
                    px[shape / (m + 1)] * dpy[shape % (m + 1)]);
    }
    const FrenetPoint p = frenet_inverse(*space.chart.curve, x,
                                         FrenetPoint{0.0, space.chart.midpoint()}, 1e-14);
    const Side s = p.eta < 0 ? Side::minus : Side::plus;
    const BivariatePoly& poly = space.shapes[shape].branch(s);
    return pushforward_gradient(*space.chart.curve, p, poly.eval_deta(p.eta, p.xi),
                                poly.eval_dxi(p.eta, p.xi));
}

JumpResidual jump_residual(const LocalSpace& space, int samples) {
    if (space.kind != LocalSpace::Kind::ife)
        throw Error("jump_residual: IFE spaces only");
    JumpResidual r;
    const int m = space.m;
    const FrenetChart& chart = space.chart;

    // exact conditions at Chebyshev samples of the chart interval
    for (int q = 0; q < samples; ++q) {
        const double t = std::cos(std::numbers::pi * (q + 0.5) / samples);
        const double xi = chart.midpoint() + 0.5 * chart.length() * t;
        for (const PiecewisePoly& s : space.shapes) {
            const double vm = s.minus.eval(0.0, xi);
            const double vp = s.plus.eval(0.0, xi);
            const double fm = space.beta_minus * s.minus.eval_deta(0.0, xi);
            const double fp = space.beta_plus * s.plus.eval_deta(0.0, xi);
            r.value_jump = std::max(r.value_jump, std::abs(vp - vm));
            r.flux_jump = std::max(r.flux_jump, std::abs(fp - fm));
            r.scale = std::max({r.scale, std::abs(vm), std::abs(vp), std::abs(fm), std::abs(fp)});
        }
    }

    // weak conditions by quadrature
    r.weak.assign(std::max(m - 1, 0), 0.0);
    if (m >= 2) {
        const int npts = (3 * m + 3 + 1) / 2 + 2;
        const QuadRule1D quad = gauss_rule(npts, chart.a, chart.b);
        std::vector<double> pk(m + 1);
        for (int j = 0; j <= m - 2; ++j) {
            for (const PiecewisePoly& s : space.shapes) {
                Eigen::VectorXd res = Eigen::VectorXd::Zero(m + 1);
                for (int gq = 0; gq < npts; ++gq) {
                    const double xi = quad.x[gq];
                    const double jump =
                        space.beta_plus * laplacian_trace_at(s.plus, *chart.curve, j, xi) -
                        space.beta_minus * laplacian_trace_at(s.minus, *chart.curve, j, xi);
                    basis_values(space.basis, chart.a, chart.b, m, xi, pk.data());
                    for (int k = 0; k <= m; ++k) res[k] += quad.w[gq] * jump * pk[k];
                }
                r.weak[j] = std::max(r.weak[j], res.cwiseAbs().maxCoeff());
            }
        }
    }
    return r;
}

std::vector<double> conditioning_study(const Curve& curve, int m,
                                       std::span<const double> epsilons, Basis1D basis) {
    std::vector<double> conds;
    conds.reserve(epsilons.size());
    for (double eps : epsilons) {
        if (eps <= 0.0 || eps >= 0.5)
            throw Error("conditioning_study: eps must lie in (0, 1/2)");
        const double c = 1.0 / std::numbers::sqrt2 - eps;
        const Rect box{c, c, c + 0.5, c + 0.5};
        const FrenetChart chart = fictitious_chart(box, curve, nullptr);
        const ExtensionSystem sys = extension_system(chart, m, basis);
        if (sys.A.rows() == 0) {
            conds.push_back(1.0);
            continue;
        }
        Eigen::MatrixXd preconditioned;
        if (basis == Basis1D::legendre) {
            preconditioned = sys.A.diagonal().cwiseInverse().asDiagonal() * sys.A;
        } else {
            // block Jacobi with (m+1)-sized diagonal blocks
            preconditioned = sys.A;
            const int bs = m + 1;
            for (int jb = 0; jb * bs < sys.A.rows(); ++jb) {
                const Eigen::MatrixXd D = sys.A.block(jb * bs, jb * bs, bs, bs);
                preconditioned.middleRows(jb * bs, bs) =
                    Eigen::PartialPivLU<Eigen::MatrixXd>(D).solve(sys.A.middleRows(jb * bs, bs));
            }
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(preconditioned);
        const auto& sv = svd.singularValues();
        conds.push_back(sv(0) / sv(sv.size() - 1));
    }
    return conds;
}

void dump_extension_system(std::ostream& os, const ExtensionSystem& sys,
                           const Eigen::MatrixXd* coeffs) {
    auto dump = [&os](const char* name, const Eigen::MatrixXd& M) {
        os << name << " " << M.rows() << " " << M.cols() << "\n";
        for (Eigen::Index r = 0; r < M.rows(); ++r)
            for (Eigen::Index c = 0; c < M.cols(); ++c)
                if (M(r, c) != 0.0) os << r + 1 << " " << c + 1 << " " << M(r, c) << "\n";
    };
    dump("A", sys.A);
    dump("B", sys.B);
    if (coeffs) dump("C", *coeffs);
}

} // namespace fife
