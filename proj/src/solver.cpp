#include "fife/solver.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace fife {

DGSpace build_dg_space(const Mesh& mesh, const Curve* curve, const SideLocator* locator,
                       int m, double beta_minus, double beta_plus, Basis1D basis) {
    DGSpace dg;
    dg.mesh = mesh;
    dg.curve = curve;
    dg.locator = locator;
    dg.m = m;
    dg.beta_minus = beta_minus;
    dg.beta_plus = beta_plus;

    const int n = mesh.n_elements();
    dg.charts.assign(n, std::nullopt);
    dg.spaces.reserve(n);

    if (curve && locator) {
        dg.cls = classify_elements(mesh, *locator);
    } else {
        dg.cls.tags.assign(n, ElementTag::standard);
        dg.cls.sides.assign(n, Side::plus);
        dg.cls.cuts.assign(n, std::nullopt);
    }

    // with equal coefficients the jump conditions are vacuous and the
    // standard tensor space is used everywhere
    const bool use_ife = curve && locator && beta_minus != beta_plus;

    for (int e = 0; e < n; ++e) {
        if (use_ife && dg.cls.tags[e] == ElementTag::interface) {
            const FrenetChart chart = fictitious_chart(mesh.elements[e], *curve, &*dg.cls.cuts[e]);
            dg.charts[e] = chart;
            dg.spaces.push_back(build_local_space(chart, m, beta_minus, beta_plus, basis));
        } else {
            const Side side = dg.cls.tags[e] == ElementTag::interface
                                  ? Side::plus // unused: beta has no jump here
                                  : dg.cls.sides[e];
            dg.spaces.push_back(standard_space(mesh.elements[e], m, side));
        }
    }
    return dg;
}

namespace {

QuadRule volume_rule(const DGSpace& dg, int element, int n) {
    if (dg.cls.tags[element] == ElementTag::interface && dg.locator)
        return cut_cell_rule(dg.mesh.elements[element], *dg.curve, *dg.cls.cuts[element],
                             *dg.locator, n);
    return tensor_rule(dg.mesh.elements[element], n, dg.cls.sides[element]);
}

QuadRule edge_quadrature(const DGSpace& dg, const Edge& edge, int n) {
    if (!dg.locator) return edge_rule(edge, n, Side::plus);
    // splitting is only needed where the interface can cross
    const bool near_interface =
        dg.cls.tags[edge.left] == ElementTag::interface ||
        (edge.right >= 0 && dg.cls.tags[edge.right] == ElementTag::interface);
    if (near_interface) return edge_rule(edge, *dg.locator, n);
    return edge_rule(edge, n, dg.cls.sides[edge.left]);
}

} // namespace

GlobalSystem assemble_system(const DGSpace& dg, const SideFunction& f,
                             const SideFunction& g, const SolveOptions& opts) {
    const int m = dg.m;
    const int n_vol = opts.volume_order > 0 ? opts.volume_order : m + 3;
    const int n_edge = opts.edge_order > 0 ? opts.edge_order : m + 2;
    const int nd = (m + 1) * (m + 1);
    const int total = dg.ndof();

    GlobalSystem sys;
    sys.rhs = Eigen::VectorXd::Zero(total);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(dg.mesh.n_elements()) * nd * nd +
                     static_cast<size_t>(dg.mesh.edges.size()) * 4 * nd * nd);

    auto add_block = [&](int row0, int col0, const Eigen::MatrixXd& block) {
        for (int i = 0; i < block.rows(); ++i)
            for (int j = 0; j < block.cols(); ++j)
                if (block(i, j) != 0.0)
                    triplets.emplace_back(row0 + i, col0 + j, block(i, j));
    };

    for (int e = 0; e < dg.mesh.n_elements(); ++e) {
        const QuadRule rule = volume_rule(dg, e, n_vol);
        const LocalBlocks blocks = local_volume(dg.spaces[e], rule, dg.beta_minus, dg.beta_plus);
        add_block(dg.dof_offset(e), dg.dof_offset(e), blocks.stiffness);
        sys.rhs.segment(dg.dof_offset(e), nd) += load_terms(dg.spaces[e], rule, f);
    }

    for (const Edge& edge : dg.mesh.edges) {
        const QuadRule rule = edge_quadrature(dg, edge, n_edge);
        const LocalSpace& left = dg.spaces[edge.left];
        const LocalSpace* right = edge.right >= 0 ? &dg.spaces[edge.right] : nullptr;
        const FaceBlocks fb =
            face_terms(edge, left, right, rule, opts.sigma0, dg.beta_minus, dg.beta_plus, &g);

        const int l0 = dg.dof_offset(edge.left);
        add_block(l0, l0, fb.block[0][0]);
        if (right) {
            const int r0 = dg.dof_offset(edge.right);
            add_block(l0, r0, fb.block[0][1]);
            add_block(r0, l0, fb.block[1][0]);
            add_block(r0, r0, fb.block[1][1]);
        } else {
            sys.rhs.segment(l0, nd) += fb.boundary_load;
        }
    }

    sys.matrix.resize(total, total);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

void solve_system(GlobalSystem& sys, double residual_tol) {
    const auto t0 = std::chrono::steady_clock::now();

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(sys.matrix);
    bool solved = false;
    if (ldlt.info() == Eigen::Success) {
        sys.solution = ldlt.solve(sys.rhs);
        solved = (ldlt.info() == Eigen::Success) && sys.solution.allFinite();
    }
    if (!solved) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sys.matrix);
        if (lu.info() != Eigen::Success)
            throw SolveError("solve_system: factorization failed");
        sys.solution = lu.solve(sys.rhs);
        if (!sys.solution.allFinite())
            throw SolveError("solve_system: solve produced non-finite values");
    }

    const double rhs_norm = sys.rhs.norm();
    sys.residual = (sys.matrix * sys.solution - sys.rhs).norm() / (rhs_norm > 0 ? rhs_norm : 1.0);
    sys.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (sys.residual > residual_tol)
        throw SolveError("solve_system: relative residual " + std::to_string(sys.residual) +
                         " above tolerance");
}

GlobalSystem assemble_and_solve(const DGSpace& space, const SideFunction& f,
                                const SideFunction& g, const SolveOptions& opts) {
    GlobalSystem sys = assemble_system(space, f, g, opts);
    solve_system(sys, opts.residual_tol);
    return sys;
}

ErrorReport compute_error(const DGSpace& dg, const Eigen::VectorXd& coeffs,
                          const SideFunction& u_exact, const SideGradient* grad_exact,
                          int quad_order) {
    const int m = dg.m;
    const int n_vol = quad_order > 0 ? quad_order : m + 3;
    const int nd = (m + 1) * (m + 1);

    ErrorReport report;
    report.quad_order = n_vol;
    double err2_minus = 0.0, err2_plus = 0.0, norm2 = 0.0, h1_2 = 0.0, h1_norm2 = 0.0;

    ShapeValues sv;
    for (int e = 0; e < dg.mesh.n_elements(); ++e) {
        const QuadRule rule = volume_rule(dg, e, n_vol);
        const auto ce = coeffs.segment(dg.dof_offset(e), nd);
        for (const QuadNode& q : rule.nodes) {
            eval_shapes(dg.spaces[e], q.x, q.side, sv);
            const double uh = sv.v.dot(ce);
            const double ue = u_exact(q.x, q.side);
            const double d = uh - ue;
            norm2 += q.w * ue * ue;
            if (q.side == Side::minus)
                err2_minus += q.w * d * d;
            else
                err2_plus += q.w * d * d;
            if (grad_exact) {
                const Vec2 ge = (*grad_exact)(q.x, q.side);
                const double dgx = sv.gx.dot(ce) - ge.x();
                const double dgy = sv.gy.dot(ce) - ge.y();
                h1_2 += q.w * (dgx * dgx + dgy * dgy);
                h1_norm2 += q.w * ge.squaredNorm();
            }
        }
    }
    report.l2_minus = std::sqrt(err2_minus);
    report.l2_plus = std::sqrt(err2_plus);
    report.norm_l2 = std::sqrt(norm2);
    report.rel_l2 = std::sqrt(err2_minus + err2_plus) / (report.norm_l2 > 0 ? report.norm_l2 : 1.0);
    if (grad_exact && h1_norm2 > 0) report.rel_h1 = std::sqrt(h1_2 / h1_norm2);
    return report;
}

Eigen::VectorXd project_l2(const DGSpace& dg, const SideFunction& u, int quad_order) {
    const int m = dg.m;
    const int n_vol = quad_order > 0 ? quad_order : m + 3;
    const int nd = (m + 1) * (m + 1);
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(dg.ndof());
    for (int e = 0; e < dg.mesh.n_elements(); ++e) {
        const QuadRule rule = volume_rule(dg, e, n_vol);
        coeffs.segment(dg.dof_offset(e), nd) = project_element_l2(dg.spaces[e], rule, u);
    }
    return coeffs;
}

double eval_discrete(const DGSpace& dg, const Eigen::VectorXd& coeffs, const Vec2& x) {
    const double dx = dg.mesh.domain.width() / dg.mesh.nx;
    const double dy = dg.mesh.domain.height() / dg.mesh.ny;
    int i = static_cast<int>((x.x() - dg.mesh.domain.x0) / dx);
    int j = static_cast<int>((x.y() - dg.mesh.domain.y0) / dy);
    i = std::clamp(i, 0, dg.mesh.nx - 1);
    j = std::clamp(j, 0, dg.mesh.ny - 1);
    const int e = j * dg.mesh.nx + i;
    const int nd = (dg.m + 1) * (dg.m + 1);
    double value = 0.0;
    for (int k = 0; k < nd; ++k)
        value += coeffs[dg.dof_offset(e) + k] * eval_shape(dg.spaces[e], k, x);
    return value;
}

RateSummary convergence_rates(const std::vector<std::pair<double, double>>& h_error) {
    if (h_error.size() < 3)
        throw Error("convergence_rates: need at least three (h, error) records");
    RateSummary summary;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(h_error.size());
    for (const auto& [h, err] : h_error) {
        if (h <= 0 || err <= 0)
            throw Error("convergence_rates: h and error must be positive");
        const double lx = std::log(h), ly = std::log(err);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14)
        throw Error("convergence_rates: h values must be distinct");
    summary.slope = (n * sxy - sx * sy) / denom;

    for (size_t i = 0; i + 1 < h_error.size(); ++i) {
        const double dh = std::log(h_error[i].first / h_error[i + 1].first);
        summary.pairwise.push_back(std::log(h_error[i].second / h_error[i + 1].second) / dh);
    }
    return summary;
}

} // namespace fife
