#include "fife/assembly.hpp"

#include <cmath>

namespace fife {

void eval_shapes(const LocalSpace& space, const Vec2& x, Side tag, ShapeValues& out) {
    const int nd = space.ndof();
    out.v.resize(nd);
    out.gx.resize(nd);
    out.gy.resize(nd);
    if (space.kind == LocalSpace::Kind::standard) {
        space.eval_standard_all(x, {out.v.data(), size_t(nd)}, {out.gx.data(), size_t(nd)},
                                {out.gy.data(), size_t(nd)});
        return;
    }
    const Curve& curve = *space.chart.curve;
    const FrenetPoint p =
        frenet_inverse(curve, x, FrenetPoint{0.0, space.chart.midpoint()});
    std::vector<double> de(nd), dx(nd);
    space.eval_frenet_all(p.eta, p.xi, tag, {out.v.data(), size_t(nd)}, de, dx);

    const FrenetFrame f = frenet_apparatus(curve, p.xi);
    const double rho = 1.0 + p.eta * f.kappa;
    const double c_tau = 1.0 / (f.speed * rho);
    for (int k = 0; k < nd; ++k) {
        out.gx[k] = de[k] * f.n.x() + dx[k] * c_tau * f.tau.x();
        out.gy[k] = de[k] * f.n.y() + dx[k] * c_tau * f.tau.y();
    }
}

LocalBlocks local_volume(const LocalSpace& space, const QuadRule& rule,
                         double beta_minus, double beta_plus) {
    const int nd = space.ndof();
    LocalBlocks blocks;
    blocks.stiffness = Eigen::MatrixXd::Zero(nd, nd);
    blocks.mass = Eigen::MatrixXd::Zero(nd, nd);
    blocks.load = Eigen::VectorXd::Zero(nd);

    ShapeValues sv;
    for (const QuadNode& q : rule.nodes) {
        eval_shapes(space, q.x, q.side, sv);
        const double beta = q.side == Side::minus ? beta_minus : beta_plus;
        blocks.stiffness.noalias() +=
            (q.w * beta) * (sv.gx * sv.gx.transpose() + sv.gy * sv.gy.transpose());
        blocks.mass.noalias() += q.w * (sv.v * sv.v.transpose());
    }
    return blocks;
}

Eigen::VectorXd load_terms(const LocalSpace& space, const QuadRule& rule,
                           const SideFunction& f) {
    const int nd = space.ndof();
    Eigen::VectorXd load = Eigen::VectorXd::Zero(nd);
    ShapeValues sv;
    for (const QuadNode& q : rule.nodes) {
        eval_shapes(space, q.x, q.side, sv);
        load.noalias() += (q.w * f(q.x, q.side)) * sv.v;
    }
    return load;
}

FaceBlocks face_terms(const Edge& edge, const LocalSpace& left, const LocalSpace* right,
                      const QuadRule& rule, double sigma0,
                      double beta_minus, double beta_plus,
                      const SideFunction* dirichlet) {
    const int m = left.m;
    const int ndl = left.ndof();
    const int ndr = right ? right->ndof() : 0;

    FaceBlocks fb;
    fb.boundary = (right == nullptr);

    double beta_edge = 0.0;
    for (const QuadNode& q : rule.nodes)
        beta_edge = std::max(beta_edge, q.side == Side::minus ? beta_minus : beta_plus);
    fb.sigma = m * m * sigma0 * beta_edge;
    const double penalty = fb.sigma / edge.length();

    fb.block[0][0] = Eigen::MatrixXd::Zero(ndl, ndl);
    if (right) {
        fb.block[0][1] = Eigen::MatrixXd::Zero(ndl, ndr);
        fb.block[1][0] = Eigen::MatrixXd::Zero(ndr, ndl);
        fb.block[1][1] = Eigen::MatrixXd::Zero(ndr, ndr);
    } else {
        fb.boundary_load = Eigen::VectorXd::Zero(ndl);
    }

    ShapeValues svl, svr;
    for (const QuadNode& q : rule.nodes) {
        const double beta = q.side == Side::minus ? beta_minus : beta_plus;
        eval_shapes(left, q.x, q.side, svl);
        const Eigen::VectorXd fl =
            beta * (edge.normal.x() * svl.gx + edge.normal.y() * svl.gy); // beta grad phi . n_e

        if (!right) {
            // boundary edge: jump = average = trace
            fb.block[0][0].noalias() +=
                q.w * (penalty * (svl.v * svl.v.transpose()) - svl.v * fl.transpose() -
                       fl * svl.v.transpose());
            if (dirichlet) {
                const double g = (*dirichlet)(q.x, q.side);
                fb.boundary_load.noalias() += (q.w * g) * (penalty * svl.v - fl);
            }
            continue;
        }

        eval_shapes(*right, q.x, q.side, svr);
        const Eigen::VectorXd fr =
            beta * (edge.normal.x() * svr.gx + edge.normal.y() * svr.gy);

        // jump [w] = w_L - w_R, average {w} = (w_L + w_R)/2
        fb.block[0][0].noalias() +=
            q.w * (penalty * (svl.v * svl.v.transpose()) -
                   0.5 * (svl.v * fl.transpose() + fl * svl.v.transpose()));
        fb.block[0][1].noalias() +=
            q.w * (-penalty * (svl.v * svr.v.transpose()) -
                   0.5 * (svl.v * fr.transpose()) + 0.5 * (fl * svr.v.transpose()));
        fb.block[1][0].noalias() +=
            q.w * (-penalty * (svr.v * svl.v.transpose()) +
                   0.5 * (svr.v * fl.transpose()) - 0.5 * (fr * svl.v.transpose()));
        fb.block[1][1].noalias() +=
            q.w * (penalty * (svr.v * svr.v.transpose()) +
                   0.5 * (svr.v * fr.transpose() + fr * svr.v.transpose()));
    }
    return fb;
}

Eigen::VectorXd project_element_l2(const LocalSpace& space, const QuadRule& rule,
                                   const SideFunction& u) {
    const int nd = space.ndof();
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nd, nd);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nd);
    ShapeValues sv;
    for (const QuadNode& q : rule.nodes) {
        eval_shapes(space, q.x, q.side, sv);
        mass.noalias() += q.w * (sv.v * sv.v.transpose());
        rhs.noalias() += (q.w * u(q.x, q.side)) * sv.v;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(mass);
    if (ldlt.info() != Eigen::Success)
        throw SolveError("project_element_l2: singular element mass matrix");
    return ldlt.solve(rhs);
}

} // namespace fife
