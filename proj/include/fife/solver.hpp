#pragma once

#include <Eigen/Sparse>

#include "fife/assembly.hpp"

namespace fife {

/// Discrete DG space over a mesh: standard tensor elements away from the
/// interface, Frenet IFE spaces on interface elements. When beta has no
/// jump the interface is immaterial and every element is standard.
struct DGSpace {
    Mesh mesh;
    const Curve* curve = nullptr;            // null when there is no interface
    const SideLocator* locator = nullptr;    // null when there is no interface
    Classification cls;
    std::vector<std::optional<FrenetChart>> charts;
    std::vector<LocalSpace> spaces;
    int m = 1;
    double beta_minus = 1.0;
    double beta_plus = 1.0;

    int ndof() const { return mesh.n_elements() * (m + 1) * (m + 1); }
    int dof_offset(int element) const { return element * (m + 1) * (m + 1); }
    Side side_at(const Vec2& x) const { return locator ? locator->side(x) : Side::plus; }
};

DGSpace build_dg_space(const Mesh& mesh, const Curve* curve, const SideLocator* locator,
                       int m, double beta_minus, double beta_plus,
                       Basis1D basis = Basis1D::legendre);

struct SolveOptions {
    double sigma0 = 4.0;
    int volume_order = 0;  // Gauss points per direction; 0 = m + 3
    int edge_order = 0;    // 0 = m + 2
    double residual_tol = 1e-10;
};

struct GlobalSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    Eigen::VectorXd solution;
    double residual = 0.0;      // relative solve residual
    double solve_seconds = 0.0; // factorize + solve time
};

/// Assemble the SIPG system and the load; deterministic accumulation
/// ordered by element id then edge id.
GlobalSystem assemble_system(const DGSpace& space, const SideFunction& f,
                             const SideFunction& g, const SolveOptions& opts = {});

/// Direct symmetric factorization with a relative-residual contract.
void solve_system(GlobalSystem& system, double residual_tol = 1e-10);

GlobalSystem assemble_and_solve(const DGSpace& space, const SideFunction& f,
                                const SideFunction& g, const SolveOptions& opts = {});

struct ErrorReport {
    double rel_l2 = 0.0;
    double rel_h1 = 0.0;     // broken H1 seminorm, 0 when no gradient given
    double l2_minus = 0.0;   // absolute per-side L2 errors
    double l2_plus = 0.0;
    double norm_l2 = 0.0;    // ||u|| with the same rule
    int quad_order = 0;
};

ErrorReport compute_error(const DGSpace& space, const Eigen::VectorXd& coeffs,
                          const SideFunction& u_exact, const SideGradient* grad_exact = nullptr,
                          int quad_order = 0);

/// Element-wise L2 projection of u onto the discrete space.
Eigen::VectorXd project_l2(const DGSpace& space, const SideFunction& u, int quad_order = 0);

/// Evaluate the discrete function at a point (test helper).
double eval_discrete(const DGSpace& space, const Eigen::VectorXd& coeffs, const Vec2& x);

struct RateSummary {
    double slope = 0.0;               // least-squares slope of log e vs log h
    std::vector<double> pairwise;     // log2(e_i / e_{i+1}) / log2(h_i / h_{i+1})
};

RateSummary convergence_rates(const std::vector<std::pair<double, double>>& h_error);

} // namespace fife
