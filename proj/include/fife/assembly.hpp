#pragma once

#include <optional>

#include "fife/ife_basis.hpp"
#include "fife/quadrature.hpp"

namespace fife {

/// Piecewise data evaluated per side of the interface.
using SideFunction = std::function<double(const Vec2&, Side)>;
using SideGradient = std::function<Vec2(const Vec2&, Side)>;

/// Values and Cartesian gradients of all shapes of one element at one
/// quadrature node, with the interface side chosen by the node tag.
struct ShapeValues {
    Eigen::VectorXd v;
    Eigen::VectorXd gx;
    Eigen::VectorXd gy;
};

void eval_shapes(const LocalSpace& space, const Vec2& x, Side tag, ShapeValues& out);

struct LocalBlocks {
    Eigen::MatrixXd stiffness;
    Eigen::MatrixXd mass;
    Eigen::VectorXd load;
};

/// Volume stiffness and mass of one element. beta is taken per node from
/// its side tag; the mass matrix carries no beta.
LocalBlocks local_volume(const LocalSpace& space, const QuadRule& rule,
                         double beta_minus, double beta_plus);

/// Load vector (f, v)_K with f evaluated per node side.
Eigen::VectorXd load_terms(const LocalSpace& space, const QuadRule& rule,
                           const SideFunction& f);

struct FaceBlocks {
    // coupling blocks indexed [test][trial] with 0 = left, 1 = right
    Eigen::MatrixXd block[2][2];
    Eigen::VectorXd boundary_load; // empty on interior edges
    double sigma = 0.0;            // penalty sigma_e
    bool boundary = false;
};

/// SIPG edge terms: consistency, symmetry and penalty, with the penalty
/// sigma_e = m^2 sigma0 beta^e scaled by the edge length. On boundary
/// edges jump = average = trace and the Dirichlet data enters the load.
FaceBlocks face_terms(const Edge& edge, const LocalSpace& left, const LocalSpace* right,
                      const QuadRule& rule, double sigma0,
                      double beta_minus, double beta_plus,
                      const SideFunction* dirichlet = nullptr);

/// Element-wise L2 projection; the global space is fully discontinuous so
/// the projection decouples into local mass solves.
Eigen::VectorXd project_element_l2(const LocalSpace& space, const QuadRule& rule,
                                   const SideFunction& u);

} // namespace fife
