#pragma once

#include <vector>

#include "fife/mesh.hpp"

namespace fife {

/// Gauss-Legendre rule on [a, b], exact for polynomials of degree <= 2n-1.
struct QuadRule1D {
    std::vector<double> x;
    std::vector<double> w;
};

QuadRule1D gauss_rule(int n, double a, double b);

/// Side-tagged 2D quadrature node.
struct QuadNode {
    Vec2 x;
    double w = 0.0;
    Side side = Side::plus;
};

struct QuadRule {
    std::vector<QuadNode> nodes;

    double weight_sum(Side s) const {
        double sum = 0.0;
        for (const auto& q : nodes)
            if (q.side == s) sum += q.w;
        return sum;
    }
    double weight_sum() const {
        double sum = 0.0;
        for (const auto& q : nodes) sum += q.w;
        return sum;
    }
};

/// Tensor-product Gauss rule on a rectangle, all nodes tagged `tag`.
QuadRule tensor_rule(const Rect& box, int n, Side tag);

/// Quadrature over the two sub-regions of a cut element. Each side is
/// decomposed into a fan of straight triangles plus one region with the
/// curve as its only curved side, all integrated by mapped tensor-Gauss
/// rules with n points per direction.
QuadRule cut_cell_rule(const Rect& box, const Curve& curve, const CutTopology& cut,
                       const SideLocator& locator, int n);

/// Gauss rule along an edge, split at the interface crossing when there
/// is one; nodes are tagged by the side of their sub-segment midpoint.
QuadRule edge_rule(const Edge& edge, const SideLocator& locator, int n);

/// Uncut variant for meshes without an interface.
QuadRule edge_rule(const Edge& edge, int n, Side tag);

} // namespace fife
