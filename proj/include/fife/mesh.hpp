#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "fife/geometry.hpp"

namespace fife {

enum class Side : int { minus = -1, plus = 1 };

inline Side opposite(Side s) { return s == Side::minus ? Side::plus : Side::minus; }

/// Axis-aligned rectangle.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double diameter() const { return std::hypot(width(), height()); }
    Vec2 center() const { return Vec2(0.5 * (x0 + x1), 0.5 * (y0 + y1)); }
    Vec2 corner(int k) const {
        // counterclockwise from (x0, y0)
        switch (k & 3) {
            case 0: return Vec2(x0, y0);
            case 1: return Vec2(x1, y0);
            case 2: return Vec2(x1, y1);
            default: return Vec2(x0, y1);
        }
    }
    bool contains(const Vec2& p, double tol = 0.0) const {
        return p.x() >= x0 - tol && p.x() <= x1 + tol && p.y() >= y0 - tol && p.y() <= y1 + tol;
    }
};

struct Edge {
    Vec2 a, b;        // endpoints
    int left = -1;    // element on the side the normal points away from
    int right = -1;   // element the normal points into; -1 on the boundary
    Vec2 normal;      // unit normal, from left to right (outward on the boundary)

    bool boundary() const { return right < 0; }
    double length() const { return (b - a).norm(); }
    Vec2 midpoint() const { return 0.5 * (a + b); }
};

/// Uniform Cartesian mesh of a rectangle, row-major element numbering.
struct Mesh {
    Rect domain;
    int nx = 0, ny = 0;
    std::vector<Rect> elements;
    std::vector<Edge> edges;
    int n_interior_edges = 0;

    int n_elements() const { return nx * ny; }
    double h() const { return elements.empty() ? 0.0 : elements.front().diameter(); }
};

Mesh build_mesh(const Rect& domain, int nx, int ny);
inline Mesh build_mesh(const Rect& domain, int n) { return build_mesh(domain, n, n); }

/// Signed-offset queries against a curve, backed by a precomputed sample
/// cloud with local refinement. Safe for concurrent use once built.
class SideLocator {
public:
    SideLocator(const Curve& curve, int samples = 4096);

    const Curve& curve() const { return *curve_; }

    /// Parameter of the closest curve point (nearest sample + secant polish).
    double closest_param(const Vec2& x) const;

    /// Signed normal offset eta(x); negative on the minus side.
    double eta(const Vec2& x) const;

    Side side(const Vec2& x) const { return eta(x) < 0.0 ? Side::minus : Side::plus; }

private:
    const Curve* curve_;
    std::vector<double> params_;
    std::vector<Vec2> points_;
    // uniform bucket grid over the sample bounding box
    double bx0_ = 0, by0_ = 0, bdx_ = 1, bdy_ = 1;
    int grid_ = 1;
    std::vector<std::vector<int>> buckets_;

    int nearest_sample(const Vec2& x) const;
};

/// Interface crossing data of one interface element.
struct CutTopology {
    int element = -1;
    Vec2 D, E;            // intersection points of the curve with the element boundary
    double xi_D = 0.0;    // curve parameters, xi_D <= xi_E after unwrapping
    double xi_E = 0.0;
};

enum class ElementTag { standard, interface };

struct Classification {
    std::vector<ElementTag> tags;                 // per element
    std::vector<Side> sides;                      // side of standard elements
    std::vector<std::optional<CutTopology>> cuts; // set for interface elements
    int n_interface = 0;
};

/// Crossing parameters t in (0, 1) of the curve with segment [a, b],
/// found by a sign scan of eta plus bisection and one Newton polish.
std::vector<double> find_segment_cuts(const Vec2& a, const Vec2& b,
                                      const SideLocator& locator, int scan = 64);

Classification classify_elements(const Mesh& mesh, const SideLocator& locator);

/// Frenet fictitious rectangle [-h, h] x [a, b] attached to an element.
struct FrenetChart {
    const Curve* curve = nullptr;
    double a = 0.0;          // parameter bounds, a < b
    double b = 1.0;
    double half_width = 0.0; // element diameter
    double tube_ratio = 0.0; // half_width * max |kappa| over [a, b]

    double length() const { return b - a; }
    double midpoint() const { return 0.5 * (a + b); }
};

FrenetChart fictitious_chart(const Rect& element, const Curve& curve,
                             const CutTopology* cut = nullptr);

/// Diagnostic table: element_id, tag, xi_D, xi_E, a_K, b_K.
void write_mesh_summary(std::ostream& os, const Mesh& mesh, const Classification& cls,
                        const std::vector<std::optional<FrenetChart>>& charts);

} // namespace fife
