#include "fife/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fife {

QuadRule1D gauss_rule(int n, double a, double b) {
    if (n < 1) throw Error("gauss_rule: need at least one point");
    QuadRule1D rule;
    rule.x.resize(n);
    rule.w.resize(n);

    // Newton iteration on Legendre polynomials, standard interval first
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        rule.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * t;
        rule.w[i] = (b - a) / ((1.0 - t * t) * dp * dp);
    }
    std::sort(rule.x.begin(), rule.x.end());
    std::reverse(rule.w.begin(), rule.w.end()); // weights are symmetric; keep pairing
    return rule;
}

QuadRule tensor_rule(const Rect& box, int n, Side tag) {
    const QuadRule1D gx = gauss_rule(n, box.x0, box.x1);
    const QuadRule1D gy = gauss_rule(n, box.y0, box.y1);
    QuadRule rule;
    rule.nodes.reserve(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            rule.nodes.push_back(QuadNode{Vec2(gx.x[i], gy.x[j]), gx.w[i] * gy.w[j], tag});
    return rule;
}

namespace {

// fan triangle (apex, p, q) integrated by a collapsed tensor rule
void append_triangle(QuadRule& rule, const Vec2& apex, const Vec2& p, const Vec2& q,
                     const QuadRule1D& unit, Side tag) {
    const int n = static_cast<int>(unit.x.size());
    const double area2 = wedge(p - apex, q - p); // 2x signed area of (apex, p, q)
    for (int iu = 0; iu < n; ++iu) {
        const double u = unit.x[iu];
        for (int iv = 0; iv < n; ++iv) {
            const double v = unit.x[iv];
            const Vec2 x = apex + u * ((1.0 - v) * (p - apex) + v * (q - apex));
            const double jac = u * area2;
            rule.nodes.push_back(QuadNode{x, unit.w[iu] * unit.w[iv] * jac, tag});
        }
    }
}

// region swept from the apex to the curve segment xi in [xi0, xi1]
void append_curved_fan(QuadRule& rule, const Vec2& apex, const Curve& curve,
                       double xi0, double xi1, const QuadRule1D& unit, Side tag,
                       double drop_below) {
    const int n = static_cast<int>(unit.x.size());
    std::vector<QuadNode> local;
    double measure = 0.0;
    for (int it = 0; it < n; ++it) {
        const double t = unit.x[it];
        const double xi = xi0 + t * (xi1 - xi0);
        const Vec2 gamma = curve.g(xi);
        const Vec2 dgamma = curve.dg(xi) * (xi1 - xi0);
        for (int is = 0; is < n; ++is) {
            const double s = unit.x[is];
            const Vec2 x = (1.0 - s) * apex + s * gamma;
            // signed fan element, positive for a counterclockwise sweep
            const double jac = s * wedge(gamma - apex, dgamma);
            const double w = unit.w[it] * unit.w[is] * jac;
            local.push_back(QuadNode{x, w, tag});
            measure += w;
        }
    }
    if (std::abs(measure) < drop_below) return; // degenerate sliver, drop
    rule.nodes.insert(rule.nodes.end(), local.begin(), local.end());
}

} // namespace

QuadRule cut_cell_rule(const Rect& box, const Curve& curve, const CutTopology& cut,
                       const SideLocator& locator, int n) {
    if (n < 1) throw Error("cut_cell_rule: need at least one point per direction");
    const QuadRule1D unit = gauss_rule(n, 0.0, 1.0);
    const double h = box.diameter();

    // boundary walk of the element split at D and E
    struct Node {
        Vec2 x;
        double walk;
        bool is_cut;
    };
    auto walk_of = [&](const Vec2& x) {
        // position of a boundary point along the counterclockwise walk
        double acc = 0.0;
        for (int s = 0; s < 4; ++s) {
            const Vec2 a = box.corner(s), b = box.corner(s + 1);
            const Vec2 d = b - a;
            const double len = d.norm();
            const double t = d.dot(x - a) / (len * len);
            if (t >= -1e-12 && t <= 1.0 + 1e-12 && (x - (a + t * d)).norm() < 1e-9 * h)
                return acc + std::clamp(t, 0.0, 1.0) * len;
            acc += len;
        }
        throw MeshError("cut_cell_rule: cut point does not lie on the element boundary");
    };

    std::vector<Node> loop;
    for (int s = 0; s < 4; ++s) {
        const Vec2 a = box.corner(s);
        double acc = 0.0;
        for (int q = 0; q < s; ++q) acc += (box.corner(q + 1) - box.corner(q)).norm();
        loop.push_back(Node{a, acc, false});
    }
    loop.push_back(Node{cut.D, walk_of(cut.D), true});
    loop.push_back(Node{cut.E, walk_of(cut.E), true});
    std::sort(loop.begin(), loop.end(), [](const Node& l, const Node& r) { return l.walk < r.walk; });

    // deduplicate cut points that coincide with corners
    std::vector<Node> clean;
    for (const auto& nd : loop) {
        if (!clean.empty() && (clean.back().x - nd.x).norm() < 1e-12 * h) {
            clean.back().is_cut = clean.back().is_cut || nd.is_cut;
            continue;
        }
        clean.push_back(nd);
    }
    if ((clean.front().x - clean.back().x).norm() < 1e-12 * h) {
        clean.front().is_cut = clean.front().is_cut || clean.back().is_cut;
        clean.pop_back();
    }

    const int nn = static_cast<int>(clean.size());
    int iD = -1, iE = -1;
    for (int i = 0; i < nn; ++i) {
        if (!clean[i].is_cut) continue;
        if ((clean[i].x - cut.D).norm() < (clean[i].x - cut.E).norm())
            iD = i;
        else
            iE = i;
    }
    if (iD < 0 || iE < 0)
        throw MeshError("cut_cell_rule: could not locate both cut points on the boundary walk");

    QuadRule rule;
    const double drop_below = 1e-14 * box.area();

    // two boundary chains: iD -> iE and iE -> iD (counterclockwise)
    for (int pass = 0; pass < 2; ++pass) {
        const int from = pass == 0 ? iD : iE;
        const int to = pass == 0 ? iE : iD;

        std::vector<Vec2> chain;
        for (int i = from;; i = (i + 1) % nn) {
            chain.push_back(clean[i].x);
            if (i == to) break;
            if (static_cast<int>(chain.size()) > nn + 1)
                throw MeshError("cut_cell_rule: malformed boundary walk");
        }

        // side of this sub-region, probed just inside the chain midpoint
        Vec2 probe;
        if (chain.size() >= 3) {
            probe = chain[1];
            // nudge towards the chain centroid to get off the boundary
            Vec2 centroid = Vec2::Zero();
            for (const auto& p : chain) centroid += p;
            centroid /= static_cast<double>(chain.size());
            probe = probe + 1e-3 * (centroid - probe);
        } else {
            // chain is just the chord; probe between chord and curve
            const double xim = 0.5 * (cut.xi_D + cut.xi_E);
            probe = 0.5 * (0.5 * (cut.D + cut.E) + curve.g(xim));
        }
        const Side tag = locator.side(probe);

        Vec2 anchor = Vec2::Zero();
        for (const auto& p : chain) anchor += p;
        anchor /= static_cast<double>(chain.size());

        for (size_t i = 0; i + 1 < chain.size(); ++i)
            append_triangle(rule, anchor, chain[i], chain[i + 1], unit, tag);

        // curved closing piece from the chain end back to its start;
        // the curve runs from D to E as xi goes xi_D -> xi_E
        if (pass == 0)
            append_curved_fan(rule, anchor, curve, cut.xi_E, cut.xi_D, unit, tag, drop_below);
        else
            append_curved_fan(rule, anchor, curve, cut.xi_D, cut.xi_E, unit, tag, drop_below);
    }
    return rule;
}

QuadRule edge_rule(const Edge& edge, const SideLocator& locator, int n) {
    const std::vector<double> cuts = find_segment_cuts(edge.a, edge.b, locator);
    if (cuts.size() > 1)
        throw MeshError("edge_rule: edge meets the interface more than once");

    std::vector<double> breaks{0.0};
    for (double t : cuts)
        if (t > 1e-14 && t < 1.0 - 1e-14) breaks.push_back(t);
    breaks.push_back(1.0);

    QuadRule rule;
    const Vec2 dir = edge.b - edge.a;
    for (size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double t0 = breaks[s], t1 = breaks[s + 1];
        const Side tag = locator.side(edge.a + 0.5 * (t0 + t1) * dir);
        const QuadRule1D g = gauss_rule(n, t0, t1);
        for (int i = 0; i < n; ++i)
            rule.nodes.push_back(QuadNode{edge.a + g.x[i] * dir, g.w[i] * dir.norm(), tag});
    }
    return rule;
}

QuadRule edge_rule(const Edge& edge, int n, Side tag) {
    QuadRule rule;
    const Vec2 dir = edge.b - edge.a;
    const QuadRule1D g = gauss_rule(n, 0.0, 1.0);
    for (int i = 0; i < n; ++i)
        rule.nodes.push_back(QuadNode{edge.a + g.x[i] * dir, g.w[i] * dir.norm(), tag});
    return rule;
}

} // namespace fife
