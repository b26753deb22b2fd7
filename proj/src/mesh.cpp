#include "fife/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace fife {

Mesh build_mesh(const Rect& domain, int nx, int ny) {
    if (nx < 1 || ny < 1)
        throw MeshError("build_mesh: element counts must be >= 1");
    if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0))
        throw MeshError("build_mesh: degenerate domain rectangle");

    Mesh mesh;
    mesh.domain = domain;
    mesh.nx = nx;
    mesh.ny = ny;
    const double dx = domain.width() / nx;
    const double dy = domain.height() / ny;

    mesh.elements.reserve(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            mesh.elements.push_back(Rect{domain.x0 + i * dx, domain.y0 + j * dy,
                                         domain.x0 + (i + 1) * dx, domain.y0 + (j + 1) * dy});

    auto elem_id = [&](int i, int j) { return j * nx + i; };

    // interior edges first, then boundary edges; deterministic ordering
    std::vector<Edge> interior, boundary;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i <= nx; ++i) { // vertical edges at x = x0 + i dx
            Edge e;
            e.a = Vec2(domain.x0 + i * dx, domain.y0 + j * dy);
            e.b = Vec2(domain.x0 + i * dx, domain.y0 + (j + 1) * dy);
            if (i == 0) {
                e.left = elem_id(0, j);
                e.normal = Vec2(-1, 0);
                boundary.push_back(e);
            } else if (i == nx) {
                e.left = elem_id(nx - 1, j);
                e.normal = Vec2(1, 0);
                boundary.push_back(e);
            } else {
                e.left = elem_id(i - 1, j);
                e.right = elem_id(i, j);
                e.normal = Vec2(1, 0);
                interior.push_back(e);
            }
        }
    }
    for (int j = 0; j <= ny; ++j) { // horizontal edges at y = y0 + j dy
        for (int i = 0; i < nx; ++i) {
            Edge e;
            e.a = Vec2(domain.x0 + i * dx, domain.y0 + j * dy);
            e.b = Vec2(domain.x0 + (i + 1) * dx, domain.y0 + j * dy);
            if (j == 0) {
                e.left = elem_id(i, 0);
                e.normal = Vec2(0, -1);
                boundary.push_back(e);
            } else if (j == ny) {
                e.left = elem_id(i, ny - 1);
                e.normal = Vec2(0, 1);
                boundary.push_back(e);
            } else {
                e.left = elem_id(i, j - 1);
                e.right = elem_id(i, j);
                e.normal = Vec2(0, 1);
                interior.push_back(e);
            }
        }
    }
    mesh.n_interior_edges = static_cast<int>(interior.size());
    mesh.edges = std::move(interior);
    mesh.edges.insert(mesh.edges.end(), boundary.begin(), boundary.end());
    return mesh;
}

SideLocator::SideLocator(const Curve& curve, int samples) : curve_(&curve) {
    params_.resize(samples);
    points_.resize(samples);
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (int i = 0; i < samples; ++i) {
        const double xi = curve.xi_begin + curve.domain_length() * i / (samples - 1.0);
        params_[i] = xi;
        points_[i] = curve.g(xi);
        x0 = std::min(x0, points_[i].x());
        y0 = std::min(y0, points_[i].y());
        x1 = std::max(x1, points_[i].x());
        y1 = std::max(y1, points_[i].y());
    }
    const double pad = 1e-12 + 1e-9 * (std::abs(x1 - x0) + std::abs(y1 - y0));
    bx0_ = x0 - pad;
    by0_ = y0 - pad;
    grid_ = 64;
    bdx_ = (x1 - x0 + 2 * pad) / grid_;
    bdy_ = (y1 - y0 + 2 * pad) / grid_;
    if (bdx_ <= 0) bdx_ = 1.0;
    if (bdy_ <= 0) bdy_ = 1.0;
    buckets_.assign(static_cast<size_t>(grid_) * grid_, {});
    for (int i = 0; i < samples; ++i) {
        const int cx = std::clamp(static_cast<int>((points_[i].x() - bx0_) / bdx_), 0, grid_ - 1);
        const int cy = std::clamp(static_cast<int>((points_[i].y() - by0_) / bdy_), 0, grid_ - 1);
        buckets_[static_cast<size_t>(cy) * grid_ + cx].push_back(i);
    }
}

int SideLocator::nearest_sample(const Vec2& x) const {
    const int cx = std::clamp(static_cast<int>((x.x() - bx0_) / bdx_), 0, grid_ - 1);
    const int cy = std::clamp(static_cast<int>((x.y() - by0_) / bdy_), 0, grid_ - 1);

    int best = -1;
    double best_d2 = 1e300;
    for (int ring = 0; ring < grid_; ++ring) {
        const int lo_x = std::max(0, cx - ring), hi_x = std::min(grid_ - 1, cx + ring);
        const int lo_y = std::max(0, cy - ring), hi_y = std::min(grid_ - 1, cy + ring);
        for (int gy = lo_y; gy <= hi_y; ++gy) {
            for (int gx = lo_x; gx <= hi_x; ++gx) {
                if (ring > 0 && gx != lo_x && gx != hi_x && gy != lo_y && gy != hi_y)
                    continue; // only the new ring
                for (int idx : buckets_[static_cast<size_t>(gy) * grid_ + gx]) {
                    const double d2 = (points_[idx] - x).squaredNorm();
                    if (d2 < best_d2) {
                        best_d2 = d2;
                        best = idx;
                    }
                }
            }
        }
        if (best >= 0) {
            // the next ring cannot beat the current best once it is farther
            // than the guaranteed ring clearance
            const double clearance = ring * std::min(bdx_, bdy_);
            if (best_d2 <= clearance * clearance || ring >= grid_) break;
        }
    }
    if (best < 0) throw GeometryError("SideLocator: empty sample set");
    return best;
}

double SideLocator::closest_param(const Vec2& x) const {
    const Curve& c = *curve_;
    const int i0 = nearest_sample(x);
    const double step = c.domain_length() / (params_.size() - 1.0);

    auto deriv = [&](double xi) { return 2.0 * c.dg(xi).dot(c.g(xi) - x); };

    double xi = params_[i0];
    double xi_prev = xi + 0.5 * step;
    double d = deriv(xi);
    double d_prev = deriv(xi_prev);
    const double tol = 1e-13 * (1.0 + x.squaredNorm());
    for (int it = 0; it < 40; ++it) {
        if (std::abs(d) <= tol) break;
        const double denom = d - d_prev;
        double next;
        if (std::abs(denom) > 1e-300)
            next = xi - d * (xi - xi_prev) / denom;
        else
            break;
        // keep the iteration local to the nearest-sample neighborhood
        next = std::clamp(next, xi - 4 * step, xi + 4 * step);
        if (!c.periodic) next = std::clamp(next, c.xi_begin, c.xi_end);
        if (next == xi) break;
        xi_prev = xi;
        d_prev = d;
        xi = next;
        d = deriv(xi);
    }
    return xi;
}

double SideLocator::eta(const Vec2& x) const {
    const double xi = closest_param(x);
    const FrenetFrame f = frenet_apparatus(*curve_, xi);
    return (x - curve_->g(xi)).dot(f.n);
}

std::vector<double> find_segment_cuts(const Vec2& a, const Vec2& b,
                                      const SideLocator& locator, int scan) {
    const Vec2 dir = b - a;
    const double len = dir.norm();
    auto eta_at = [&](double t) { return locator.eta(a + t * dir); };

    std::vector<double> etas(scan + 1);
    for (int i = 0; i <= scan; ++i) etas[i] = eta_at(static_cast<double>(i) / scan);

    auto transversality_slope = [&](double t) {
        const Vec2 x = a + t * dir;
        const double xi = locator.closest_param(x);
        const FrenetFrame f = frenet_apparatus(locator.curve(), xi);
        const double slope = f.n.dot(dir);
        if (std::abs(slope) < 1e-10 * len)
            throw MeshError("find_segment_cuts: tangential intersection of the curve with an edge");
        return slope;
    };

    std::vector<double> cuts;
    // exact zeros at scan points (vertex hits, symmetric cuts)
    for (int i = 0; i <= scan; ++i) {
        if (etas[i] != 0.0) continue;
        const bool sign_change =
            (i > 0 && i < scan) ? etas[i - 1] * etas[i + 1] < 0.0 : true;
        if (!sign_change) continue;
        transversality_slope(static_cast<double>(i) / scan);
        cuts.push_back(static_cast<double>(i) / scan);
    }
    for (int i = 0; i < scan; ++i) {
        double lo = static_cast<double>(i) / scan, hi = static_cast<double>(i + 1) / scan;
        double elo = etas[i], ehi = etas[i + 1];
        if (elo * ehi >= 0.0) continue;
        for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double em = eta_at(mid);
            if (em == 0.0) {
                lo = hi = mid;
                break;
            }
            if (em * elo < 0.0) {
                hi = mid;
                ehi = em;
            } else {
                lo = mid;
                elo = em;
            }
        }
        double t = 0.5 * (lo + hi);
        // one Newton polish: d eta / d t = n(xi*) . (b - a)
        {
            const double slope = transversality_slope(t);
            const double t2 = t - eta_at(t) / slope;
            if (t2 > 0.0 && t2 < 1.0 && std::abs(eta_at(t2)) < std::abs(eta_at(t))) t = t2;
        }
        cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

namespace {

struct BoundaryHit {
    Vec2 x;
    double walk; // position along the element boundary walk, for ordering
};

} // namespace

Classification classify_elements(const Mesh& mesh, const SideLocator& locator) {
    const int n = mesh.n_elements();
    Classification cls;
    cls.tags.assign(n, ElementTag::standard);
    cls.sides.assign(n, Side::plus);
    cls.cuts.assign(n, std::nullopt);

    // candidate cells: cells holding curve samples, plus their neighbors
    std::vector<char> candidate(n, 0);
    const double dx = mesh.domain.width() / mesh.nx;
    const double dy = mesh.domain.height() / mesh.ny;
    const int probe = std::max(4096, 32 * std::max(mesh.nx, mesh.ny));
    const Curve& curve = locator.curve();
    for (int i = 0; i <= probe; ++i) {
        const double xi = curve.xi_begin + curve.domain_length() * i / probe;
        const Vec2 p = curve.g(xi);
        const int ci = static_cast<int>(std::floor((p.x() - mesh.domain.x0) / dx));
        const int cj = static_cast<int>(std::floor((p.y() - mesh.domain.y0) / dy));
        for (int oj = -1; oj <= 1; ++oj)
            for (int oi = -1; oi <= 1; ++oi) {
                const int ei = ci + oi, ej = cj + oj;
                if (ei >= 0 && ei < mesh.nx && ej >= 0 && ej < mesh.ny)
                    candidate[ej * mesh.nx + ei] = 1;
            }
    }

    for (int e = 0; e < n; ++e) {
        const Rect& box = mesh.elements[e];
        if (!candidate[e]) {
            cls.sides[e] = locator.side(box.center());
            continue;
        }
        const double h = box.diameter();

        std::vector<BoundaryHit> hits;
        double walk_offset = 0.0;
        for (int s = 0; s < 4; ++s) {
            const Vec2 a = box.corner(s), b = box.corner(s + 1);
            for (double t : find_segment_cuts(a, b, locator)) {
                hits.push_back(BoundaryHit{a + t * (b - a), walk_offset + t * (b - a).norm()});
            }
            walk_offset += (b - a).norm();
        }

        // snap near-vertex intersections together (a vertex pass registers on
        // both incident edges)
        std::vector<BoundaryHit> unique_hits;
        for (const auto& hcand : hits) {
            bool dup = false;
            for (const auto& kept : unique_hits)
                if ((kept.x - hcand.x).norm() < 1e-12 * h ||
                    std::abs(kept.walk - hcand.walk) < 1e-12 * h) { dup = true; break; }
            // wrap-around duplicate at the walk seam
            if (!dup && !unique_hits.empty()) {
                if ((unique_hits.front().x - hcand.x).norm() < 1e-12 * h) dup = true;
            }
            if (!dup) unique_hits.push_back(hcand);
        }

        if (unique_hits.size() == 0 || unique_hits.size() == 1) {
            // no transversal crossing (a lone hit is a vertex touch)
            cls.sides[e] = locator.side(box.center());
            continue;
        }
        if (unique_hits.size() > 2)
            throw MeshError("classify_elements: element boundary meets the interface at more than 2 points; mesh too coarse");

        CutTopology cut;
        cut.element = e;
        cut.D = unique_hits[0].x;
        cut.E = unique_hits[1].x;
        cut.xi_D = closest_point_param(curve, cut.D);
        cut.xi_E = closest_point_param(curve, cut.E);
        cut.xi_E = curve.unwrap_near(cut.xi_E, cut.xi_D);
        if (cut.xi_D > cut.xi_E) {
            std::swap(cut.D, cut.E);
            std::swap(cut.xi_D, cut.xi_E);
        }

        // degenerate cut hugging a vertex: reclassify as non-interface
        if ((cut.E - cut.D).norm() < 1e-10 * h) {
            cls.sides[e] = locator.side(box.center());
            continue;
        }

        cls.tags[e] = ElementTag::interface;
        cls.cuts[e] = cut;
        ++cls.n_interface;
    }

    return cls;
}

FrenetChart fictitious_chart(const Rect& element, const Curve& curve,
                             const CutTopology* cut) {
    FrenetChart chart;
    chart.curve = &curve;
    chart.half_width = element.diameter();

    std::vector<double> xis;
    const double ref = cut ? 0.5 * (cut->xi_D + cut->xi_E)
                           : closest_point_param(curve, element.corner(0));
    for (int k = 0; k < 4; ++k) {
        double xi = closest_point_param(curve, element.corner(k));
        xis.push_back(curve.unwrap_near(xi, ref));
    }
    if (cut) {
        xis.push_back(curve.unwrap_near(cut->xi_D, ref));
        xis.push_back(curve.unwrap_near(cut->xi_E, ref));
    }
    chart.a = *std::min_element(xis.begin(), xis.end());
    chart.b = *std::max_element(xis.begin(), xis.end());
    if (!(chart.a < chart.b))
        throw GeometryError("fictitious_chart: empty parameter interval");

    if (!curve.periodic) {
        const double margin = 0.05 * curve.domain_length();
        if (chart.a < curve.xi_begin - margin || chart.b > curve.xi_end + margin)
            throw DomainError("fictitious_chart: chart interval leaves the curve domain");
        chart.a = std::max(chart.a, curve.xi_begin);
        chart.b = std::min(chart.b, curve.xi_end);
    }

    double kappa_max = 0.0;
    for (int i = 0; i <= 64; ++i) {
        const double xi = chart.a + (chart.b - chart.a) * i / 64.0;
        kappa_max = std::max(kappa_max, std::abs(frenet_apparatus(curve, xi).kappa));
    }
    chart.tube_ratio = chart.half_width * kappa_max;
    if (chart.tube_ratio >= 1.0)
        throw GeometryError("fictitious_chart: tube violation, diam(K) * max|kappa| >= 1");
    return chart;
}

void write_mesh_summary(std::ostream& os, const Mesh& mesh, const Classification& cls,
                        const std::vector<std::optional<FrenetChart>>& charts) {
    os << "element_id,tag,xi_D,xi_E,a_K,b_K\n";
    for (int e = 0; e < mesh.n_elements(); ++e) {
        if (cls.tags[e] == ElementTag::interface) {
            const CutTopology& cut = *cls.cuts[e];
            os << e << ",interface," << cut.xi_D << "," << cut.xi_E << ",";
            if (e < static_cast<int>(charts.size()) && charts[e])
                os << charts[e]->a << "," << charts[e]->b;
            else
                os << ",";
            os << "\n";
        } else {
            os << e << ",non-interface,,,,\n";
        }
    }
}

} // namespace fife
