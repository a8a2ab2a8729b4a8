#include "crystalfold/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace crystalfold {

namespace {

using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

double coordinate_scale(const std::vector<VectorXd>& pts) {
    double s = 0.0;
    for (const auto& p : pts) s = std::max(s, p.array().abs().maxCoeff());
    return 1.0 + s;
}

std::vector<VectorXd> dedupe_points(const std::vector<VectorXd>& pts, double tol) {
    std::vector<VectorXd> out;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : out) {
            if ((p - q).norm() <= tol) {
                seen = true;
                break;
            }
        }
        if (!seen) out.push_back(p);
    }
    return out;
}

Vector3d as3(const VectorXd& v) { return Vector3d(v(0), v(1), v(2)); }

double cross2(const VectorXd& a, const VectorXd& b) { return a(0) * b(1) - a(1) * b(0); }

// Cyclic order of `ids` around the centroid of the given points within the plane
// spanned by (u, w).
std::vector<int> sort_cyclic(const std::vector<int>& ids, const std::vector<VectorXd>& pts,
                             const VectorXd& origin, const VectorXd& u, const VectorXd& w) {
    std::vector<std::pair<double, int>> keyed;
    keyed.reserve(ids.size());
    for (int id : ids) {
        const VectorXd r = pts[id] - origin;
        keyed.emplace_back(std::atan2(r.dot(w), r.dot(u)), id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> out;
    out.reserve(ids.size());
    for (const auto& [angle, id] : keyed) out.push_back(id);
    return out;
}

}  // namespace

ConvexPolytope ConvexPolytope::from_vertices(const std::vector<VectorXd>& points) {
    if (points.empty()) throw std::invalid_argument("polytope: no vertices given");
    const int n = static_cast<int>(points[0].size());
    if (n < 1 || n > 3) {
        throw std::invalid_argument("polytope: dimension " + std::to_string(n) +
                                    " unsupported (1, 2 or 3 required)");
    }
    for (const auto& p : points) {
        if (p.size() != n) throw std::invalid_argument("polytope: mixed vertex dimensions");
    }
    const double scale = coordinate_scale(points);
    std::vector<VectorXd> pts = dedupe_points(points, 1e-9 * scale);
    if (static_cast<int>(pts.size()) < n + 1) {
        throw std::invalid_argument("polytope: fewer than n+1 distinct vertices");
    }

    {
        MatrixXd rel(static_cast<int>(pts.size()) - 1, n);
        for (size_t i = 1; i < pts.size(); ++i) rel.row(static_cast<int>(i) - 1) = (pts[i] - pts[0]).transpose();
        Eigen::JacobiSVD<MatrixXd> svd(rel);
        if (svd.rank() < n || svd.singularValues()(n - 1) < 1e-9 * scale) {
            throw std::invalid_argument("polytope: vertex set is not full-dimensional");
        }
    }

    ConvexPolytope P;
    P.dimension_ = n;

    if (n == 1) {
        double lo = pts[0](0), hi = pts[0](0);
        for (const auto& p : pts) {
            lo = std::min(lo, p(0));
            hi = std::max(hi, p(0));
        }
        VectorXd vlo(1), vhi(1);
        vlo << lo;
        vhi << hi;
        P.vertices_ = {vlo, vhi};
        VectorXd plus(1), minus(1);
        plus << 1.0;
        minus << -1.0;
        P.halfspaces_ = {{plus, hi}, {minus, -lo}};
        P.faces_.push_back({0, {0}, {1}});
        P.faces_.push_back({0, {1}, {0}});
        P.faces_.push_back({1, {0, 1}, {}});
        P.hull_order_ = {0, 1};
        P.volume_ = hi - lo;
        P.centroid_ = VectorXd::Constant(1, 0.5 * (lo + hi));
        P.diameter_ = hi - lo;
        return P;
    }

    if (n == 2) {
        VectorXd mean = VectorXd::Zero(2);
        for (const auto& p : pts) mean += p;
        mean /= static_cast<double>(pts.size());
        std::vector<int> ring(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) ring[i] = static_cast<int>(i);
        std::sort(ring.begin(), ring.end(), [&](int a, int b) {
            const VectorXd ra = pts[a] - mean, rb = pts[b] - mean;
            return std::atan2(ra(1), ra(0)) < std::atan2(rb(1), rb(0));
        });
        // Peel off points that are not strict hull corners (collinear or interior).
        const double area_tol = 1e-9 * scale * scale;
        bool changed = true;
        while (changed && ring.size() > 3) {
            changed = false;
            for (size_t i = 0; i < ring.size(); ++i) {
                const VectorXd& prev = pts[ring[(i + ring.size() - 1) % ring.size()]];
                const VectorXd& cur = pts[ring[i]];
                const VectorXd& next = pts[ring[(i + 1) % ring.size()]];
                if (cross2(cur - prev, next - cur) <= area_tol) {
                    ring.erase(ring.begin() + static_cast<long>(i));
                    changed = true;
                    break;
                }
            }
        }
        const int V = static_cast<int>(ring.size());
        P.vertices_.reserve(V);
        for (int id : ring) P.vertices_.push_back(pts[id]);
        P.hull_order_.resize(V);
        for (int i = 0; i < V; ++i) P.hull_order_[i] = i;
        for (int i = 0; i < V; ++i) {
            const VectorXd& a = P.vertices_[i];
            const VectorXd& b = P.vertices_[(i + 1) % V];
            VectorXd d = b - a;
            VectorXd normal(2);
            normal << d(1), -d(0);
            normal.normalize();
            P.halfspaces_.push_back({normal, normal.dot(a)});
        }
        for (int i = 0; i < V; ++i) {
            std::vector<int> fs = {(i + V - 1) % V, i};
            std::sort(fs.begin(), fs.end());
            P.faces_.push_back({0, {i}, fs});
        }
        for (int i = 0; i < V; ++i) {
            std::vector<int> vs = {i, (i + 1) % V};
            std::sort(vs.begin(), vs.end());
            P.faces_.push_back({1, vs, {i}});
        }
        std::vector<int> all(V);
        for (int i = 0; i < V; ++i) all[i] = i;
        P.faces_.push_back({2, all, {}});

        double area2 = 0.0;
        VectorXd cen = VectorXd::Zero(2);
        for (int i = 0; i < V; ++i) {
            const VectorXd& a = P.vertices_[i];
            const VectorXd& b = P.vertices_[(i + 1) % V];
            const double w = cross2(a, b);
            area2 += w;
            cen += (a + b) * w;
        }
        P.volume_ = 0.5 * area2;
        if (P.volume_ <= 0) throw std::invalid_argument("polytope: degenerate 2D hull");
        P.centroid_ = cen / (6.0 * P.volume_);
    } else {
        // 3D: supporting planes by exhaustive triples.
        const double on_tol = 1e-7 * scale;
        const int m = static_cast<int>(pts.size());
        std::vector<Halfspace> planes;
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                for (int k = j + 1; k < m; ++k) {
                    Vector3d nrm =
                        (as3(pts[j]) - as3(pts[i])).cross(as3(pts[k]) - as3(pts[i]));
                    if (nrm.norm() < 1e-10 * scale * scale) continue;
                    nrm.normalize();
                    double off = nrm.dot(as3(pts[i]));
                    double lo = 0.0, hi = 0.0;
                    for (int t = 0; t < m; ++t) {
                        const double s = nrm.dot(as3(pts[t])) - off;
                        lo = std::min(lo, s);
                        hi = std::max(hi, s);
                    }
                    Halfspace h;
                    if (hi <= on_tol) {
                        h.normal = VectorXd(3);
                        h.normal << nrm(0), nrm(1), nrm(2);
                        h.offset = off;
                    } else if (lo >= -on_tol) {
                        h.normal = VectorXd(3);
                        h.normal << -nrm(0), -nrm(1), -nrm(2);
                        h.offset = -off;
                    } else {
                        continue;
                    }
                    bool dup = false;
                    for (const auto& e : planes) {
                        if ((e.normal - h.normal).norm() <= 1e-7 &&
                            std::abs(e.offset - h.offset) <= 1e-7 * scale) {
                            dup = true;
                            break;
                        }
                    }
                    if (!dup) planes.push_back(h);
                }
            }
        }
        // Keep only true corners: points lying on at least 3 supporting planes.
        std::vector<VectorXd> corners;
        for (const auto& p : pts) {
            int count = 0;
            for (const auto& h : planes) {
                if (std::abs(h.normal.dot(p) - h.offset) <= on_tol) ++count;
            }
            if (count >= 3) corners.push_back(p);
        }
        if (static_cast<int>(corners.size()) < 4) {
            throw std::invalid_argument("polytope: degenerate 3D hull");
        }
        P.vertices_ = corners;
        P.halfspaces_ = planes;
        const int V = static_cast<int>(corners.size());
        const int F = static_cast<int>(planes.size());

        P.facet_polygons_.resize(F);
        for (int f = 0; f < F; ++f) {
            std::vector<int> on;
            for (int v = 0; v < V; ++v) {
                if (std::abs(planes[f].normal.dot(corners[v]) - planes[f].offset) <= on_tol) {
                    on.push_back(v);
                }
            }
            if (static_cast<int>(on.size()) < 3) {
                throw std::invalid_argument("polytope: facet with fewer than 3 vertices");
            }
            VectorXd fc = VectorXd::Zero(3);
            for (int v : on) fc += corners[v];
            fc /= static_cast<double>(on.size());
            const Vector3d nrm = as3(planes[f].normal);
            Vector3d u = nrm.unitOrthogonal();
            Vector3d w = nrm.cross(u);
            VectorXd ue(3), we(3);
            ue << u(0), u(1), u(2);
            we << w(0), w(1), w(2);
            P.facet_polygons_[f] = sort_cyclic(on, corners, fc, ue, we);
            // Orient each polygon counterclockwise as seen from outside.
            const auto& poly = P.facet_polygons_[f];
            Vector3d newell = Vector3d::Zero();
            for (size_t i = 0; i < poly.size(); ++i) {
                const Vector3d a = as3(corners[poly[i]]);
                const Vector3d b = as3(corners[poly[(i + 1) % poly.size()]]);
                newell += a.cross(b);
            }
            if (newell.dot(nrm) < 0) {
                std::reverse(P.facet_polygons_[f].begin(), P.facet_polygons_[f].end());
            }
        }

        std::vector<std::vector<int>> vertex_facets(V);
        for (int f = 0; f < F; ++f) {
            for (int v : P.facet_polygons_[f]) vertex_facets[v].push_back(f);
        }
        for (int v = 0; v < V; ++v) {
            std::sort(vertex_facets[v].begin(), vertex_facets[v].end());
            P.faces_.push_back({0, {v}, vertex_facets[v]});
        }
        std::vector<Face> edges;
        for (int a = 0; a < V; ++a) {
            for (int b = a + 1; b < V; ++b) {
                std::vector<int> shared;
                std::set_intersection(vertex_facets[a].begin(), vertex_facets[a].end(),
                                      vertex_facets[b].begin(), vertex_facets[b].end(),
                                      std::back_inserter(shared));
                if (static_cast<int>(shared.size()) >= 2) {
                    edges.push_back({1, {a, b}, shared});
                }
            }
        }
        for (auto& e : edges) P.faces_.push_back(std::move(e));
        for (int f = 0; f < F; ++f) {
            std::vector<int> vs = P.facet_polygons_[f];
            std::sort(vs.begin(), vs.end());
            P.faces_.push_back({2, vs, {f}});
        }
        std::vector<int> all(V);
        for (int v = 0; v < V; ++v) all[v] = v;
        P.faces_.push_back({3, all, {}});

        const int E = static_cast<int>(edges.size());
        if (V - E + F != 2) {
            throw std::logic_error("polytope: Euler relation violated (V-E+F = " +
                                   std::to_string(V - E + F) + ")");
        }

        VectorXd apex = VectorXd::Zero(3);
        for (const auto& c : corners) apex += c;
        apex /= static_cast<double>(V);
        double vol = 0.0;
        Vector3d cen = Vector3d::Zero();
        for (int f = 0; f < F; ++f) {
            const auto& poly = P.facet_polygons_[f];
            const Vector3d p0 = as3(corners[poly[0]]);
            for (size_t i = 1; i + 1 < poly.size(); ++i) {
                const Vector3d p1 = as3(corners[poly[i]]);
                const Vector3d p2 = as3(corners[poly[i + 1]]);
                const Vector3d a = p0 - as3(apex), b = p1 - as3(apex), c = p2 - as3(apex);
                const double w = a.dot(b.cross(c)) / 6.0;
                vol += w;
                cen += w * (as3(apex) + p0 + p1 + p2) / 4.0;
            }
        }
        if (vol <= 0) throw std::invalid_argument("polytope: nonpositive 3D volume");
        P.volume_ = vol;
        P.centroid_ = VectorXd(3);
        P.centroid_ << cen(0) / vol, cen(1) / vol, cen(2) / vol;
    }

    double diam = 0.0;
    for (size_t i = 0; i < P.vertices_.size(); ++i) {
        for (size_t j = i + 1; j < P.vertices_.size(); ++j) {
            diam = std::max(diam, (P.vertices_[i] - P.vertices_[j]).norm());
        }
    }
    P.diameter_ = diam;

    for (const auto& v : P.vertices_) {
        for (const auto& h : P.halfspaces_) {
            if (h.normal.dot(v) - h.offset > 1e-9 * scale) {
                throw std::logic_error("polytope: vertex violates its own halfspace");
            }
        }
    }
    return P;
}

bool ConvexPolytope::contains(const VectorXd& x, double tol) const {
    for (const auto& h : halfspaces_) {
        if (h.normal.dot(x) - h.offset > tol) return false;
    }
    return true;
}

double ConvexPolytope::face_distance(int face_id, const VectorXd& x) const {
    const Face& f = faces_.at(static_cast<size_t>(face_id));
    if (f.dimension == 0) return (x - vertices_[f.vertex_ids[0]]).norm();
    if (f.dimension == 1) {
        return point_segment_distance(x, vertices_[f.vertex_ids[0]], vertices_[f.vertex_ids[1]]);
    }
    if (f.dimension == 2 && dimension_ == 3) {
        const int fid = f.facet_set[0];
        const auto& poly = facet_polygons_[fid];
        const VectorXd& nrm = halfspaces_[fid].normal;
        const double plane_d = nrm.dot(x) - halfspaces_[fid].offset;
        const VectorXd proj = x - plane_d * nrm;
        bool inside = true;
        for (size_t i = 0; i < poly.size(); ++i) {
            const Vector3d a = as3(vertices_[poly[i]]);
            const Vector3d b = as3(vertices_[poly[(i + 1) % poly.size()]]);
            const Vector3d edge_in = as3(nrm).cross(b - a);
            if (edge_in.dot(as3(proj) - a) < -1e-12) {
                inside = false;
                break;
            }
        }
        if (inside) return std::abs(plane_d);
        double best = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < poly.size(); ++i) {
            best = std::min(best, point_segment_distance(x, vertices_[poly[i]],
                                                         vertices_[poly[(i + 1) % poly.size()]]));
        }
        return best;
    }
    // Full face.
    return distance_to(x);
}

double ConvexPolytope::distance_to(const VectorXd& x) const {
    if (contains(x, 1e-12)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < faces_.size(); ++i) {
        if (faces_[i].dimension == dimension_ - 1) {
            best = std::min(best, face_distance(static_cast<int>(i), x));
        }
    }
    return best;
}

Eigen::VectorXd ConvexPolytope::closest_point(const VectorXd& x) const {
    if (contains(x, 1e-12)) return x;
    return closest_boundary_point(x);
}

Eigen::VectorXd ConvexPolytope::closest_boundary_point(const VectorXd& x) const {
    double best = std::numeric_limits<double>::infinity();
    VectorXd arg = vertices_[0];
    if (dimension_ == 1) {
        for (const auto& v : vertices_) {
            const double d = (x - v).norm();
            if (d < best) {
                best = d;
                arg = v;
            }
        }
        return arg;
    }
    if (dimension_ == 2) {
        const int V = static_cast<int>(vertices_.size());
        for (int i = 0; i < V; ++i) {
            const VectorXd& a = vertices_[i];
            const VectorXd& b = vertices_[(i + 1) % V];
            const VectorXd d = b - a;
            const double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
            const VectorXd p = a + t * d;
            const double dist = (x - p).norm();
            if (dist < best) {
                best = dist;
                arg = p;
            }
        }
        return arg;
    }
    for (int f = 0; f < static_cast<int>(halfspaces_.size()); ++f) {
        const auto& poly = facet_polygons_[f];
        const VectorXd& nrm = halfspaces_[f].normal;
        const double plane_d = nrm.dot(x) - halfspaces_[f].offset;
        VectorXd proj = x - plane_d * nrm;
        bool inside = true;
        for (size_t i = 0; i < poly.size(); ++i) {
            const Vector3d a = as3(vertices_[poly[i]]);
            const Vector3d b = as3(vertices_[poly[(i + 1) % poly.size()]]);
            if (as3(nrm).cross(b - a).dot(as3(proj) - a) < -1e-12) {
                inside = false;
                break;
            }
        }
        if (inside) {
            const double dist = std::abs(plane_d);
            if (dist < best) {
                best = dist;
                arg = proj;
            }
            continue;
        }
        for (size_t i = 0; i < poly.size(); ++i) {
            const VectorXd& a = vertices_[poly[i]];
            const VectorXd& b = vertices_[poly[(i + 1) % poly.size()]];
            const VectorXd d = b - a;
            const double t = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
            const VectorXd p = a + t * d;
            const double dist = (x - p).norm();
            if (dist < best) {
                best = dist;
                arg = p;
            }
        }
    }
    return arg;
}

double ConvexPolytope::boundary_distance(const VectorXd& x) const {
    return (x - closest_boundary_point(x)).norm();
}

int ConvexPolytope::classify_face(const VectorXd& x, double tol) const {
    std::vector<int> active;
    for (int i = 0; i < static_cast<int>(halfspaces_.size()); ++i) {
        const double s = halfspaces_[i].normal.dot(x) - halfspaces_[i].offset;
        if (s > tol) return -1;
        if (s >= -tol) active.push_back(i);
    }
    for (size_t i = 0; i < faces_.size(); ++i) {
        if (faces_[i].facet_set == active) return static_cast<int>(i);
    }
    // Tolerance placed x on a facet combination that is not itself a face; fall back to
    // the deepest face compatible with the active set.
    int best = static_cast<int>(faces_.size()) - 1;
    size_t best_count = 0;
    for (size_t i = 0; i < faces_.size(); ++i) {
        const auto& fs = faces_[i].facet_set;
        if (std::includes(active.begin(), active.end(), fs.begin(), fs.end()) &&
            fs.size() >= best_count && !fs.empty()) {
            best_count = fs.size();
            best = static_cast<int>(i);
        }
    }
    return best;
}

Eigen::VectorXd ConvexPolytope::face_centroid(int face_id) const {
    const Face& f = faces_.at(static_cast<size_t>(face_id));
    VectorXd c = VectorXd::Zero(dimension_);
    for (int v : f.vertex_ids) c += vertices_[v];
    return c / static_cast<double>(f.vertex_ids.size());
}

ConvexPolytope halfspace_intersection(const std::vector<Halfspace>& input) {
    if (input.empty()) throw std::invalid_argument("halfspace_intersection: no halfspaces");
    const int n = static_cast<int>(input[0].normal.size());
    if (n < 1 || n > 3) throw std::invalid_argument("halfspace_intersection: dimension unsupported");
    std::vector<Halfspace> hs;
    hs.reserve(input.size());
    double scale = 1.0;
    for (const auto& h : input) {
        if (h.normal.size() != n) {
            throw std::invalid_argument("halfspace_intersection: mixed dimensions");
        }
        const double len = h.normal.norm();
        if (len < 1e-12) throw std::invalid_argument("halfspace_intersection: zero normal");
        hs.push_back({h.normal / len, h.offset / len});
        scale = std::max(scale, std::abs(h.offset / len));
    }
    const int m = static_cast<int>(hs.size());

    // Boundedness: the recession cone {d : normal.d <= 0 for all halfspaces} must be
    // trivial, i.e. the normals must positively span the space.
    auto recession = [&](const VectorXd& d) {
        if (d.norm() < 1e-9) return false;
        const VectorXd u = d.normalized();
        for (const auto& h : hs) {
            if (h.normal.dot(u) > 1e-9) return false;
        }
        return true;
    };
    if (n == 1) {
        bool pos = false, neg = false;
        for (const auto& h : hs) {
            if (h.normal(0) > 0) pos = true;
            if (h.normal(0) < 0) neg = true;
        }
        if (!pos || !neg) throw std::invalid_argument("halfspace_intersection: unbounded");
    } else if (n == 2) {
        std::vector<double> angles;
        for (const auto& h : hs) angles.push_back(std::atan2(h.normal(1), h.normal(0)));
        std::sort(angles.begin(), angles.end());
        double max_gap = angles.front() + 2.0 * M_PI - angles.back();
        for (size_t i = 1; i < angles.size(); ++i) {
            max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
        }
        if (max_gap >= M_PI - 1e-9) {
            throw std::invalid_argument("halfspace_intersection: unbounded");
        }
    } else {
        std::vector<VectorXd> candidates;
        for (int i = 0; i < m; ++i) candidates.push_back(-hs[i].normal);
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                const Vector3d c = as3(hs[i].normal).cross(as3(hs[j].normal));
                if (c.norm() < 1e-10) continue;
                VectorXd d(3);
                d << c(0), c(1), c(2);
                candidates.push_back(d);
                candidates.push_back(-d);
            }
        }
        MatrixXd N(m, 3);
        for (int i = 0; i < m; ++i) N.row(i) = hs[i].normal.transpose();
        Eigen::JacobiSVD<MatrixXd> svd(N, Eigen::ComputeFullV);
        for (int c = 0; c < 3; ++c) {
            if (c >= svd.nonzeroSingularValues() || svd.singularValues()(c) < 1e-9) {
                candidates.push_back(svd.matrixV().col(c));
                candidates.push_back(-svd.matrixV().col(c));
            }
        }
        for (const auto& d : candidates) {
            if (recession(d)) throw std::invalid_argument("halfspace_intersection: unbounded");
        }
    }

    std::vector<VectorXd> verts;
    std::vector<int> idx(n);
    auto try_subset = [&](const std::vector<int>& sel) {
        MatrixXd A(n, n);
        VectorXd b(n);
        for (int r = 0; r < n; ++r) {
            A.row(r) = hs[sel[r]].normal.transpose();
            b(r) = hs[sel[r]].offset;
        }
        Eigen::FullPivLU<MatrixXd> lu(A);
        lu.setThreshold(1e-9);
        if (lu.rank() < n) return;
        const VectorXd y = lu.solve(b);
        const double feas_tol = 1e-9 * (scale + y.norm());
        for (const auto& h : hs) {
            if (h.normal.dot(y) - h.offset > feas_tol) return;
        }
        for (const auto& v : verts) {
            if ((v - y).norm() <= 1e-8 * (1.0 + y.norm())) return;
        }
        verts.push_back(y);
    };
    if (n == 1) {
        for (int i = 0; i < m; ++i) try_subset({i});
    } else if (n == 2) {
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) try_subset({i, j});
        }
    } else {
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                for (int k = j + 1; k < m; ++k) try_subset({i, j, k});
            }
        }
    }
    if (verts.empty()) throw std::invalid_argument("halfspace_intersection: empty intersection");
    return ConvexPolytope::from_vertices(verts);
}

double point_segment_distance(const VectorXd& x, const VectorXd& a, const VectorXd& b) {
    const VectorXd d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 < 1e-24) return (x - a).norm();
    const double t = std::clamp((x - a).dot(d) / len2, 0.0, 1.0);
    return (x - (a + t * d)).norm();
}

double segment_segment_distance(const VectorXd& a0, const VectorXd& a1, const VectorXd& b0,
                                const VectorXd& b1) {
    const VectorXd u = a1 - a0;
    const VectorXd v = b1 - b0;
    const VectorXd w = a0 - b0;
    const double A = u.dot(u), B = u.dot(v), C = v.dot(v), D = u.dot(w), E = v.dot(w);
    const double den = A * C - B * B;
    double s = 0.0, t = 0.0;
    if (den > 1e-18) s = std::clamp((B * E - C * D) / den, 0.0, 1.0);
    if (C > 1e-18) t = std::clamp((B * s + E) / C, 0.0, 1.0);
    if (A > 1e-18) s = std::clamp((B * t - D) / A, 0.0, 1.0);
    return ((a0 + s * u) - (b0 + t * v)).norm();
}

namespace {

bool segments_cross_2d(const VectorXd& a0, const VectorXd& a1, const VectorXd& b0,
                       const VectorXd& b1) {
    auto orient = [](const VectorXd& p, const VectorXd& q, const VectorXd& r) {
        const double v = (q(0) - p(0)) * (r(1) - p(1)) - (q(1) - p(1)) * (r(0) - p(0));
        if (v > 1e-14) return 1;
        if (v < -1e-14) return -1;
        return 0;
    };
    const int o1 = orient(a0, a1, b0), o2 = orient(a0, a1, b1);
    const int o3 = orient(b0, b1, a0), o4 = orient(b0, b1, a1);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

bool segment_pierces_facet(const ConvexPolytope& poly, int f, const VectorXd& a,
                           const VectorXd& b) {
    const auto& h = poly.halfspaces()[f];
    const double sa = h.normal.dot(a) - h.offset;
    const double sb = h.normal.dot(b) - h.offset;
    if (sa * sb > 0 || std::abs(sa - sb) < 1e-15) return false;
    const double t = sa / (sa - sb);
    const VectorXd p = a + t * (b - a);
    const auto& ring = poly.facet_polygons()[f];
    for (size_t i = 0; i < ring.size(); ++i) {
        const Vector3d va = as3(poly.vertices()[ring[i]]);
        const Vector3d vb = as3(poly.vertices()[ring[(i + 1) % ring.size()]]);
        if (as3(h.normal).cross(vb - va).dot(as3(p) - va) < -1e-12) return false;
    }
    return true;
}

std::vector<std::pair<int, int>> edge_list(const ConvexPolytope& P) {
    std::vector<std::pair<int, int>> out;
    for (const auto& f : P.faces()) {
        if (f.dimension == 1) out.emplace_back(f.vertex_ids[0], f.vertex_ids[1]);
    }
    return out;
}

}  // namespace

double polytope_distance(const ConvexPolytope& a, const ConvexPolytope& b) {
    for (const auto& v : a.vertices()) {
        if (b.contains(v, 1e-12)) return 0.0;
    }
    for (const auto& v : b.vertices()) {
        if (a.contains(v, 1e-12)) return 0.0;
    }
    const int n = a.dimension();
    if (n == 2) {
        const auto ea = edge_list(a), eb = edge_list(b);
        for (const auto& [i, j] : ea) {
            for (const auto& [k, l] : eb) {
                if (segments_cross_2d(a.vertices()[i], a.vertices()[j], b.vertices()[k],
                                      b.vertices()[l])) {
                    return 0.0;
                }
            }
        }
    }
    if (n == 3) {
        const auto ea = edge_list(a), eb = edge_list(b);
        for (const auto& [i, j] : ea) {
            for (int f = 0; f < static_cast<int>(b.halfspaces().size()); ++f) {
                if (segment_pierces_facet(b, f, a.vertices()[i], a.vertices()[j])) return 0.0;
            }
        }
        for (const auto& [i, j] : eb) {
            for (int f = 0; f < static_cast<int>(a.halfspaces().size()); ++f) {
                if (segment_pierces_facet(a, f, b.vertices()[i], b.vertices()[j])) return 0.0;
            }
        }
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : a.vertices()) best = std::min(best, b.distance_to(v));
    for (const auto& v : b.vertices()) best = std::min(best, a.distance_to(v));
    if (n == 3) {
        const auto ea = edge_list(a), eb = edge_list(b);
        for (const auto& [i, j] : ea) {
            for (const auto& [k, l] : eb) {
                best = std::min(best, segment_segment_distance(a.vertices()[i], a.vertices()[j],
                                                               b.vertices()[k], b.vertices()[l]));
            }
        }
    }
    return best;
}

}  // namespace crystalfold
