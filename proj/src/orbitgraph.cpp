#include "crystalfold/orbitgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "crystalfold/parallel.hpp"

namespace crystalfold {

namespace {

struct NetBuild {
    std::vector<Eigen::VectorXd> points;
    std::vector<double> weights;
    double max_spacing = 0.0;
};

uint64_t next_random(uint64_t& state) {
    state ^= state >> 12;
    state ^= state << 25;
    state ^= state >> 27;
    return state * 0x2545F4914F6CDD1DULL;
}

double uniform01(uint64_t& state) {
    return static_cast<double>(next_random(state) >> 11) * 0x1.0p-53;
}

/// Spot-check of the covering property: random points of the domain must lie
/// within epsilon of some net point.
void check_covering(const ConvexPolytope& domain, const std::vector<Eigen::VectorXd>& net,
                    double epsilon, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    const int n = domain.dimension();
    uint64_t state = 0x9E3779B97F4A7C15ULL;
    int accepted = 0;
    Eigen::VectorXd sample(n);
    for (int attempt = 0; attempt < 200000 && accepted < 50; ++attempt) {
        for (int d = 0; d < n; ++d) {
            sample(d) = lo(d) + (hi(d) - lo(d)) * uniform01(state);
        }
        if (!domain.contains(sample, 1e-12)) continue;
        ++accepted;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : net) best = std::min(best, (p - sample).norm());
        if (best > epsilon + 1e-12) {
            throw std::logic_error("build_net: covering check failed, a domain point is farther than epsilon from the net");
        }
    }
}

NetBuild build_net_impl(const ConvexPolytope& domain, double epsilon) {
    if (epsilon <= 0.0) {
        throw std::invalid_argument("build_net: epsilon must be positive");
    }
    const int n = domain.dimension();
    Eigen::VectorXd lo = domain.vertices().front();
    Eigen::VectorXd hi = lo;
    for (const auto& v : domain.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const double h = epsilon / std::sqrt(static_cast<double>(n));

    // Per-axis grid planes and the mass of the interval each plane represents.
    std::vector<std::vector<double>> coords(static_cast<size_t>(n));
    std::vector<std::vector<double>> masses(static_cast<size_t>(n));
    double max_spacing = 0.0;
    for (int d = 0; d < n; ++d) {
        const double extent = hi(d) - lo(d);
        auto& c = coords[static_cast<size_t>(d)];
        auto& w = masses[static_cast<size_t>(d)];
        if (extent <= h) {
            c = {lo(d)};
            w = {std::max(extent, 1e-12)};
            continue;
        }
        const int m = std::max(1, static_cast<int>(std::ceil(extent / h - 1e-9)));
        const double spacing = extent / m;
        max_spacing = std::max(max_spacing, spacing);
        for (int k = 0; k <= m; ++k) {
            c.push_back(k == m ? hi(d) : lo(d) + spacing * k);
            w.push_back((k == 0 || k == m) ? spacing / 2.0 : spacing);
        }
    }

    // Walk the tensor grid, keep points in or near the domain, snap the near
    // ones onto the boundary.
    std::vector<Eigen::VectorXd> raw_points;
    std::vector<double> raw_weights;
    std::vector<size_t> index(static_cast<size_t>(n), 0);
    Eigen::VectorXd p(n);
    const double snap_band = epsilon / 4.0;
    while (true) {
        double mass = 1.0;
        for (int d = 0; d < n; ++d) {
            p(d) = coords[static_cast<size_t>(d)][index[static_cast<size_t>(d)]];
            mass *= masses[static_cast<size_t>(d)][index[static_cast<size_t>(d)]];
        }
        bool keep = false;
        Eigen::VectorXd q = p;
        if (domain.contains(p, 1e-9)) {
            keep = true;
            if (domain.boundary_distance(p) <= snap_band) q = domain.closest_boundary_point(p);
        } else if (domain.distance_to(p) <= snap_band) {
            keep = true;
            q = domain.closest_point(p);
        }
        if (keep) {
            raw_points.push_back(q);
            raw_weights.push_back(mass);
        }
        int axis = n - 1;
        while (axis >= 0) {
            if (++index[static_cast<size_t>(axis)] < coords[static_cast<size_t>(axis)].size()) break;
            index[static_cast<size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    if (raw_points.empty()) {
        throw std::runtime_error("build_net: epsilon is too large, the net is empty");
    }

    // Deduplicate (snapping can land several grid points on one spot), summing
    // the masses, then order lexicographically.
    std::map<std::vector<int64_t>, size_t> seen;
    std::vector<Eigen::VectorXd> points;
    std::vector<double> weights;
    for (size_t i = 0; i < raw_points.size(); ++i) {
        std::vector<int64_t> key(static_cast<size_t>(n));
        for (int d = 0; d < n; ++d) {
            key[static_cast<size_t>(d)] = llround(raw_points[i](d) * 1e10);
        }
        auto [it, inserted] = seen.emplace(std::move(key), points.size());
        if (inserted) {
            points.push_back(raw_points[i]);
            weights.push_back(raw_weights[i]);
        } else {
            weights[it->second] += raw_weights[i];
        }
    }
    std::vector<size_t> order(points.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        for (int d = 0; d < n; ++d) {
            if (points[a](d) != points[b](d)) return points[a](d) < points[b](d);
        }
        return false;
    });

    NetBuild out;
    out.max_spacing = max_spacing > 0.0 ? max_spacing : epsilon;
    double total = 0.0;
    for (size_t i : order) {
        out.points.push_back(points[i]);
        out.weights.push_back(weights[i]);
        total += weights[i];
    }
    const double scale = domain.volume() / total;
    for (double& w : out.weights) w *= scale;

    check_covering(domain, out.points, epsilon, lo, hi);
    return out;
}

std::vector<std::vector<int>> adjacency(size_t vertex_count, const std::vector<OrbitGraph::Edge>& edges) {
    std::vector<std::vector<int>> adj(vertex_count);
    for (const auto& e : edges) adj[static_cast<size_t>(e.i)].push_back(e.j);
    return adj;
}

bool is_connected(size_t vertex_count, const std::vector<OrbitGraph::Edge>& edges) {
    if (vertex_count == 0) return true;
    const auto adj = adjacency(vertex_count, edges);
    std::vector<char> seen(vertex_count, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    size_t reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u : adj[static_cast<size_t>(v)]) {
            if (!seen[static_cast<size_t>(u)]) {
                seen[static_cast<size_t>(u)] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == vertex_count;
}

}  // namespace

std::vector<Eigen::VectorXd> build_net(const ConvexPolytope& domain, double epsilon) {
    return build_net_impl(domain, epsilon).points;
}

std::vector<double> net_weights(const ConvexPolytope& domain, double epsilon) {
    return build_net_impl(domain, epsilon).weights;
}

double default_delta(const ConvexPolytope& domain, double epsilon) {
    return 1.5 * build_net_impl(domain, epsilon).max_spacing;
}

std::vector<double> net_spacings(const ConvexPolytope& domain, double epsilon) {
    if (epsilon <= 0.0) {
        throw std::invalid_argument("net_spacings: epsilon must be positive");
    }
    const int n = domain.dimension();
    Eigen::VectorXd lo = domain.vertices().front();
    Eigen::VectorXd hi = lo;
    for (const auto& v : domain.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const double h = epsilon / std::sqrt(static_cast<double>(n));
    std::vector<double> spacings(static_cast<size_t>(n), 0.0);
    for (int d = 0; d < n; ++d) {
        const double extent = hi(d) - lo(d);
        if (extent <= h) continue;
        const int m = std::max(1, static_cast<int>(std::ceil(extent / h - 1e-9)));
        spacings[static_cast<size_t>(d)] = extent / m;
    }
    return spacings;
}

OrbitGraph build_orbit_graph(const QuotientContext& ctx, double epsilon, double delta) {
    if (delta <= 0.0) {
        throw std::invalid_argument("build_orbit_graph: delta must be positive");
    }
    OrbitGraph graph;
    graph.vertices = build_net(ctx.group.domain, epsilon);
    graph.epsilon = epsilon;
    graph.delta = delta;

    const size_t m = graph.vertices.size();
    std::vector<Eigen::VectorXd> proj(m);
    parallel_for(static_cast<std::ptrdiff_t>(m), [&](std::ptrdiff_t i) {
        proj[static_cast<size_t>(i)] = project(ctx, graph.vertices[static_cast<size_t>(i)]);
    });

    // Row j holds the neighbors i < j; quotient distance is the minimum over
    // the images of proj[j] under the local elements.
    std::vector<std::vector<std::pair<int, double>>> rows(m);
    parallel_for(static_cast<std::ptrdiff_t>(m), [&](std::ptrdiff_t jj) {
        const size_t j = static_cast<size_t>(jj);
        std::vector<Eigen::VectorXd> images;
        images.reserve(ctx.local.size());
        for (const auto& phi : ctx.local) images.push_back(apply(phi, proj[j]));
        for (size_t i = 0; i < j; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& img : images) {
                best = std::min(best, (proj[i] - img).norm());
            }
            if (best < delta) rows[j].emplace_back(static_cast<int>(i), best);
        }
    });
    for (size_t j = 0; j < m; ++j) {
        for (const auto& [i, d] : rows[j]) {
            graph.edges.push_back({i, static_cast<int>(j), d});
            graph.edges.push_back({static_cast<int>(j), i, d});
        }
    }

    if (!is_connected(m, graph.edges)) {
        throw std::runtime_error("build_orbit_graph: graph is disconnected at delta=" + std::to_string(delta) + "; increase delta");
    }
    return graph;
}

OrbitGraph build_orbit_graph(const QuotientContext& ctx, double epsilon) {
    return build_orbit_graph(ctx, epsilon, default_delta(ctx.group.domain, epsilon));
}

OrbitGraph mirror_augment(const QuotientContext& ctx, const OrbitGraph& graph) {
    if (!graph.constraint_pairs.empty()) {
        throw std::invalid_argument("mirror_augment: graph already carries constraint pairs");
    }
    const auto mirrors = mirror_facets(ctx.group.domain, ctx.local);
    if (mirrors.empty()) return graph;

    OrbitGraph out = graph;
    const size_t m = graph.vertices.size();
    for (size_t i = 0; i < m; ++i) {
        const Eigen::VectorXd& v = graph.vertices[i];
        bool on_mirror = false;
        for (const auto& mf : mirrors) {
            const double t = ctx.group.domain.face_distance(mf.facet, v);
            if (t <= 1e-9) {
                if (!on_mirror) {
                    out.constraint_pairs.emplace_back(static_cast<int>(i), static_cast<int>(i));
                    on_mirror = true;
                }
            } else if (t < graph.delta) {
                const int copy = static_cast<int>(out.vertices.size());
                out.vertices.push_back(apply(mf.reflection, v));
                out.constraint_pairs.emplace_back(static_cast<int>(i), copy);
            }
        }
    }

    // Edges touching a reflected copy use the ambient distance: the copies
    // exist to supply the mirror-image neighborhood, and under the quotient
    // metric they would collapse onto their originals.
    const size_t total = out.vertices.size();
    for (size_t a = 0; a < total; ++a) {
        for (size_t b = std::max(a + 1, m); b < total; ++b) {
            const double d = (out.vertices[a] - out.vertices[b]).norm();
            if (d < graph.delta) {
                out.edges.push_back({static_cast<int>(a), static_cast<int>(b), d});
                out.edges.push_back({static_cast<int>(b), static_cast<int>(a), d});
            }
        }
    }
    if (!is_connected(total, out.edges)) {
        throw std::runtime_error("mirror_augment: augmented graph is disconnected; increase delta");
    }
    return out;
}

}  // namespace crystalfold
