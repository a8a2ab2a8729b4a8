#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crystalfold/quotient.hpp"

namespace crystalfold {

/// Neighborhood graph on an epsilon-net of the fundamental domain. Edges carry
/// the quotient distance between their endpoints (ambient distance when an
/// endpoint is a reflected copy added by mirror_augment). Every undirected
/// edge is stored twice, once per direction, in a fixed deterministic order.
struct OrbitGraph {
    struct Edge {
        int i = 0;
        int j = 0;
        double weight = 0.0;
    };
    std::vector<Eigen::VectorXd> vertices;
    std::vector<Edge> edges;
    double epsilon = 0.0;
    double delta = 0.0;
    /// Vertex pairs identified by a reflection: (original, reflected copy),
    /// or (i, i) for a vertex lying on the mirror itself. Empty unless the
    /// graph came from mirror_augment.
    std::vector<std::pair<int, int>> constraint_pairs;
};

/// Axis-aligned grid over the bounding box of the domain with per-axis spacing
/// at most epsilon/sqrt(n) (the extents are divided evenly so both box faces
/// carry grid planes; an axis shorter than the spacing degenerates to its
/// lower bound). Points are kept when inside the domain or within epsilon/4 of
/// its boundary, in which case near-boundary points are snapped onto the
/// boundary. Deduplicated and sorted lexicographically; covering is spot
/// checked with deterministic samples. Throws std::runtime_error when the net
/// comes out empty and std::invalid_argument for epsilon <= 0.
std::vector<Eigen::VectorXd> build_net(const ConvexPolytope& domain, double epsilon);

/// Quadrature weight (cell volume) for each vertex of build_net(domain,
/// epsilon), in the same order; a snapped vertex keeps the weight of the grid
/// cell it came from, and the weights are rescaled to sum exactly to the
/// domain volume.
std::vector<double> net_weights(const ConvexPolytope& domain, double epsilon);

/// Default neighborhood radius: 1.5 times the largest per-axis grid spacing of
/// the net for this epsilon.
double default_delta(const ConvexPolytope& domain, double epsilon);

/// Per-axis grid spacing of the net for this epsilon, 0.0 for an axis that
/// degenerated to a single plane.
std::vector<double> net_spacings(const ConvexPolytope& domain, double epsilon);

/// Connects every pair of net vertices at quotient distance strictly below
/// delta. Throws std::runtime_error when the result is disconnected.
OrbitGraph build_orbit_graph(const QuotientContext& ctx, double epsilon, double delta);

/// Same with delta = default_delta.
OrbitGraph build_orbit_graph(const QuotientContext& ctx, double epsilon);

/// Reflection handling: for every vertex within delta of a mirror facet adds
/// its reflected image as a new vertex and records the (original, image)
/// constraint pair; a vertex on the mirror itself records the pair (i, i) and
/// gains no copy. Edges touching a reflected copy use the ambient Euclidean
/// distance, so near-mirror vertices see their mirror-image neighborhood.
/// Returns the graph unchanged when the group has no reflections.
OrbitGraph mirror_augment(const QuotientContext& ctx, const OrbitGraph& graph);

}  // namespace crystalfold
