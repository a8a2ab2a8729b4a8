#pragma once

#include <Eigen/Dense>
#include <vector>

namespace crystalfold {

/// Closed halfspace {x : normal.x <= offset} with unit normal.
struct Halfspace {
    Eigen::VectorXd normal;
    double offset = 0.0;
};

/// One face of a polytope. `vertex_ids` indexes into vertices(), sorted ascending.
/// `facet_set` lists the indices of every facet halfspace containing the face,
/// sorted ascending; it is empty for the full-dimensional face.
struct Face {
    int dimension = 0;
    std::vector<int> vertex_ids;
    std::vector<int> facet_set;
};

/// Bounded convex polytope in dimension 1, 2 or 3 with an explicit face lattice.
class ConvexPolytope {
  public:
    /// Empty placeholder; every meaningful instance comes from from_vertices or
    /// halfspace_intersection.
    ConvexPolytope() = default;

    /// Builds the convex hull of `points`. Non-extreme points are discarded.
    /// Throws std::invalid_argument if the hull is not full-dimensional or the
    /// dimension is outside 1..3.
    static ConvexPolytope from_vertices(const std::vector<Eigen::VectorXd>& points);

    const std::vector<Eigen::VectorXd>& vertices() const { return vertices_; }
    const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }

    /// Faces ordered by dimension: vertices first, the full face last.
    const std::vector<Face>& faces() const { return faces_; }

    int dimension() const { return dimension_; }
    double diameter() const { return diameter_; }
    double volume() const { return volume_; }
    const Eigen::VectorXd& centroid() const { return centroid_; }

    bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
    double distance_to(const Eigen::VectorXd& x) const;
    Eigen::VectorXd closest_point(const Eigen::VectorXd& x) const;

    /// Nearest point of the boundary; meaningful for interior points too.
    Eigen::VectorXd closest_boundary_point(const Eigen::VectorXd& x) const;
    double boundary_distance(const Eigen::VectorXd& x) const;

    /// Index into faces() of the unique face whose relative interior contains x,
    /// or -1 if x lies outside the polytope.
    int classify_face(const Eigen::VectorXd& x, double tol = 1e-7) const;

    Eigen::VectorXd face_centroid(int face_id) const;
    double face_distance(int face_id, const Eigen::VectorXd& x) const;

    /// 2D only: vertex indices in counterclockwise hull order.
    const std::vector<int>& hull_order() const { return hull_order_; }

    /// 3D only: per-facet vertex rings, aligned with halfspaces(), oriented
    /// counterclockwise as seen from outside.
    const std::vector<std::vector<int>>& facet_polygons() const { return facet_polygons_; }

  private:
    int dimension_ = 0;
    std::vector<Eigen::VectorXd> vertices_;
    std::vector<Halfspace> halfspaces_;
    std::vector<Face> faces_;
    std::vector<int> hull_order_;
    std::vector<std::vector<int>> facet_polygons_;
    double diameter_ = 0.0;
    double volume_ = 0.0;
    Eigen::VectorXd centroid_;
};

/// Intersection of closed halfspaces. Throws std::invalid_argument when the
/// intersection is empty or unbounded.
ConvexPolytope halfspace_intersection(const std::vector<Halfspace>& halfspaces);

/// Euclidean distance between two convex polytopes (0 when they touch or overlap).
double polytope_distance(const ConvexPolytope& a, const ConvexPolytope& b);

double point_segment_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b);
double segment_segment_distance(const Eigen::VectorXd& a0, const Eigen::VectorXd& a1,
                                const Eigen::VectorXd& b0, const Eigen::VectorXd& b1);

}  // namespace crystalfold
