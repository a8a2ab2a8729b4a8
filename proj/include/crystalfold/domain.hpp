#pragma once

#include <optional>
#include <vector>

#include "crystalfold/group.hpp"

namespace crystalfold {

/// Grouping of the domain's faces into equivalence classes under the local
/// elements (face S ~ S' when some element maps S onto S' as a set). Each class
/// is represented by the face whose centroid is lexicographically smallest.
struct Transversal {
    std::vector<int> face_class;             ///< face id -> class index
    std::vector<int> representatives;        ///< class index -> face id
    std::vector<Isometry> to_representative; ///< face id -> element carrying the face
                                             ///< onto its representative (setwise)
};

Transversal compute_transversal(const ConvexPolytope& domain,
                                const std::vector<Isometry>& local);

/// Facet pairing structure: a facet is matched when some non-identity local
/// element maps it onto a facet of the domain as a set. A domain is exact when
/// every facet is matched.
struct FacetPairing {
    bool exact = false;
    std::vector<int> partner;      ///< facet id -> matched facet id, or -1
    std::vector<Isometry> map;     ///< facet id -> element with map(facet) = partner
};

FacetPairing facet_pairing(const ConvexPolytope& domain, const std::vector<Isometry>& local);

/// Convenience: enumerates the local elements and reports whether the group's
/// stored domain is exact.
bool is_exact(const CrystalGroup& group);

/// If phi maps `face` of the domain onto another face of the same dimension
/// (as a vertex set), returns that face's id.
std::optional<int> face_image(const ConvexPolytope& domain, int face_id, const Isometry& phi);

/// Dirichlet domain centered at a point with trivial stabilizer: all points at
/// least as close to `center` as to any other point of its orbit. Throws
/// std::invalid_argument when the stabilizer is nontrivial and std::logic_error
/// if the construction fails its own exactness check.
ConvexPolytope dirichlet_domain(const CrystalGroup& group, const Eigen::VectorXd& center);

/// Facets fixed pointwise by an orientation-reversing involution among the
/// local elements, each with its fixing reflection. `facet` indexes into
/// domain.faces().
struct MirrorFacet {
    int facet = -1;
    Isometry reflection;
};

std::vector<MirrorFacet> mirror_facets(const ConvexPolytope& domain,
                                       const std::vector<Isometry>& local);

}  // namespace crystalfold
