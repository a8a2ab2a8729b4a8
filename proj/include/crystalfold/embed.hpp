#pragma once

#include <vector>

#include "crystalfold/orbitgraph.hpp"
#include "crystalfold/quotient.hpp"

namespace crystalfold {

/// Output of classical multidimensional scaling on a squared-distance matrix.
struct MdsResult {
    int dimension = 0;               ///< selected embedding dimension
    Eigen::MatrixXd coordinates;     ///< one row per input point, `dimension` columns
    Eigen::VectorXd eigenvalues;     ///< full Gram spectrum, descending
    std::vector<double> stress_profile;  ///< relative stress at 1..max_dim columns
    double stress = 0.0;             ///< stress at the selected dimension
};

/// All-pairs graph geodesics, returned as a symmetric matrix of SQUARED path
/// lengths with zero diagonal (the input expected by classical_mds). Runs one
/// Dijkstra sweep per source, in parallel. Throws std::runtime_error when the
/// graph is disconnected.
Eigen::MatrixXd geodesic_distances(const OrbitGraph& graph);

/// Classical MDS: double-center -1/2 * H R H, take the top eigenpairs, and use
/// sqrt(eigenvalue)-scaled eigenvectors as coordinates. Columns are added in
/// descending eigenvalue order while the eigenvalue stays strictly positive.
/// The reported dimension is the smallest column count whose relative stress
///   || C - G ||_F / || G ||_F,   C = pairwise distances of the coordinates,
///                                G = elementwise sqrt of R,
/// drops to stress_tol or below; if no prefix reaches the tolerance, the
/// dimension minimising the stress is used instead (stress is not monotone:
/// extra chordal directions can overshoot geodesic targets). Throws
/// std::invalid_argument for a non-square, asymmetric, or nonzero-diagonal
/// input and std::runtime_error when no positive eigenvalue exists.
MdsResult classical_mds(const Eigen::MatrixXd& squared_distances, int max_dim = 10,
                        double stress_tol = 0.05);

/// An isometric-as-possible Euclidean picture of the quotient: net vertices
/// with their embedded coordinates, plus the diagnostics needed to judge it.
/// The context the embedding was actually built against is stored inside, so
/// evaluation does not depend on the caller keeping the original around (the
/// builder may swap the domain for a Dirichlet one, see build_embedding).
struct Embedding {
    int dimension = 0;                   ///< embedding dimension
    std::vector<Eigen::VectorXd> net;    ///< net vertices inside the domain
    Eigen::MatrixXd coordinates;         ///< |net| rows, `dimension` columns
    Eigen::VectorXd mds_eigenvalues;     ///< full Gram spectrum, descending
    std::vector<double> stress_profile;  ///< stress of the 1..10 column prefixes
    double stress = 0.0;                 ///< stress at `dimension`
    double gluing_residual = 0.0;        ///< max coordinate gap over glued vertex pairs
    double epsilon = 0.0;
    double delta = 0.0;
    bool rebased = false;                ///< domain was replaced by a Dirichlet cell
    int dimension_bound = 0;             ///< 2 * (n + largest vertex stabilizer)
    bool exceeds_bound = false;          ///< dimension >= dimension_bound
    QuotientContext context;             ///< context the net and metric live in
};

/// Builds the embedding for a group: net + orbit graph (mirror-augmented when
/// the group contains reflections), graph geodesics, classical MDS. When the
/// stored domain does not glue (some facet has no partner facet under the
/// group), the builder re-bases onto the Dirichlet domain of an interior point
/// near the centroid and flags `rebased`; pass keep_domain = true to embed the
/// stored domain as-is instead. delta <= 0 selects the default graph radius.
/// Throws std::logic_error if the selected dimension falls below the ambient
/// dimension.
Embedding build_embedding(const QuotientContext& ctx, double epsilon, double delta = 0.0,
                          double stress_tol = 0.05, bool keep_domain = false);

/// Evaluates the embedding map at an arbitrary point: x is projected onto its
/// canonical representative, then inverse-distance interpolation (power 2, up
/// to 8 nearest net vertices in the quotient metric) blends the stored
/// coordinates. Returns a stored row verbatim when x coincides with a net
/// vertex in the quotient, and is invariant under the group by construction.
Eigen::VectorXd rho(const Embedding& embedding, const Eigen::VectorXd& x);

/// Quality figures of an embedding measured against an orbit graph over the
/// same net: recomputed stress over the net vertices, the largest coordinate
/// gap across zero-length edges, the retained spectrum, and the fraction of
/// spectral mass the embedding had to discard as negative curvature.
struct DistortionReport {
    double stress = 0.0;
    double max_gluing_residual = 0.0;
    std::vector<double> eigenvalue_mass;  ///< retained (positive, descending)
    double negative_mass = 0.0;           ///< sum |negative| / sum |all|
};

DistortionReport embedding_distortion(const Embedding& embedding, const OrbitGraph& graph);

}  // namespace crystalfold
