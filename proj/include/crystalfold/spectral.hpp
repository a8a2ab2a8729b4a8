#pragma once

#include <functional>
#include <vector>

#include "crystalfold/embed.hpp"
#include "crystalfold/orbitgraph.hpp"
#include "crystalfold/quotient.hpp"

namespace crystalfold {

/// Dense weight and Laplacian matrices of an orbit graph: Gaussian affinities
/// W_ij = exp(-d^2 / (2 eps^2)) on the edges and the random-walk normalized
/// Laplacian L = I - D^{-1} W (rows of D^{-1} W sum to one).
struct GraphLaplacian {
    Eigen::MatrixXd weights;
    Eigen::MatrixXd laplacian;
};

/// Assembles the pair above. Throws std::runtime_error when a vertex has no
/// edges (zero degree).
GraphLaplacian laplacian(const OrbitGraph& graph);

enum class BasisMethod { spectral, galerkin };

/// An orthonormal family of invariant eigenfunctions of the quotient
/// Laplacian, sampled on a point set inside the fundamental domain. Both
/// construction routes fill the same structure:
///  - spectral: values live on the (merged) net vertices, weights are net cell
///    volumes, eigenvalues carry the calibrated physical scale;
///  - galerkin: values live on the quadrature nodes, weights are quadrature
///    weights, and coefficients / center_images / rbf_sigma describe the
///    radial-basis expansion for exact off-sample evaluation.
struct EigenBasis {
    BasisMethod method = BasisMethod::spectral;
    Eigen::VectorXd eigenvalues;             ///< ascending, units 1 / length^2
    std::vector<std::vector<int>> clusters;  ///< indices grouped within a 2% gap
    Eigen::MatrixXd values;                  ///< |sample_points| rows, k columns
    std::vector<Eigen::VectorXd> sample_points;
    Eigen::VectorXd sample_weights;          ///< discrete L2 masses, sum = vol(domain)
    Eigen::MatrixXd coefficients;            ///< centers x k (galerkin only)
    Eigen::MatrixXd center_images;           ///< embedded centers (galerkin only)
    double rbf_sigma = 0.0;                  ///< RBF width (galerkin only)
};

/// First k eigenfunctions from the orbit-graph route. Vertices identified by
/// zero-distance edges or by reflection constraint pairs are merged into one
/// unknown before assembly, so identified vertices carry equal values by
/// construction and reflected copies realize the mirror-image kernel. The raw
/// normalized-Laplacian eigenvalues are rescaled to physical units by the
/// second moment of the interior grid stencil (calibrated so the flat-torus
/// case reproduces (2 pi)^2 at second order). Values are expanded back onto
/// the original net vertices and normalized to unit discrete L2 norm against
/// the cell volumes. Throws std::invalid_argument when k is out of range.
EigenBasis eigenbasis_spectral(const QuotientContext& ctx, const OrbitGraph& graph, int k);

/// Evaluates basis function i (0-based) at an arbitrary point: x is projected
/// onto its canonical representative and the stored samples are blended by
/// inverse-distance weighting (power 2, up to 8 nearest sample points in the
/// quotient metric). Exact on sample points, invariant under the group.
double interpolate(const QuotientContext& ctx, const EigenBasis& basis, int i,
                   const Eigen::VectorXd& x);

/// All k interpolated values at once (one distance scan instead of k).
Eigen::VectorXd interpolate_all(const QuotientContext& ctx, const EigenBasis& basis,
                                const Eigen::VectorXd& x);

/// Nodes with positive weights summing to the domain volume.
struct Quadrature {
    std::vector<Eigen::VectorXd> nodes;
    Eigen::VectorXd weights;
};

/// Tensor-product cells over the bounding box clipped to the domain; each
/// surviving cell contributes its centroid as a node and its clipped volume
/// as the weight. Deterministic and refinable (double cells_per_axis to
/// refine). Throws std::invalid_argument for cells_per_axis < 1.
Quadrature make_quadrature(const ConvexPolytope& domain, int cells_per_axis);

/// Tensor grid of (i + 1/2) / per_axis points over the bounding box, filtered
/// to the domain interior. Used as default RBF center layout.
std::vector<Eigen::VectorXd> make_centers(const ConvexPolytope& domain, int per_axis);

/// Greedily drops centers whose embedded image lies within min_image_gap of an
/// already kept one (input order wins). Near rotation centers the embedding
/// compresses neighborhoods, so an even domain grid can produce next to
/// identical images; duplicate RBF columns make the Galerkin mass matrix
/// singular beyond its regularization.
std::vector<Eigen::VectorXd> prune_centers(const Embedding& embedding,
                                           const std::vector<Eigen::VectorXd>& centers,
                                           double min_image_gap);

/// Inputs of the variational route. Zero scalars select defaults at solve
/// time: rbf_width = 1.2 x median nearest-neighbor distance among the
/// embedded centers, gradient_step = 1e-4 x domain diameter.
struct GalerkinConfig {
    std::vector<Eigen::VectorXd> centers;
    double rbf_width = 0.0;
    Quadrature quadrature;
    double gradient_step = 0.0;
};

/// First k eigenfunctions from the variational route: invariant Gaussian
/// bumps chi_i(x) = exp(-|rho(x) - rho(c_i)|^2 / (2 sigma^2)) composed with
/// the embedding, stiffness A from central finite-difference gradients on the
/// quadrature grid, mass B from function values, and the generalized
/// symmetric eigenproblem A c = lambda B c (B regularized by +1e-10 I).
/// Eigenvalues are physical; eigenvectors come back B-orthonormal, i.e. unit
/// discrete L2 norm. Throws std::invalid_argument on config inconsistencies
/// (non-positive weights, weight sum far from the domain volume, k out of
/// range) and std::runtime_error when the solve fails.
EigenBasis eigenbasis_galerkin(const QuotientContext& ctx, const Embedding& embedding,
                               const GalerkinConfig& cfg, int k);

/// Exact evaluation of a galerkin basis function through its RBF expansion
/// (no interpolation error). Throws std::invalid_argument for a spectral
/// basis.
double galerkin_eval(const Embedding& embedding, const EigenBasis& basis, int i,
                     const Eigen::VectorXd& x);

/// Integral of the field against the outward unit normal over the domain
/// boundary (composite midpoint rule: 2000 subdivisions per edge in 2D,
/// 256 sub-triangles per fan triangle in 3D, endpoint evaluation in 1D).
/// Vanishes for fields with the gradient transformation law of an invariant
/// function; equals the integral of the divergence otherwise.
double boundary_flux(const QuotientContext& ctx,
                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field);

/// Companion magnitude integral over the boundary (for relative flux bounds).
double boundary_norm_integral(const QuotientContext& ctx,
                              const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field);

/// Max-abs deviation of the basis Gram matrix from the identity, computed
/// with the stored samples and weights.
double orthonormality_check(const EigenBasis& basis);

/// Deviation measured on the default independent quadrature (16 cells per
/// axis over the domain bounding box, clipped to the domain).
double orthonormality_check(const QuotientContext& ctx, const EigenBasis& basis);

/// Same deviation measured on an independent quadrature: basis functions are
/// re-evaluated at the given nodes by quotient-metric interpolation. Works
/// for both routes; refining the quadrature tightens the measurement.
double orthonormality_check(const QuotientContext& ctx, const EigenBasis& basis,
                            const Quadrature& quadrature);

/// Galerkin-exact variant of the independent-quadrature check: functions are
/// re-evaluated through their RBF expansion instead of interpolation.
double orthonormality_check(const Embedding& embedding, const EigenBasis& basis,
                            const Quadrature& quadrature);

}  // namespace crystalfold
