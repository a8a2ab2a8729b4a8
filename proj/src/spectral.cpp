#include "crystalfold/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crystalfold/parallel.hpp"

namespace crystalfold {

namespace {

double edge_affinity(double distance, double epsilon) {
    return std::exp(-distance * distance / (2.0 * epsilon * epsilon));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int count) : parent(static_cast<size_t>(count)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

/// Physical scale of the raw normalized-Laplacian eigenvalues: on an ideal
/// interior grid stencil (all lattice offsets shorter than delta, Gaussian
/// weights) a plane wave exp(i xi . x) has raw eigenvalue
///   1 - sum_o w_o cos(xi . o) / sum_o w_o ~ |xi|^2 * mean_d(q_d) / (2 sum w)
/// with q_d the weighted second moment along axis d, so multiplying by
///   C = 2 sum_o w_o / mean_d(q_d)
/// recovers |xi|^2 to second order.
double stencil_scale(const ConvexPolytope& domain, double epsilon, double delta) {
    const std::vector<double> spacing = net_spacings(domain, epsilon);
    const int n = domain.dimension();
    std::vector<int> axes;
    for (int d = 0; d < n; ++d) {
        if (spacing[static_cast<size_t>(d)] > 0.0) axes.push_back(d);
    }
    if (axes.empty()) {
        throw std::runtime_error("eigenbasis_spectral: net degenerated to a single point");
    }

    std::vector<int> radius(axes.size());
    for (size_t a = 0; a < axes.size(); ++a) {
        radius[a] = static_cast<int>(std::floor(delta / spacing[static_cast<size_t>(axes[a])])) + 1;
    }
    double weight_sum = 0.0;
    Eigen::VectorXd moments = Eigen::VectorXd::Zero(static_cast<int>(axes.size()));
    std::vector<int> counter(axes.size(), 0);
    for (size_t a = 0; a < axes.size(); ++a) counter[a] = -radius[a];
    while (true) {
        bool all_zero = true;
        double norm2 = 0.0;
        for (size_t a = 0; a < axes.size(); ++a) {
            const double o = counter[a] * spacing[static_cast<size_t>(axes[a])];
            norm2 += o * o;
            all_zero = all_zero && counter[a] == 0;
        }
        if (!all_zero && std::sqrt(norm2) < delta) {
            const double w = edge_affinity(std::sqrt(norm2), epsilon);
            weight_sum += w;
            for (size_t a = 0; a < axes.size(); ++a) {
                const double o = counter[a] * spacing[static_cast<size_t>(axes[a])];
                moments(static_cast<int>(a)) += w * o * o;
            }
        }
        size_t a = 0;
        while (a < axes.size() && counter[a] == radius[a]) {
            counter[a] = -radius[a];
            ++a;
        }
        if (a == axes.size()) break;
        ++counter[a];
    }
    const double mean_moment = moments.mean();
    if (weight_sum <= 0.0 || mean_moment <= 0.0) {
        throw std::runtime_error("eigenbasis_spectral: no interior stencil offsets below delta");
    }
    return 2.0 * weight_sum / mean_moment;
}

std::vector<std::vector<int>> cluster_eigenvalues(const Eigen::VectorXd& values) {
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < values.size(); ++i) {
        if (i == 0 || values(i) > values(i - 1) * 1.02 + 1e-9) {
            clusters.emplace_back();
        }
        clusters.back().push_back(i);
    }
    return clusters;
}

void fix_signs(Eigen::MatrixXd& values, Eigen::MatrixXd* coefficients) {
    for (int c = 0; c < values.cols(); ++c) {
        int lead = 0;
        for (int r = 1; r < values.rows(); ++r) {
            if (std::abs(values(r, c)) > std::abs(values(lead, c))) lead = r;
        }
        if (values(lead, c) < 0.0) {
            values.col(c) *= -1.0;
            if (coefficients != nullptr) coefficients->col(c) *= -1.0;
        }
    }
}

}  // namespace

GraphLaplacian laplacian(const OrbitGraph& graph) {
    const int m = static_cast<int>(graph.vertices.size());
    if (m == 0) throw std::invalid_argument("laplacian: graph has no vertices");
    GraphLaplacian out;
    out.weights = Eigen::MatrixXd::Zero(m, m);
    for (const OrbitGraph::Edge& e : graph.edges) {
        out.weights(e.i, e.j) = edge_affinity(e.weight, graph.epsilon);
    }
    const Eigen::VectorXd degree = out.weights.rowwise().sum();
    if (degree.minCoeff() <= 0.0) {
        throw std::runtime_error("laplacian: graph has an isolated vertex");
    }
    out.laplacian = Eigen::MatrixXd::Identity(m, m) - degree.cwiseInverse().asDiagonal() * out.weights;
    return out;
}

EigenBasis eigenbasis_spectral(const QuotientContext& ctx, const OrbitGraph& graph, int k) {
    const int m = static_cast<int>(graph.vertices.size());
    if (m == 0) throw std::invalid_argument("eigenbasis_spectral: graph has no vertices");
    const std::vector<double> cell = net_weights(ctx.group.domain, graph.epsilon);
    const int m_orig = static_cast<int>(cell.size());
    if (m_orig > m) {
        throw std::invalid_argument("eigenbasis_spectral: graph does not match the context net");
    }

    // Identified vertices (zero-distance boundary twins and reflected copies)
    // become one unknown; summing their edge affinities realizes the glued or
    // mirror-image kernel, and the per-row normalization absorbs the doubled
    // degree of vertices whose reflected copy is present.
    UnionFind uf(m);
    for (const auto& [a, b] : graph.constraint_pairs) uf.unite(a, b);
    for (const OrbitGraph::Edge& e : graph.edges) {
        if (e.weight <= 1e-12) uf.unite(e.i, e.j);
    }
    std::vector<int> cls(static_cast<size_t>(m), -1);
    int classes = 0;
    for (int i = 0; i < m; ++i) {
        const int root = uf.find(i);
        if (cls[static_cast<size_t>(root)] < 0) cls[static_cast<size_t>(root)] = classes++;
        cls[static_cast<size_t>(i)] = cls[static_cast<size_t>(root)];
    }
    if (k < 1 || k > classes) {
        std::ostringstream msg;
        msg << "eigenbasis_spectral: k = " << k << " out of range, have " << classes
            << " merged vertices";
        throw std::invalid_argument(msg.str());
    }

    // Accumulate edge affinities between merged vertices. Parallel edges at
    // the same distance are one quotient edge seen through several copies
    // (seam twins see each neighbor once per copy) and are counted once;
    // parallel edges at distinct distances are genuine image contributions
    // (a reflected copy at a different ambient distance) and are summed.
    std::map<std::pair<int, int>, std::vector<double>> pair_distances;
    for (const OrbitGraph::Edge& e : graph.edges) {
        const int a = cls[static_cast<size_t>(e.i)];
        const int b = cls[static_cast<size_t>(e.j)];
        if (a == b) continue;
        pair_distances[{a, b}].push_back(e.weight);
    }
    Eigen::MatrixXd affinity = Eigen::MatrixXd::Zero(classes, classes);
    for (auto& [key, distances] : pair_distances) {
        std::sort(distances.begin(), distances.end());
        double sum = 0.0;
        double last = -1.0;
        for (const double d : distances) {
            if (d > last + 1e-9) {
                sum += edge_affinity(d, graph.epsilon);
                last = d;
            }
        }
        affinity(key.first, key.second) = sum;
    }
    const Eigen::VectorXd degree = affinity.rowwise().sum();
    if (degree.minCoeff() <= 0.0) {
        throw std::runtime_error("eigenbasis_spectral: a merged vertex has no neighbors");
    }

    const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd sym = Eigen::MatrixXd::Identity(classes, classes) -
                          inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal();
    sym = 0.5 * (sym + sym.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenbasis_spectral: eigendecomposition failed");
    }

    const double scale = stencil_scale(ctx.group.domain, graph.epsilon, graph.delta);

    EigenBasis basis;
    basis.method = BasisMethod::spectral;
    basis.eigenvalues = scale * solver.eigenvalues().head(k);
    basis.values.resize(m_orig, k);
    for (int col = 0; col < k; ++col) {
        // Undo the symmetrizing similarity, expand classes onto the original
        // vertices, and normalize against the cell volumes.
        Eigen::VectorXd e = inv_sqrt.cwiseProduct(solver.eigenvectors().col(col));
        double norm2 = 0.0;
        for (int i = 0; i < m_orig; ++i) {
            const double v = e(cls[static_cast<size_t>(i)]);
            basis.values(i, col) = v;
            norm2 += cell[static_cast<size_t>(i)] * v * v;
        }
        basis.values.col(col) /= std::sqrt(norm2);
    }
    fix_signs(basis.values, nullptr);

    basis.sample_points.assign(graph.vertices.begin(), graph.vertices.begin() + m_orig);
    basis.sample_weights = Eigen::Map<const Eigen::VectorXd>(cell.data(), m_orig);
    basis.clusters = cluster_eigenvalues(basis.eigenvalues);
    return basis;
}

namespace {

Eigen::VectorXd idw_blend(const QuotientContext& ctx, const EigenBasis& basis,
                          const Eigen::VectorXd& x) {
    const int m = static_cast<int>(basis.sample_points.size());
    const Eigen::VectorXd p = project(ctx, x);
    std::vector<std::pair<double, int>> dist(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double d = quotient_distance(ctx, p, basis.sample_points[static_cast<size_t>(i)]);
        if (d <= 1e-12) return basis.values.row(i);
        dist[static_cast<size_t>(i)] = {d, i};
    }
    const int k = std::min(8, m);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    Eigen::VectorXd value = Eigen::VectorXd::Zero(basis.values.cols());
    double weight_sum = 0.0;
    for (int a = 0; a < k; ++a) {
        const double w = 1.0 / (dist[static_cast<size_t>(a)].first * dist[static_cast<size_t>(a)].first);
        value += w * basis.values.row(dist[static_cast<size_t>(a)].second).transpose();
        weight_sum += w;
    }
    return value / weight_sum;
}

}  // namespace

Eigen::VectorXd interpolate_all(const QuotientContext& ctx, const EigenBasis& basis,
                                const Eigen::VectorXd& x) {
    if (basis.sample_points.empty()) {
        throw std::invalid_argument("interpolate: basis has no samples");
    }
    return idw_blend(ctx, basis, x);
}

double interpolate(const QuotientContext& ctx, const EigenBasis& basis, int i,
                   const Eigen::VectorXd& x) {
    if (i < 0 || i >= basis.values.cols()) {
        throw std::invalid_argument("interpolate: basis function index out of range");
    }
    return interpolate_all(ctx, basis, x)(i);
}

Quadrature make_quadrature(const ConvexPolytope& domain, int cells_per_axis) {
    if (cells_per_axis < 1) {
        throw std::invalid_argument("make_quadrature: cells_per_axis must be positive");
    }
    const int n = domain.dimension();
    Eigen::VectorXd lo = domain.vertices().front();
    Eigen::VectorXd hi = lo;
    for (const auto& v : domain.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }

    Quadrature quad;
    std::vector<double> weights;
    std::vector<int> counter(static_cast<size_t>(n), 0);
    while (true) {
        std::vector<Halfspace> cut = domain.halfspaces();
        for (int d = 0; d < n; ++d) {
            const double width = (hi(d) - lo(d)) / cells_per_axis;
            const double a = lo(d) + counter[static_cast<size_t>(d)] * width;
            Halfspace lower;
            lower.normal = Eigen::VectorXd::Zero(n);
            lower.normal(d) = -1.0;
            lower.offset = -a;
            Halfspace upper;
            upper.normal = Eigen::VectorXd::Zero(n);
            upper.normal(d) = 1.0;
            upper.offset = a + width;
            cut.push_back(lower);
            cut.push_back(upper);
        }
        try {
            const ConvexPolytope piece = halfspace_intersection(cut);
            if (piece.volume() > 1e-14) {
                quad.nodes.push_back(piece.centroid());
                weights.push_back(piece.volume());
            }
        } catch (const std::exception&) {
            // Cell entirely outside the domain.
        }

        size_t d = 0;
        while (d < static_cast<size_t>(n) && counter[d] == cells_per_axis - 1) {
            counter[d] = 0;
            ++d;
        }
        if (d == static_cast<size_t>(n)) break;
        ++counter[d];
    }
    if (quad.nodes.empty()) {
        throw std::runtime_error("make_quadrature: no cell intersects the domain");
    }
    quad.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                     static_cast<int>(weights.size()));
    return quad;
}

std::vector<Eigen::VectorXd> make_centers(const ConvexPolytope& domain, int per_axis) {
    if (per_axis < 1) {
        throw std::invalid_argument("make_centers: per_axis must be positive");
    }
    const int n = domain.dimension();
    Eigen::VectorXd lo = domain.vertices().front();
    Eigen::VectorXd hi = lo;
    for (const auto& v : domain.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    std::vector<Eigen::VectorXd> centers;
    std::vector<int> counter(static_cast<size_t>(n), 0);
    Eigen::VectorXd p(n);
    while (true) {
        for (int d = 0; d < n; ++d) {
            p(d) = lo(d) + (counter[static_cast<size_t>(d)] + 0.5) / per_axis * (hi(d) - lo(d));
        }
        if (domain.contains(p, 1e-9)) centers.push_back(p);
        size_t d = 0;
        while (d < static_cast<size_t>(n) && counter[d] == per_axis - 1) {
            counter[d] = 0;
            ++d;
        }
        if (d == static_cast<size_t>(n)) break;
        ++counter[d];
    }
    return centers;
}

namespace {

/// Length scale of the smooth embedding interpolant: half the coarsest grid
/// spacing of the embedding's net.
double blend_scale(const Embedding& embedding) {
    const std::vector<double> spacing =
        net_spacings(embedding.context.group.domain, embedding.epsilon);
    const double widest = *std::max_element(spacing.begin(), spacing.end());
    if (widest <= 0.0) {
        throw std::runtime_error("eigenbasis_galerkin: embedding net has no extent");
    }
    return 0.5 * widest;
}

/// Gaussian-weighted blend of the embedded net rows. Unlike the exact
/// inverse-distance rule of rho(), this interpolant is smooth everywhere (the
/// inverse-distance interpolant is stationary at every net vertex, which
/// flattens finite-difference gradients taken through it), so it is the
/// evaluation path for everything the weak-form assembly differentiates. The
/// quotient-distance kink at the cut locus lies far outside the blend scale,
/// so its weight is zero to machine precision.
Eigen::VectorXd smooth_embed(const Embedding& embedding, double tau, const Eigen::VectorXd& x) {
    const Eigen::VectorXd p = project(embedding.context, x);
    const int m = static_cast<int>(embedding.net.size());
    Eigen::VectorXd d2(m);
    for (int i = 0; i < m; ++i) {
        const double d = quotient_distance(embedding.context, p, embedding.net[static_cast<size_t>(i)]);
        d2(i) = d * d;
    }
    const double shift = d2.minCoeff();
    Eigen::VectorXd img = Eigen::VectorXd::Zero(embedding.dimension);
    double weight_sum = 0.0;
    for (int i = 0; i < m; ++i) {
        const double w = std::exp(-(d2(i) - shift) / (2.0 * tau * tau));
        img += w * embedding.coordinates.row(i).transpose();
        weight_sum += w;
    }
    return img / weight_sum;
}

Eigen::VectorXd rbf_values_at(const Embedding& embedding, double tau,
                              const Eigen::MatrixXd& center_images, double sigma,
                              const Eigen::VectorXd& x) {
    const Eigen::VectorXd img = smooth_embed(embedding, tau, x);
    Eigen::VectorXd row(center_images.rows());
    for (int c = 0; c < center_images.rows(); ++c) {
        const double d2 = (center_images.row(c).transpose() - img).squaredNorm();
        row(c) = std::exp(-d2 / (2.0 * sigma * sigma));
    }
    return row;
}

}  // namespace

std::vector<Eigen::VectorXd> prune_centers(const Embedding& embedding,
                                           const std::vector<Eigen::VectorXd>& centers,
                                           double min_image_gap) {
    if (min_image_gap < 0.0) {
        throw std::invalid_argument("prune_centers: min_image_gap must be nonnegative");
    }
    const double tau = blend_scale(embedding);
    std::vector<Eigen::VectorXd> kept;
    std::vector<Eigen::VectorXd> kept_images;
    for (const auto& c : centers) {
        const Eigen::VectorXd img = smooth_embed(embedding, tau, c);
        bool crowded = false;
        for (const auto& other : kept_images) {
            if ((img - other).norm() < min_image_gap) {
                crowded = true;
                break;
            }
        }
        if (!crowded) {
            kept.push_back(c);
            kept_images.push_back(img);
        }
    }
    return kept;
}

EigenBasis eigenbasis_galerkin(const QuotientContext& ctx, const Embedding& embedding,
                               const GalerkinConfig& cfg, int k) {
    const ConvexPolytope& domain = ctx.group.domain;
    const int n_centers = static_cast<int>(cfg.centers.size());
    const int n_nodes = static_cast<int>(cfg.quadrature.nodes.size());
    if (k < 1 || k > n_centers) {
        throw std::invalid_argument("eigenbasis_galerkin: k out of range for the center count");
    }
    if (n_nodes < n_centers) {
        throw std::invalid_argument("eigenbasis_galerkin: quadrature coarser than the center set");
    }
    if (cfg.quadrature.weights.size() != n_nodes || cfg.quadrature.weights.minCoeff() <= 0.0) {
        throw std::invalid_argument("eigenbasis_galerkin: quadrature weights must be positive");
    }
    for (const auto& c : cfg.centers) {
        if (c.size() != domain.dimension()) {
            throw std::invalid_argument("eigenbasis_galerkin: center dimension mismatch");
        }
    }
    for (const auto& node : cfg.quadrature.nodes) {
        if (node.size() != domain.dimension()) {
            throw std::invalid_argument("eigenbasis_galerkin: quadrature dimension mismatch");
        }
    }
    const double vol = domain.volume();
    if (std::abs(cfg.quadrature.weights.sum() - vol) > 1e-3 * vol) {
        throw std::invalid_argument(
            "eigenbasis_galerkin: quadrature weights do not sum to the domain volume");
    }

    const double tau = blend_scale(embedding);
    Eigen::MatrixXd center_images(n_centers, embedding.dimension);
    parallel_for(n_centers, [&](std::ptrdiff_t c) {
        center_images.row(c) =
            smooth_embed(embedding, tau, cfg.centers[static_cast<size_t>(c)]).transpose();
    });

    double sigma = cfg.rbf_width;
    if (sigma <= 0.0) {
        std::vector<double> nearest(static_cast<size_t>(n_centers),
                                    std::numeric_limits<double>::infinity());
        for (int a = 0; a < n_centers; ++a) {
            for (int b = 0; b < n_centers; ++b) {
                if (a == b) continue;
                const double d = (center_images.row(a) - center_images.row(b)).norm();
                nearest[static_cast<size_t>(a)] = std::min(nearest[static_cast<size_t>(a)], d);
            }
        }
        std::nth_element(nearest.begin(), nearest.begin() + n_centers / 2, nearest.end());
        sigma = 1.2 * nearest[static_cast<size_t>(n_centers / 2)];
    }
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("eigenbasis_galerkin: could not derive a positive RBF width");
    }
    const double step = cfg.gradient_step > 0.0 ? cfg.gradient_step : 1e-4 * domain.diameter();

    const int dim = domain.dimension();
    Eigen::MatrixXd values_matrix(n_nodes, n_centers);
    std::vector<Eigen::MatrixXd> gradients(static_cast<size_t>(dim),
                                           Eigen::MatrixXd(n_nodes, n_centers));
    parallel_for(n_nodes, [&](std::ptrdiff_t q) {
        const Eigen::VectorXd& node = cfg.quadrature.nodes[static_cast<size_t>(q)];
        values_matrix.row(q) =
            rbf_values_at(embedding, tau, center_images, sigma, node).transpose();
        for (int d = 0; d < dim; ++d) {
            Eigen::VectorXd shifted = node;
            shifted(d) += step;
            const Eigen::VectorXd forward =
                rbf_values_at(embedding, tau, center_images, sigma, shifted);
            shifted(d) = node(d) - step;
            const Eigen::VectorXd backward =
                rbf_values_at(embedding, tau, center_images, sigma, shifted);
            gradients[static_cast<size_t>(d)].row(q) =
                ((forward - backward) / (2.0 * step)).transpose();
        }
    });

    const auto& w = cfg.quadrature.weights;
    Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(n_centers, n_centers);
    for (int d = 0; d < dim; ++d) {
        stiffness += gradients[static_cast<size_t>(d)].transpose() * w.asDiagonal() *
                     gradients[static_cast<size_t>(d)];
    }
    Eigen::MatrixXd mass = values_matrix.transpose() * w.asDiagonal() * values_matrix;
    mass += 1e-10 * Eigen::MatrixXd::Identity(n_centers, n_centers);
    stiffness = 0.5 * (stiffness + stiffness.transpose()).eval();
    mass = 0.5 * (mass + mass.transpose()).eval();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(stiffness, mass);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error(
            "eigenbasis_galerkin: generalized eigensolve failed (mass matrix singular "
            "beyond the regularization)");
    }

    EigenBasis basis;
    basis.method = BasisMethod::galerkin;
    basis.eigenvalues = solver.eigenvalues().head(k);
    basis.coefficients = solver.eigenvectors().leftCols(k);
    basis.values = values_matrix * basis.coefficients;
    fix_signs(basis.values, &basis.coefficients);
    basis.sample_points = cfg.quadrature.nodes;
    basis.sample_weights = cfg.quadrature.weights;
    basis.center_images = std::move(center_images);
    basis.rbf_sigma = sigma;
    basis.clusters = cluster_eigenvalues(basis.eigenvalues);
    return basis;
}

double galerkin_eval(const Embedding& embedding, const EigenBasis& basis, int i,
                     const Eigen::VectorXd& x) {
    if (basis.method != BasisMethod::galerkin) {
        throw std::invalid_argument("galerkin_eval: basis has no RBF expansion");
    }
    if (i < 0 || i >= basis.coefficients.cols()) {
        throw std::invalid_argument("galerkin_eval: basis function index out of range");
    }
    return rbf_values_at(embedding, blend_scale(embedding), basis.center_images, basis.rbf_sigma, x)
        .dot(basis.coefficients.col(i));
}

namespace {

/// Walks boundary sample points with their outward unit normal and measure
/// element, accumulating term(point, normal) * measure.
double boundary_accumulate(
    const ConvexPolytope& domain,
    const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& term) {
    const int n = domain.dimension();
    double total = 0.0;
    if (n == 1) {
        for (const auto& face : domain.faces()) {
            if (face.dimension != 0 || face.facet_set.empty()) continue;
            const Eigen::VectorXd nhat =
                domain.halfspaces()[static_cast<size_t>(face.facet_set[0])].normal.normalized();
            total += term(domain.vertices()[static_cast<size_t>(face.vertex_ids[0])], nhat);
        }
        return total;
    }
    if (n == 2) {
        constexpr int kSub = 2000;
        for (const auto& face : domain.faces()) {
            if (face.dimension != 1) continue;
            const Eigen::VectorXd nhat =
                domain.halfspaces()[static_cast<size_t>(face.facet_set[0])].normal.normalized();
            const Eigen::VectorXd& a = domain.vertices()[static_cast<size_t>(face.vertex_ids[0])];
            const Eigen::VectorXd& b = domain.vertices()[static_cast<size_t>(face.vertex_ids[1])];
            const double dl = (b - a).norm() / kSub;
            for (int t = 0; t < kSub; ++t) {
                const Eigen::VectorXd x = a + ((t + 0.5) / kSub) * (b - a);
                total += term(x, nhat) * dl;
            }
        }
        return total;
    }

    constexpr int kSplit = 16;
    const auto& rings = domain.facet_polygons();
    for (size_t f = 0; f < rings.size(); ++f) {
        const auto& ring = rings[f];
        if (ring.size() < 3) continue;
        const Eigen::VectorXd nhat = domain.halfspaces()[f].normal.normalized();
        const Eigen::VectorXd& p0 = domain.vertices()[static_cast<size_t>(ring[0])];
        for (size_t r = 1; r + 1 < ring.size(); ++r) {
            const Eigen::VectorXd& p1 = domain.vertices()[static_cast<size_t>(ring[r])];
            const Eigen::VectorXd& p2 = domain.vertices()[static_cast<size_t>(ring[r + 1])];
            const Eigen::Vector3d u = (p1 - p0).head<3>();
            const Eigen::Vector3d v = (p2 - p0).head<3>();
            const double sub_area = 0.5 * u.cross(v).norm() / (kSplit * kSplit);
            if (sub_area <= 0.0) continue;
            for (int i = 0; i < kSplit; ++i) {
                for (int j = 0; j < kSplit - i; ++j) {
                    const double au = (3.0 * i + 1.0) / (3.0 * kSplit);
                    const double bu = (3.0 * j + 1.0) / (3.0 * kSplit);
                    total += term(p0 + au * (p1 - p0) + bu * (p2 - p0), nhat) * sub_area;
                    if (j < kSplit - i - 1) {
                        const double ad = (3.0 * i + 2.0) / (3.0 * kSplit);
                        const double bd = (3.0 * j + 2.0) / (3.0 * kSplit);
                        total += term(p0 + ad * (p1 - p0) + bd * (p2 - p0), nhat) * sub_area;
                    }
                }
            }
        }
    }
    return total;
}

}  // namespace

double boundary_flux(const QuotientContext& ctx,
                     const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field) {
    return boundary_accumulate(ctx.group.domain,
                               [&field](const Eigen::VectorXd& x, const Eigen::VectorXd& nhat) {
                                   return field(x).dot(nhat);
                               });
}

double boundary_norm_integral(
    const QuotientContext& ctx,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field) {
    return boundary_accumulate(ctx.group.domain,
                               [&field](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
                                   return field(x).norm();
                               });
}

namespace {

double gram_deviation(const Eigen::MatrixXd& values, const Eigen::VectorXd& weights) {
    const Eigen::MatrixXd gram = values.transpose() * weights.asDiagonal() * values;
    const int k = static_cast<int>(gram.rows());
    return (gram - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff();
}

}  // namespace

double orthonormality_check(const EigenBasis& basis) {
    if (basis.values.rows() == 0) {
        throw std::invalid_argument("orthonormality_check: basis has no samples");
    }
    return gram_deviation(basis.values, basis.sample_weights);
}

double orthonormality_check(const QuotientContext& ctx, const EigenBasis& basis) {
    return orthonormality_check(ctx, basis, make_quadrature(ctx.group.domain, 16));
}

double orthonormality_check(const QuotientContext& ctx, const EigenBasis& basis,
                            const Quadrature& quadrature) {
    const int q = static_cast<int>(quadrature.nodes.size());
    if (q == 0) throw std::invalid_argument("orthonormality_check: empty quadrature");
    Eigen::MatrixXd values(q, basis.values.cols());
    parallel_for(q, [&](std::ptrdiff_t i) {
        values.row(i) = interpolate_all(ctx, basis, quadrature.nodes[static_cast<size_t>(i)]).transpose();
    });
    return gram_deviation(values, quadrature.weights);
}

double orthonormality_check(const Embedding& embedding, const EigenBasis& basis,
                            const Quadrature& quadrature) {
    if (basis.method != BasisMethod::galerkin) {
        throw std::invalid_argument("orthonormality_check: basis has no RBF expansion");
    }
    const int q = static_cast<int>(quadrature.nodes.size());
    if (q == 0) throw std::invalid_argument("orthonormality_check: empty quadrature");
    const double tau = blend_scale(embedding);
    Eigen::MatrixXd values(q, basis.coefficients.cols());
    parallel_for(q, [&](std::ptrdiff_t i) {
        values.row(i) = rbf_values_at(embedding, tau, basis.center_images, basis.rbf_sigma,
                                      quadrature.nodes[static_cast<size_t>(i)])
                            .transpose() *
                        basis.coefficients;
    });
    return gram_deviation(values, quadrature.weights);
}

}  // namespace crystalfold
