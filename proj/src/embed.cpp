#include "crystalfold/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "crystalfold/domain.hpp"
#include "crystalfold/parallel.hpp"

namespace crystalfold {

namespace {

std::vector<std::vector<std::pair<int, double>>> adjacency_list(const OrbitGraph& graph) {
    std::vector<std::vector<std::pair<int, double>>> adj(graph.vertices.size());
    for (const OrbitGraph::Edge& e : graph.edges) {
        adj[static_cast<size_t>(e.i)].emplace_back(e.j, e.weight);
    }
    return adj;
}

}  // namespace

Eigen::MatrixXd geodesic_distances(const OrbitGraph& graph) {
    const int m = static_cast<int>(graph.vertices.size());
    if (m == 0) {
        throw std::invalid_argument("geodesic_distances: graph has no vertices");
    }
    const auto adj = adjacency_list(graph);
    const double inf = std::numeric_limits<double>::infinity();

    Eigen::MatrixXd lengths(m, m);
    parallel_for(m, [&](std::ptrdiff_t source) {
        std::vector<double> dist(static_cast<size_t>(m), inf);
        std::vector<char> done(static_cast<size_t>(m), 0);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
        dist[static_cast<size_t>(source)] = 0.0;
        queue.emplace(0.0, static_cast<int>(source));
        while (!queue.empty()) {
            const auto [d, u] = queue.top();
            queue.pop();
            if (done[static_cast<size_t>(u)]) continue;
            done[static_cast<size_t>(u)] = 1;
            for (const auto& [v, w] : adj[static_cast<size_t>(u)]) {
                const double cand = d + w;
                if (cand < dist[static_cast<size_t>(v)]) {
                    dist[static_cast<size_t>(v)] = cand;
                    queue.emplace(cand, v);
                }
            }
        }
        for (int j = 0; j < m; ++j) lengths(source, j) = dist[static_cast<size_t>(j)];
    });

    if (!lengths.allFinite()) {
        throw std::runtime_error("geodesic_distances: graph is disconnected");
    }
    // Symmetrize away the last-bit asymmetry of independent Dijkstra sweeps,
    // then square: downstream scaling works on squared lengths.
    lengths = 0.5 * (lengths + lengths.transpose()).eval();
    return lengths.array().square().matrix();
}

MdsResult classical_mds(const Eigen::MatrixXd& squared_distances, int max_dim,
                        double stress_tol) {
    const Eigen::MatrixXd& R = squared_distances;
    const int m = static_cast<int>(R.rows());
    if (m < 2 || R.cols() != m) {
        throw std::invalid_argument("classical_mds: need a square matrix over at least two points");
    }
    if (max_dim < 1) throw std::invalid_argument("classical_mds: max_dim must be positive");
    if (!R.allFinite()) throw std::invalid_argument("classical_mds: non-finite distances");
    const double scale = 1.0 + R.cwiseAbs().maxCoeff();
    if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw std::invalid_argument("classical_mds: matrix is not symmetric");
    }
    if (R.diagonal().cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("classical_mds: diagonal is not zero");
    }
    if (R.minCoeff() < -1e-12 * scale) {
        throw std::invalid_argument("classical_mds: negative squared distances");
    }

    const Eigen::MatrixXd G = R.cwiseMax(0.0).cwiseSqrt();
    const double gnorm = G.norm();

    // Double centering: B = -1/2 H R H with H = I - 11^T/m.
    const Eigen::VectorXd row_mean = R.rowwise().mean();
    const double total_mean = row_mean.mean();
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            B(i, j) = -0.5 * (R(i, j) - row_mean(i) - row_mean(j) + total_mean);
        }
    }
    B = 0.5 * (B + B.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("classical_mds: eigendecomposition failed");
    }

    MdsResult result;
    result.eigenvalues.resize(m);
    Eigen::MatrixXd vectors(m, m);
    for (int k = 0; k < m; ++k) {
        result.eigenvalues(k) = solver.eigenvalues()(m - 1 - k);
        vectors.col(k) = solver.eigenvectors().col(m - 1 - k);
    }

    int positive = 0;
    while (positive < m && result.eigenvalues(positive) > 0.0) ++positive;
    if (positive == 0) {
        throw std::runtime_error("classical_mds: no positive eigenvalue, nothing to embed");
    }

    const int ncols = std::min(max_dim, positive);
    Eigen::MatrixXd coords(m, ncols);
    for (int k = 0; k < ncols; ++k) {
        coords.col(k) = std::sqrt(result.eigenvalues(k)) * vectors.col(k);
    }

    // Relative Frobenius stress of each column prefix against the target
    // distances. Chordal distances grow with every added column, so the
    // profile usually dips and then climbs once columns start overshooting.
    Eigen::MatrixXd chordal_sq = Eigen::MatrixXd::Zero(m, m);
    result.stress_profile.reserve(static_cast<size_t>(ncols));
    for (int k = 0; k < ncols; ++k) {
        const Eigen::VectorXd& c = coords.col(k);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                const double diff = c(i) - c(j);
                chordal_sq(i, j) += diff * diff;
            }
        }
        const double stress = (chordal_sq.cwiseSqrt() - G).norm() / gnorm;
        result.stress_profile.push_back(stress);
    }

    int chosen = -1;
    for (int k = 0; k < ncols; ++k) {
        if (result.stress_profile[static_cast<size_t>(k)] <= stress_tol) {
            chosen = k;
            break;
        }
    }
    if (chosen < 0) {
        chosen = 0;
        for (int k = 1; k < ncols; ++k) {
            if (result.stress_profile[static_cast<size_t>(k)] <
                result.stress_profile[static_cast<size_t>(chosen)]) {
                chosen = k;
            }
        }
    }

    result.dimension = chosen + 1;
    result.coordinates = coords.leftCols(result.dimension);
    result.stress = result.stress_profile[static_cast<size_t>(chosen)];
    return result;
}

namespace {

/// Interior point of the domain with trivial stabilizer, searched near the
/// centroid along a short deterministic list of perturbation directions.
Eigen::VectorXd free_interior_point(const QuotientContext& ctx) {
    const ConvexPolytope& domain = ctx.group.domain;
    const double diam = domain.diameter();
    const Eigen::VectorXd centroid = domain.centroid();
    for (int attempt = 0; attempt < 24; ++attempt) {
        Eigen::VectorXd candidate = centroid;
        if (attempt > 0) {
            Eigen::VectorXd dir(domain.dimension());
            for (int i = 0; i < dir.size(); ++i) {
                dir(i) = std::cos(0.9 * attempt * (i + 1) + 0.3 * (i + 1));
            }
            candidate += (0.011 * attempt * diam) * dir.normalized();
        }
        if (!domain.contains(candidate, 1e-9)) continue;
        if (domain.boundary_distance(candidate) < 1e-6 * diam) continue;
        if (stabilizer(ctx.local, candidate).size() != 1) continue;
        return candidate;
    }
    throw std::runtime_error(
        "build_embedding: found no interior point with trivial stabilizer to re-base on");
}

}  // namespace

Embedding build_embedding(const QuotientContext& ctx, double epsilon, double delta,
                          double stress_tol, bool keep_domain) {
    QuotientContext work = ctx;
    bool rebased = false;
    if (!keep_domain && !is_exact(ctx.group)) {
        const Eigen::VectorXd center = free_interior_point(ctx);
        ConvexPolytope cell = dirichlet_domain(ctx.group, center);
        CrystalGroup regrouped = make_group(ctx.group.name, ctx.group.generators,
                                            ctx.group.lattice, std::move(cell));
        work = make_context(regrouped, ctx.margin);
        rebased = true;
    }

    const double radius = delta > 0.0 ? delta : default_delta(work.group.domain, epsilon);
    OrbitGraph graph = build_orbit_graph(work, epsilon, radius);
    const int m = static_cast<int>(graph.vertices.size());
    const OrbitGraph augmented = mirror_augment(work, graph);

    const Eigen::MatrixXd R = geodesic_distances(augmented);
    MdsResult mds = classical_mds(R, 10, stress_tol);

    Embedding emb;
    emb.dimension = mds.dimension;
    emb.net = std::move(graph.vertices);
    emb.coordinates = mds.coordinates.topRows(m);
    emb.mds_eigenvalues = std::move(mds.eigenvalues);
    emb.stress_profile = std::move(mds.stress_profile);
    emb.stress = mds.stress;
    emb.epsilon = epsilon;
    emb.delta = radius;
    emb.rebased = rebased;
    emb.context = std::move(work);

    // Vertices at quotient distance zero (boundary identifications) must land
    // on top of each other; record the worst gap. Reflected copies are not
    // zero-distance records: their edges carry the ambient gap.
    double residual = 0.0;
    for (const OrbitGraph::Edge& e : augmented.edges) {
        if (e.i < e.j && e.j < m && e.weight <= 1e-12) {
            residual = std::max(
                residual, (emb.coordinates.row(e.i) - emb.coordinates.row(e.j)).norm());
        }
    }
    emb.gluing_residual = residual;

    const int n = emb.context.group.dimension;
    if (emb.dimension < n) {
        std::ostringstream msg;
        msg << "build_embedding: selected dimension " << emb.dimension
            << " fell below the ambient dimension " << n;
        throw std::logic_error(msg.str());
    }
    size_t max_stab = 1;
    for (const Eigen::VectorXd& v : emb.net) {
        max_stab = std::max(max_stab, stabilizer(emb.context.local, v).size());
    }
    emb.dimension_bound = 2 * (n + static_cast<int>(max_stab));
    emb.exceeds_bound = emb.dimension >= emb.dimension_bound;
    return emb;
}

Eigen::VectorXd rho(const Embedding& embedding, const Eigen::VectorXd& x) {
    const int m = static_cast<int>(embedding.net.size());
    if (m == 0) throw std::invalid_argument("rho: embedding has no net");
    const Eigen::VectorXd p = project(embedding.context, x);

    std::vector<std::pair<double, int>> dist(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double d = quotient_distance(embedding.context, p, embedding.net[static_cast<size_t>(i)]);
        if (d <= 1e-12) return embedding.coordinates.row(i);
        dist[static_cast<size_t>(i)] = {d, i};
    }

    const int k = std::min(8, m);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    Eigen::VectorXd value = Eigen::VectorXd::Zero(embedding.dimension);
    double weight_sum = 0.0;
    for (int a = 0; a < k; ++a) {
        const double w = 1.0 / (dist[static_cast<size_t>(a)].first * dist[static_cast<size_t>(a)].first);
        value += w * embedding.coordinates.row(dist[static_cast<size_t>(a)].second).transpose();
        weight_sum += w;
    }
    return value / weight_sum;
}

DistortionReport embedding_distortion(const Embedding& embedding, const OrbitGraph& graph) {
    const int m = static_cast<int>(embedding.net.size());
    if (static_cast<int>(graph.vertices.size()) < m) {
        throw std::invalid_argument("embedding_distortion: graph does not cover the net");
    }
    for (int i = 0; i < m; ++i) {
        if ((graph.vertices[static_cast<size_t>(i)] - embedding.net[static_cast<size_t>(i)]).norm() > 1e-12) {
            throw std::invalid_argument("embedding_distortion: graph vertices differ from the net");
        }
    }
    const Eigen::MatrixXd R = geodesic_distances(graph);

    DistortionReport report;
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double g = std::sqrt(std::max(R(i, j), 0.0));
            const double c = (embedding.coordinates.row(i) - embedding.coordinates.row(j)).norm();
            num += (c - g) * (c - g);
            den += g * g;
        }
    }
    report.stress = den > 0.0 ? std::sqrt(num / den) : 0.0;

    double residual = 0.0;
    for (const OrbitGraph::Edge& e : graph.edges) {
        if (e.i < e.j && e.j < m && e.weight <= 1e-12) {
            residual = std::max(residual, (embedding.coordinates.row(e.i) -
                                           embedding.coordinates.row(e.j)).norm());
        }
    }
    report.max_gluing_residual = residual;

    report.eigenvalue_mass.reserve(static_cast<size_t>(embedding.dimension));
    for (int k = 0; k < embedding.dimension && k < embedding.mds_eigenvalues.size(); ++k) {
        report.eigenvalue_mass.push_back(embedding.mds_eigenvalues(k));
    }
    double negative = 0.0;
    double total = 0.0;
    for (int k = 0; k < embedding.mds_eigenvalues.size(); ++k) {
        const double ev = embedding.mds_eigenvalues(k);
        negative += std::max(0.0, -ev);
        total += std::abs(ev);
    }
    report.negative_mass = total > 0.0 ? negative / total : 0.0;
    return report;
}

}  // namespace crystalfold
