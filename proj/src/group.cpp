#include "crystalfold/group.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <stdexcept>
#include <unordered_set>

namespace crystalfold {

namespace {

// Quantized fingerprint of (A | b); 1e-6 is far below any spacing between
// distinct elements of a crystallographic group acting near the unit-scale tile.
std::string element_key(const Isometry& phi) {
    std::string key;
    key.reserve(16 * static_cast<size_t>(phi.dimension() * (phi.dimension() + 1)));
    auto push = [&key](double v) {
        const auto q = static_cast<std::int64_t>(std::llround(v * 1e6));
        key.append(reinterpret_cast<const char*>(&q), sizeof(q));
    };
    for (int i = 0; i < phi.matrix.rows(); ++i) {
        for (int j = 0; j < phi.matrix.cols(); ++j) push(phi.matrix(i, j));
    }
    for (int i = 0; i < phi.translation.size(); ++i) push(phi.translation(i));
    return key;
}

}  // namespace

ConvexPolytope transform_polytope(const ConvexPolytope& tile, const Isometry& phi) {
    std::vector<Eigen::VectorXd> moved;
    moved.reserve(tile.vertices().size());
    for (const auto& v : tile.vertices()) moved.push_back(apply(phi, v));
    return ConvexPolytope::from_vertices(moved);
}

CrystalGroup make_group(std::string name, std::vector<Isometry> generators,
                        const Eigen::MatrixXd& lattice, ConvexPolytope domain) {
    if (generators.empty()) throw std::invalid_argument("group: no generators");
    const int n = generators[0].dimension();
    for (const auto& g : generators) {
        if (g.dimension() != n) throw std::invalid_argument("group: mixed generator dimensions");
    }
    if (lattice.rows() != n || lattice.cols() != n) {
        throw std::invalid_argument("group: lattice basis must be " + std::to_string(n) + "x" +
                                    std::to_string(n));
    }
    if (domain.dimension() != n) {
        throw std::invalid_argument("group: domain dimension does not match generators");
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(lattice);
    lu.setThreshold(1e-9);
    if (lu.rank() < n) throw std::invalid_argument("group: lattice basis is rank deficient");

    // Each linear part must permute the lattice.
    for (size_t gi = 0; gi < generators.size(); ++gi) {
        const Eigen::MatrixXd image = lu.solve(generators[gi].matrix * lattice);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (std::abs(image(i, j) - std::round(image(i, j))) > 1e-9) {
                    throw std::invalid_argument("group: generator " + std::to_string(gi + 1) +
                                                " does not preserve the lattice");
                }
            }
        }
    }

    // Each lattice basis vector must arise from a short generator word.
    std::vector<Isometry> steps;
    for (size_t i = 0; i < generators.size(); ++i) {
        Isometry g = generators[i];
        g.word = {static_cast<int>(i) + 1};
        steps.push_back(g);
        Isometry gi = inverse(g);
        steps.push_back(gi);
    }
    std::vector<Isometry> reachable = {identity_isometry(n)};
    std::unordered_set<std::string> seen = {element_key(reachable[0])};
    size_t layer_begin = 0;
    for (int depth = 0; depth < 4; ++depth) {
        const size_t layer_end = reachable.size();
        for (size_t i = layer_begin; i < layer_end; ++i) {
            for (const auto& s : steps) {
                Isometry next = compose(reachable[i], s);
                if (seen.insert(element_key(next)).second) reachable.push_back(std::move(next));
            }
        }
        layer_begin = layer_end;
    }
    for (int c = 0; c < n; ++c) {
        const Eigen::VectorXd target = lattice.col(c);
        bool found = false;
        for (const auto& e : reachable) {
            if ((e.matrix - Eigen::MatrixXd::Identity(n, n)).array().abs().maxCoeff() <= 1e-9 &&
                (e.translation - target).array().abs().maxCoeff() <= 1e-9) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::invalid_argument("group: lattice basis vector " + std::to_string(c) +
                                        " is not reachable by a generator word of length <= 4");
        }
    }

    CrystalGroup out;
    out.name = std::move(name);
    out.dimension = n;
    out.generators = std::move(generators);
    out.lattice = lattice;
    out.domain = std::move(domain);
    return out;
}

std::vector<Isometry> enumerate_local_group(const CrystalGroup& group, double margin) {
    const int n = group.dimension;
    const double diam = group.domain.diameter();
    const double keep_radius = diam * (1.0 + margin);
    // Generous search ball: the kept set lies well inside it (see the set-distance
    // bound below), and the slack keeps the breadth-first search connected.
    const double prune_radius = keep_radius + 4.0 * diam;
    const Eigen::VectorXd center = group.domain.centroid();

    std::vector<Isometry> steps;
    for (size_t i = 0; i < group.generators.size(); ++i) {
        Isometry g = group.generators[i];
        g.word = {static_cast<int>(i) + 1};
        steps.push_back(g);
        steps.push_back(inverse(g));
    }

    std::vector<Isometry> ball = {identity_isometry(n)};
    std::unordered_set<std::string> seen = {element_key(ball[0])};
    size_t layer_begin = 0;
    int depth = 0;
    while (layer_begin < ball.size()) {
        if (depth >= 32) {
            throw std::runtime_error(
                "enumerate_local_group: search exceeded the word-length cap of 32");
        }
        const size_t layer_end = ball.size();
        for (size_t i = layer_begin; i < layer_end; ++i) {
            for (const auto& s : steps) {
                Isometry next = compose(ball[i], s);
                if (!seen.insert(element_key(next)).second) continue;
                if ((apply(next, center) - center).norm() <= prune_radius) {
                    ball.push_back(std::move(next));
                }
            }
        }
        layer_begin = layer_end;
        ++depth;
    }

    std::vector<Isometry> local;
    for (auto& e : ball) {
        if (is_identity(e)) {
            local.push_back(e);
            continue;
        }
        const ConvexPolytope image = transform_polytope(group.domain, e);
        if (polytope_distance(image, group.domain) <= keep_radius + 1e-9) {
            local.push_back(std::move(e));
        }
    }

    // A tile within distance r of the domain puts its preimage within the same
    // distance, so the result must be closed under inverses.
    for (const auto& e : local) {
        const Isometry inv = inverse(e);
        bool found = false;
        for (const auto& f : local) {
            if (isometry_equal(inv, f, 1e-7)) {
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::logic_error("enumerate_local_group: result not closed under inverses");
        }
    }
    return local;
}

std::vector<Isometry> stabilizer(const std::vector<Isometry>& elements, const Eigen::VectorXd& x,
                                 double tol) {
    std::vector<Isometry> fix;
    for (const auto& e : elements) {
        if ((apply(e, x) - x).norm() <= tol) fix.push_back(e);
    }
    for (const auto& a : fix) {
        for (const auto& b : fix) {
            const Isometry c = compose(a, inverse(b));
            bool found = false;
            for (const auto& f : fix) {
                if (isometry_equal(c, f, 1e-6)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                throw std::logic_error(
                    "stabilizer: fixed set is not closed under composition; the element list "
                    "is too small or the point tolerance is inconsistent");
            }
        }
    }
    return fix;
}

}  // namespace crystalfold
