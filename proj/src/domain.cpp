#include "crystalfold/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace crystalfold {

namespace {

// Lexicographic comparison with a per-component dead zone.
bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol = 1e-9) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i) - tol) return true;
        if (a(i) > b(i) + tol) return false;
    }
    return false;
}

int match_vertex(const ConvexPolytope& domain, const Eigen::VectorXd& p, double tol = 1e-9) {
    for (size_t i = 0; i < domain.vertices().size(); ++i) {
        if ((domain.vertices()[i] - p).norm() <= tol) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

std::optional<int> face_image(const ConvexPolytope& domain, int face_id, const Isometry& phi) {
    const Face& face = domain.faces().at(static_cast<size_t>(face_id));
    std::vector<int> image_ids;
    image_ids.reserve(face.vertex_ids.size());
    for (int v : face.vertex_ids) {
        const int match = match_vertex(domain, apply(phi, domain.vertices()[v]));
        if (match < 0) return std::nullopt;
        image_ids.push_back(match);
    }
    std::sort(image_ids.begin(), image_ids.end());
    image_ids.erase(std::unique(image_ids.begin(), image_ids.end()), image_ids.end());
    if (image_ids.size() != face.vertex_ids.size()) return std::nullopt;
    for (size_t i = 0; i < domain.faces().size(); ++i) {
        const Face& cand = domain.faces()[i];
        if (cand.dimension == face.dimension && cand.vertex_ids == image_ids) {
            return static_cast<int>(i);
        }
    }
    return std::nullopt;
}

Transversal compute_transversal(const ConvexPolytope& domain,
                                const std::vector<Isometry>& local) {
    const int nfaces = static_cast<int>(domain.faces().size());
    // Union-find over faces.
    std::vector<int> parent(nfaces);
    for (int i = 0; i < nfaces; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };

    // For every face and element, link the face with its image face when the
    // element carries it onto one; record the witnessing elements.
    std::vector<std::vector<std::pair<int, const Isometry*>>> images(nfaces);
    for (int f = 0; f < nfaces; ++f) {
        for (const auto& phi : local) {
            const auto img = face_image(domain, f, phi);
            if (img) {
                images[f].emplace_back(*img, &phi);
                parent[find(f)] = find(*img);
            }
        }
    }

    Transversal out;
    out.face_class.assign(nfaces, -1);
    std::map<int, int> root_to_class;
    for (int f = 0; f < nfaces; ++f) {
        const int root = find(f);
        auto it = root_to_class.find(root);
        if (it == root_to_class.end()) {
            it = root_to_class.emplace(root, static_cast<int>(out.representatives.size())).first;
            out.representatives.push_back(-1);
        }
        out.face_class[f] = it->second;
    }
    // Representative: lexicographically smallest face centroid within the class.
    for (int f = 0; f < nfaces; ++f) {
        int& rep = out.representatives[out.face_class[f]];
        if (rep < 0 || lex_less(domain.face_centroid(f), domain.face_centroid(rep))) {
            rep = f;
        }
    }
    // Witness mapping each face onto its representative, first hit in element
    // enumeration order.
    out.to_representative.assign(nfaces, identity_isometry(domain.dimension()));
    for (int f = 0; f < nfaces; ++f) {
        const int rep = out.representatives[out.face_class[f]];
        if (rep == f) continue;
        bool found = false;
        for (const auto& [img, phi] : images[f]) {
            if (img == rep) {
                out.to_representative[f] = *phi;
                found = true;
                break;
            }
        }
        if (!found) {
            // Two elements composing f -> g -> rep yield an element carrying f
            // directly onto rep whose tile still touches the domain, so it is
            // itself local; a missing direct witness means the element list is
            // inconsistent.
            throw std::logic_error(
                "transversal: no local element carries a face onto its class "
                "representative");
        }
    }
    return out;
}

FacetPairing facet_pairing(const ConvexPolytope& domain, const std::vector<Isometry>& local) {
    std::vector<int> facet_faces;
    for (size_t i = 0; i < domain.faces().size(); ++i) {
        if (domain.faces()[i].dimension == domain.dimension() - 1) {
            facet_faces.push_back(static_cast<int>(i));
        }
    }
    const int nf = static_cast<int>(facet_faces.size());

    FacetPairing out;
    out.partner.assign(nf, -1);
    out.map.assign(nf, identity_isometry(domain.dimension()));
    out.exact = true;
    for (int k = 0; k < nf; ++k) {
        bool matched = false;
        for (const auto& phi : local) {
            if (is_identity(phi)) continue;
            const auto img = face_image(domain, facet_faces[k], phi);
            if (!img) continue;
            // Convert the face id back to a facet index.
            for (int j = 0; j < nf; ++j) {
                if (facet_faces[j] == *img) {
                    out.partner[k] = j;
                    out.map[k] = phi;
                    matched = true;
                    break;
                }
            }
            if (matched) break;
        }
        if (!matched) out.exact = false;
    }
    return out;
}

bool is_exact(const CrystalGroup& group) {
    return facet_pairing(group.domain, enumerate_local_group(group)).exact;
}

std::vector<MirrorFacet> mirror_facets(const ConvexPolytope& domain,
                                       const std::vector<Isometry>& local) {
    std::vector<MirrorFacet> out;
    const int n = domain.dimension();
    for (size_t i = 0; i < domain.faces().size(); ++i) {
        const Face& face = domain.faces()[i];
        if (face.dimension != n - 1) continue;
        for (const auto& phi : local) {
            if (is_identity(phi)) continue;
            if (phi.matrix.determinant() > 0) continue;
            if (!is_identity(compose(phi, phi), 1e-9)) continue;
            bool fixes = true;
            for (int v : face.vertex_ids) {
                if ((apply(phi, domain.vertices()[v]) - domain.vertices()[v]).norm() > 1e-9) {
                    fixes = false;
                    break;
                }
            }
            if (fixes) {
                out.push_back({static_cast<int>(i), phi});
                break;
            }
        }
    }
    return out;
}

ConvexPolytope dirichlet_domain(const CrystalGroup& group, const Eigen::VectorXd& center) {
    const int n = group.dimension;
    if (center.size() != n) {
        throw std::invalid_argument("dirichlet_domain: center dimension mismatch");
    }

    double radius = 4.0 * group.domain.diameter() + 1.0;
    for (int attempt = 0; attempt < 3; ++attempt) {
        // Enumerate orbit points of the center within `radius` by searching words.
        std::vector<Isometry> steps;
        for (const auto& g : group.generators) {
            steps.push_back(g);
            steps.push_back(inverse(g));
        }
        std::vector<Eigen::VectorXd> orbit = {center};
        std::vector<Isometry> elem_frontier = {identity_isometry(n)};
        auto near = [](const std::vector<Eigen::VectorXd>& pts, const Eigen::VectorXd& q) {
            for (const auto& p : pts) {
                if ((p - q).norm() <= 1e-9) return true;
            }
            return false;
        };
        // Track elements rather than points: distinct elements can share an
        // image only when the stabilizer is nontrivial. Deduplicate by a
        // quantized key (1e-6 grid): crystallographic entries are exact
        // algebraic numbers computed to machine precision, far from any grid
        // midpoint, so equal elements always collide and the search stays
        // linear in the number of elements instead of quadratic.
        auto key_of = [n](const Isometry& iso) {
            std::string key;
            key.reserve(static_cast<size_t>(n * n + n) * sizeof(std::int64_t));
            auto push = [&key](double value) {
                const std::int64_t q = std::llround(value * 1e6);
                key.append(reinterpret_cast<const char*>(&q), sizeof(q));
            };
            for (int r = 0; r < n; ++r) {
                for (int c = 0; c < n; ++c) push(iso.matrix(r, c));
            }
            for (int i = 0; i < n; ++i) push(iso.translation(i));
            return key;
        };
        std::unordered_set<std::string> seen = {key_of(identity_isometry(n))};
        for (int depth = 0; depth < 64 && !elem_frontier.empty(); ++depth) {
            std::vector<Isometry> next;
            for (const auto& e : elem_frontier) {
                for (const auto& s : steps) {
                    Isometry ne = compose(e, s);
                    if (!seen.insert(key_of(ne)).second) continue;
                    const Eigen::VectorXd q = apply(ne, center);
                    if ((q - center).norm() > radius) continue;
                    if ((q - center).norm() <= 1e-9) {
                        throw std::invalid_argument(
                            "dirichlet_domain: center has a nontrivial stabilizer");
                    }
                    if (!near(orbit, q)) orbit.push_back(q);
                    next.push_back(std::move(ne));
                }
            }
            elem_frontier = std::move(next);
        }
        if (orbit.size() < 2) {
            throw std::logic_error("dirichlet_domain: no orbit neighbors found");
        }

        std::sort(orbit.begin() + 1, orbit.end(),
                  [&center](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
                      return (a - center).squaredNorm() < (b - center).squaredNorm();
                  });
        auto bisector = [&center](const Eigen::VectorXd& p) {
            const Eigen::VectorXd d = p - center;
            Halfspace h;
            h.normal = d.normalized();
            h.offset = h.normal.dot(center + 0.5 * d);
            return h;
        };

        // A bisector to a point at distance d stays d/2 from the center, so
        // once every omitted orbit point is farther than twice the farthest
        // cell vertex, the omitted cuts provably cannot touch the cell. Grow
        // the nearest-cut set until that holds; intersecting every enumerated
        // bisector would be cubic in their count in 3D.
        size_t use = std::min<size_t>(orbit.size() - 1, 32);
        std::optional<ConvexPolytope> cell;
        double far = 0.0;
        for (;;) {
            std::vector<Halfspace> cuts;
            cuts.reserve(use);
            for (size_t i = 1; i <= use; ++i) cuts.push_back(bisector(orbit[i]));
            try {
                cell.emplace(halfspace_intersection(cuts));
            } catch (const std::invalid_argument&) {
                if (use == orbit.size() - 1) throw;
                use = std::min(orbit.size() - 1, 2 * use);
                continue;
            }
            far = 0.0;
            for (const auto& v : cell->vertices()) far = std::max(far, (v - center).norm());
            size_t needed = use;
            while (needed < orbit.size() - 1 &&
                   (orbit[needed + 1] - center).norm() <= 2.0 * far + 1e-9) {
                ++needed;
            }
            if (needed == use) break;
            use = needed;
        }

        // Safety: any orbit point beyond the enumeration radius cannot cut the
        // cell only if it is at least twice the farthest vertex away.
        if (radius >= 2.0 * far + 1e-9) {
            // Exactness is guaranteed for Dirichlet cells; verify as a self-check.
            CrystalGroup rebased = group;
            rebased.domain = *cell;
            const auto local = enumerate_local_group(rebased, 1.0);
            if (!facet_pairing(*cell, local).exact) {
                throw std::logic_error("dirichlet_domain: cell failed its exactness check");
            }
            return *cell;
        }
        radius = 2.0 * far + 1.0;
    }
    throw std::logic_error("dirichlet_domain: enumeration radius did not stabilize");
}

}  // namespace crystalfold
