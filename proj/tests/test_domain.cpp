#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "crystalfold/domain.hpp"
#include "crystalfold/registry.hpp"

using namespace crystalfold;

namespace {

Eigen::VectorXd v2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

int face_of_vertex(const ConvexPolytope& p, double x, double y) {
    return p.classify_face(v2(x, y));
}

}  // namespace

TEST_CASE("face images under group elements") {
    const CrystalGroup p1 = builtin_group("p1");
    const auto local = enumerate_local_group(p1);
    // Left edge carried to the right edge by the unit shift.
    const int left = p1.domain.classify_face(v2(0, 0.5));
    const int right = p1.domain.classify_face(v2(1, 0.5));
    const auto img = face_image(p1.domain, left, p1.generators[0]);
    REQUIRE(img.has_value());
    CHECK(*img == right);
    // A shift by one half maps no face onto a face.
    CHECK_FALSE(face_image(p1.domain, left, shift_isometry(v2(0.5, 0))).has_value());
}

TEST_CASE("transversal classes of the torus square") {
    const CrystalGroup p1 = builtin_group("p1");
    const auto local = enumerate_local_group(p1);
    const Transversal t = compute_transversal(p1.domain, local);
    CHECK(t.representatives.size() == 4);  // corners, two edge pairs, interior
    // All four corners share a class represented by the origin corner.
    const int c00 = face_of_vertex(p1.domain, 0, 0);
    const int c11 = face_of_vertex(p1.domain, 1, 1);
    CHECK(t.face_class[c00] == t.face_class[c11]);
    CHECK(t.representatives[t.face_class[c00]] == c00);
    // Edge representatives are the lexicographically smaller edges.
    const int leftf = face_of_vertex(p1.domain, 0, 0.5);
    const int rightf = face_of_vertex(p1.domain, 1, 0.5);
    CHECK(t.face_class[leftf] == t.face_class[rightf]);
    CHECK(t.representatives[t.face_class[leftf]] == leftf);
    // The witness element really carries the right edge onto the left edge.
    const Isometry& w = t.to_representative[rightf];
    CHECK((apply(w, v2(1, 0.25)) - v2(0, 0.25)).norm() < 1e-12);
}

TEST_CASE("fully mirrored box has only singleton classes") {
    const CrystalGroup g = builtin_group("p2mm");
    const auto local = enumerate_local_group(g);
    const Transversal t = compute_transversal(g.domain, local);
    CHECK(t.representatives.size() == g.domain.faces().size());
    for (size_t f = 0; f < g.domain.faces().size(); ++f) {
        CHECK(t.representatives[t.face_class[f]] == static_cast<int>(f));
    }
}

TEST_CASE("transversal on the circle group") {
    const CrystalGroup g = builtin_group("p1_1d");
    const Transversal t = compute_transversal(g.domain, enumerate_local_group(g));
    CHECK(t.representatives.size() == 2);  // endpoint pair and interior
}

TEST_CASE("facet pairing across all built-in wallpaper groups") {
    const std::set<std::string> not_exact = {"pg", "p3"};
    for (const auto& name : builtin_group_names()) {
        const CrystalGroup g = builtin_group(name);
        if (g.dimension != 2) continue;
        CHECK_MESSAGE(is_exact(g) == (not_exact.count(name) == 0), "group ", name);
    }
}

TEST_CASE("1D domains and the shift-only cube are exact") {
    for (const std::string name : {"p1_1d", "p1m_1d", "P1_3d"}) {
        CHECK_MESSAGE(is_exact(builtin_group(name)), "group ", name);
    }
}

TEST_CASE("the I23 pyramid is not exact") {
    // The asymmetric-unit pyramid glues its two slanted facets to each other
    // through the 3-fold rotation, but the base square and the two vertical
    // facets have no setwise image among the facets: the only candidate maps
    // would need translation parts outside the body-centered lattice.
    const CrystalGroup g = builtin_group("I23");
    const auto local = enumerate_local_group(g);
    const FacetPairing fp = facet_pairing(g.domain, local);
    CHECK_FALSE(fp.exact);
    int unmatched = 0;
    for (int p : fp.partner) unmatched += (p < 0);
    CHECK(unmatched == 3);
}

TEST_CASE("pairing witnesses map facets onto facets") {
    const CrystalGroup g = builtin_group("p6");
    const auto local = enumerate_local_group(g);
    const FacetPairing fp = facet_pairing(g.domain, local);
    REQUIRE(fp.exact);
    std::vector<int> facet_faces;
    for (size_t i = 0; i < g.domain.faces().size(); ++i) {
        if (g.domain.faces()[i].dimension == 1) facet_faces.push_back(static_cast<int>(i));
    }
    for (size_t k = 0; k < facet_faces.size(); ++k) {
        REQUIRE(fp.partner[k] >= 0);
        const auto img = face_image(g.domain, facet_faces[k], fp.map[k]);
        REQUIRE(img.has_value());
        CHECK(*img == facet_faces[static_cast<size_t>(fp.partner[k])]);
    }
}

TEST_CASE("unmatched facets of the glide group") {
    const CrystalGroup g = builtin_group("pg");
    const FacetPairing fp = facet_pairing(g.domain, enumerate_local_group(g));
    CHECK_FALSE(fp.exact);
    // The horizontal edges fail (glides cover them only in halves); the
    // vertical pair matches through the unit shift.
    int unmatched = 0;
    for (int p : fp.partner) unmatched += (p < 0);
    CHECK(unmatched == 2);
}

TEST_CASE("mirror facet detection") {
    auto facets_of = [](const std::string& name) {
        const CrystalGroup g = builtin_group(name);
        return mirror_facets(g.domain, enumerate_local_group(g)).size();
    };
    CHECK(facets_of("pm") == 2);    // bottom and top of the half strip
    CHECK(facets_of("p2mm") == 4);  // every side of the box
    CHECK(facets_of("p2") == 0);    // no reflections at all
    CHECK(facets_of("pg") == 0);
    CHECK(facets_of("cm") == 1);    // only the base edge lies on the mirror
    CHECK(facets_of("p1m_1d") == 2);
    const CrystalGroup pm = builtin_group("pm");
    const auto mf = mirror_facets(pm.domain, enumerate_local_group(pm));
    for (const auto& m : mf) {
        CHECK(m.reflection.matrix.determinant() < 0);
        CHECK(is_identity(compose(m.reflection, m.reflection), 1e-12));
    }
}

TEST_CASE("Dirichlet cell of the glide group is the frozen hexagon") {
    const CrystalGroup g = builtin_group("pg");
    const ConvexPolytope cell = dirichlet_domain(g, v2(0.3, 0.2));
    REQUIRE(cell.vertices().size() == 6);
    CHECK(cell.volume() == doctest::Approx(0.5).epsilon(1e-12));
    const std::vector<Eigen::VectorXd> expected = {v2(0.79, 0.3),  v2(0.31, 0.7),
                                                   v2(0.29, 0.7),  v2(-0.19, 0.3),
                                                   v2(0.29, -0.3), v2(0.31, -0.3)};
    for (const auto& e : expected) {
        double best = 1e9;
        for (const auto& v : cell.vertices()) best = std::min(best, (v - e).norm());
        CHECK(best < 1e-9);
    }
    // The rebased tile must pair exactly even though the original did not.
    CrystalGroup rebased = g;
    rebased.domain = cell;
    CHECK(facet_pairing(cell, enumerate_local_group(rebased)).exact);
}

TEST_CASE("Dirichlet cell of the threefold group is exact with the right area") {
    const CrystalGroup g = builtin_group("p3");
    const ConvexPolytope cell = dirichlet_domain(g, v2(0.65, 0.0288));
    CHECK(cell.volume() == doctest::Approx(std::sqrt(3.0) / 2.0 / 3.0));
    CrystalGroup rebased = g;
    rebased.domain = cell;
    CHECK(facet_pairing(cell, enumerate_local_group(rebased)).exact);
}

TEST_CASE("Dirichlet construction rejects symmetric centers") {
    const CrystalGroup p4 = builtin_group("p4");
    CHECK_THROWS_AS(dirichlet_domain(p4, v2(0, 0)), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_domain(p4, v2(0.5, 0.5)), std::invalid_argument);
}
