#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "crystalfold/orbitgraph.hpp"
#include "crystalfold/parallel.hpp"
#include "crystalfold/registry.hpp"

using namespace crystalfold;

namespace {

Eigen::VectorXd v2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

Eigen::VectorXd v1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

int find_vertex(const OrbitGraph& g, const Eigen::VectorXd& x, double tol = 1e-9) {
    int found = -1;
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        if ((g.vertices[i] - x).norm() <= tol) {
            REQUIRE(found < 0);
            found = static_cast<int>(i);
        }
    }
    REQUIRE(found >= 0);
    return found;
}

bool has_edge(const OrbitGraph& g, int i, int j, double weight, double tol = 1e-9) {
    for (const auto& e : g.edges) {
        if (e.i == i && e.j == j) return std::abs(e.weight - weight) <= tol;
    }
    return false;
}

bool has_any_edge(const OrbitGraph& g, int i, int j) {
    for (const auto& e : g.edges) {
        if (e.i == i && e.j == j) return true;
    }
    return false;
}

void check_graph_shape(const OrbitGraph& g) {
    for (const auto& e : g.edges) {
        CHECK(e.i != e.j);
        CHECK(e.weight < g.delta);
        CHECK(has_edge(g, e.j, e.i, e.weight, 0.0));
    }
}

}  // namespace

TEST_CASE("coarse net on the unit square") {
    const auto net = build_net(builtin_group("p1").domain, 0.5);
    REQUIRE(net.size() == 16);
    // Spacing 1/3 per axis, both boundaries included.
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const Eigen::VectorXd expected = v2(a / 3.0, b / 3.0);
            bool found = false;
            for (const auto& p : net) found = found || (p - expected).norm() <= 1e-12;
            CHECK_MESSAGE(found, "missing grid point ", a, ",", b);
        }
    }
    // Lexicographic order.
    for (size_t i = 1; i < net.size(); ++i) {
        const auto& a = net[i - 1];
        const auto& b = net[i];
        CHECK((a(0) < b(0) || (a(0) == b(0) && a(1) < b(1))));
    }
}

TEST_CASE("net on the unit interval") {
    const auto net = build_net(builtin_group("p1_1d").domain, 0.3);
    REQUIRE(net.size() == 5);
    for (int k = 0; k < 5; ++k) {
        CHECK(net[static_cast<size_t>(k)](0) == doctest::Approx(0.25 * k).epsilon(1e-12));
    }
}

TEST_CASE("huge epsilon degenerates to a single point") {
    const auto net = build_net(builtin_group("p1").domain, 10.0);
    REQUIRE(net.size() == 1);
    CHECK(net[0].norm() <= 1e-12);
}

TEST_CASE("nets stay inside the domain across groups") {
    for (const std::string name : {"p1", "cm", "p3", "p6mm", "p1_1d", "P1_3d"}) {
        const CrystalGroup g = builtin_group(name);
        const auto net = build_net(g.domain, 0.2);
        CHECK(net.size() >= 4);
        for (const auto& p : net) {
            CHECK_MESSAGE(g.domain.contains(p, 1e-9), "group ", name);
        }
    }
}

TEST_CASE("net weights are cell volumes") {
    const auto w = net_weights(builtin_group("p1").domain, 0.5);
    REQUIRE(w.size() == 16);
    double total = 0.0;
    for (double x : w) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // Trapezoid masses: corner (1/6)^2, edge 1/6*1/3, interior (1/3)^2.
    const auto net = build_net(builtin_group("p1").domain, 0.5);
    for (size_t i = 0; i < net.size(); ++i) {
        int extremes = 0;
        for (int d = 0; d < 2; ++d) {
            if (net[i](d) == 0.0 || net[i](d) == 1.0) ++extremes;
        }
        const double expected = std::pow(1.0 / 6.0, extremes) * std::pow(1.0 / 3.0, 2 - extremes);
        CHECK(w[i] == doctest::Approx(expected).epsilon(1e-12));
    }

    const CrystalGroup tri = builtin_group("p3m1");
    const auto tw = net_weights(tri.domain, 0.1);
    double tri_total = 0.0;
    for (double x : tw) {
        CHECK(x > 0.0);
        tri_total += x;
    }
    CHECK(tri_total == doctest::Approx(std::sqrt(3.0) / 12.0).epsilon(1e-12));
}

TEST_CASE("interval orbit graph matches brute force over all pairs") {
    const QuotientContext ctx = make_context(builtin_group("p1_1d"));
    const OrbitGraph g = build_orbit_graph(ctx, 0.3, 0.3);
    REQUIRE(g.vertices.size() == 5);
    check_graph_shape(g);

    // Independent recomputation: minimum over integer shifts.
    std::vector<double> xs;
    for (const auto& p : g.vertices) xs.push_back(p(0));
    int undirected = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        for (size_t j = i + 1; j < xs.size(); ++j) {
            double best = std::numeric_limits<double>::infinity();
            for (int k = -2; k <= 2; ++k) best = std::min(best, std::abs(xs[i] - xs[j] - k));
            const bool expect = best < 0.3;
            if (expect) ++undirected;
            CHECK(has_edge(g, static_cast<int>(i), static_cast<int>(j), best) == expect);
        }
    }
    CHECK(undirected == 7);
    CHECK(g.edges.size() == 14);
    CHECK(has_edge(g, find_vertex(g, v1(0.0)), find_vertex(g, v1(1.0)), 0.0));
}

TEST_CASE("square orbit graph connects boundary twins") {
    const QuotientContext ctx = make_context(builtin_group("p1"));
    const OrbitGraph g = build_orbit_graph(ctx, 0.5, 0.4);
    REQUIRE(g.vertices.size() == 16);
    check_graph_shape(g);

    const int left = find_vertex(g, v2(0.0, 1.0 / 3.0));
    const int right = find_vertex(g, v2(1.0, 1.0 / 3.0));
    CHECK(has_edge(g, left, right, 0.0));

    // All four corners lie on one orbit.
    const int c00 = find_vertex(g, v2(0, 0));
    const int c10 = find_vertex(g, v2(1, 0));
    const int c01 = find_vertex(g, v2(0, 1));
    const int c11 = find_vertex(g, v2(1, 1));
    for (int a : {c00, c10, c01}) {
        for (int b : {c10, c01, c11}) {
            if (a != b) CHECK(has_edge(g, a, b, 0.0));
        }
    }

    const int mid = find_vertex(g, v2(1.0 / 3.0, 1.0 / 3.0));
    for (auto nb : {v2(0, 1.0 / 3), v2(2.0 / 3, 1.0 / 3), v2(1.0 / 3, 0), v2(1.0 / 3, 2.0 / 3)}) {
        CHECK(has_edge(g, mid, find_vertex(g, nb), 1.0 / 3.0));
    }
    CHECK(has_edge(g, mid, right, 1.0 / 3.0));
    CHECK_FALSE(has_any_edge(g, mid, find_vertex(g, v2(2.0 / 3.0, 2.0 / 3.0))));
    CHECK_FALSE(has_any_edge(g, mid, c00));
}

TEST_CASE("edge weights equal independently recomputed quotient distances") {
    const QuotientContext ctx = make_context(builtin_group("cm"));
    const OrbitGraph g = build_orbit_graph(ctx, 0.25);
    check_graph_shape(g);
    CHECK(g.delta == doctest::Approx(0.25));
    for (const auto& e : g.edges) {
        const double d = quotient_distance(ctx, g.vertices[static_cast<size_t>(e.i)],
                                           g.vertices[static_cast<size_t>(e.j)]);
        CHECK(std::abs(d - e.weight) <= 1e-9);
    }
    // Non-edges really are farther than delta.
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        for (size_t j = i + 1; j < g.vertices.size(); ++j) {
            if (!has_any_edge(g, static_cast<int>(i), static_cast<int>(j))) {
                CHECK(quotient_distance(ctx, g.vertices[i], g.vertices[j]) >= g.delta - 1e-12);
            }
        }
    }
}

TEST_CASE("too small delta is rejected as disconnected") {
    const QuotientContext ctx = make_context(builtin_group("p1"));
    CHECK_THROWS_WITH_AS(build_orbit_graph(ctx, 0.5, 0.01),
                         doctest::Contains("delta"), std::runtime_error);
}

TEST_CASE("mirror augmentation is a no-op without reflections") {
    for (const std::string name : {"p1", "p2", "pg"}) {
        const QuotientContext ctx = make_context(builtin_group(name));
        const OrbitGraph g = build_orbit_graph(ctx, 0.4);
        const OrbitGraph a = mirror_augment(ctx, g);
        CHECK_MESSAGE(a.vertices.size() == g.vertices.size(), "group ", name);
        CHECK(a.edges.size() == g.edges.size());
        CHECK(a.constraint_pairs.empty());
    }
}

TEST_CASE("mirror augmentation reflects near-mirror vertices of pm") {
    const QuotientContext ctx = make_context(builtin_group("pm"));
    const OrbitGraph g = build_orbit_graph(ctx, 0.25);
    REQUIRE(g.vertices.size() == 28);
    const OrbitGraph a = mirror_augment(ctx, g);
    check_graph_shape(a);

    // 7 columns; rows y=0 and y=1/2 lie on the mirrors, rows y=1/6 and y=1/3
    // are one grid step away.
    REQUIRE(a.vertices.size() == 42);
    int self_pairs = 0;
    int copies = 0;
    for (const auto& [orig, copy] : a.constraint_pairs) {
        if (orig == copy) {
            ++self_pairs;
            const double y = a.vertices[static_cast<size_t>(orig)](1);
            CHECK((std::abs(y) <= 1e-12 || std::abs(y - 0.5) <= 1e-12));
        } else {
            ++copies;
            const auto& v = a.vertices[static_cast<size_t>(orig)];
            const auto& w = a.vertices[static_cast<size_t>(copy)];
            CHECK(w(0) == doctest::Approx(v(0)).epsilon(1e-12));
            const bool low = std::abs(w(1) + v(1)) <= 1e-12;
            const bool high = std::abs(w(1) - (1.0 - v(1))) <= 1e-12;
            CHECK((low || high));
            CHECK_FALSE(ctx.group.domain.contains(w, 1e-9));
        }
    }
    CHECK(self_pairs == 14);
    CHECK(copies == 14);

    // A copy is linked to the on-mirror vertex below its original by the
    // ambient distance, not to its own original (one full step away).
    const int base = find_vertex(a, v2(0.5, 0.0));
    const int ghost = find_vertex(a, v2(0.5, -1.0 / 6.0));
    const int parent = find_vertex(a, v2(0.5, 1.0 / 6.0));
    CHECK(has_edge(a, ghost, base, 1.0 / 6.0));
    CHECK_FALSE(has_any_edge(a, ghost, parent));
}

TEST_CASE("every boundary vertex of the double mirror group is constrained") {
    const QuotientContext ctx = make_context(builtin_group("p2mm"));
    const OrbitGraph g = build_orbit_graph(ctx, 0.5, 0.4);
    REQUIRE(g.vertices.size() == 16);
    const OrbitGraph a = mirror_augment(ctx, g);
    check_graph_shape(a);
    CHECK(a.vertices.size() == 32);

    std::set<int> self;
    int copies = 0;
    for (const auto& [orig, copy] : a.constraint_pairs) {
        if (orig == copy) {
            self.insert(orig);
        } else {
            ++copies;
        }
    }
    CHECK(copies == 16);
    int boundary = 0;
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        const auto& v = g.vertices[i];
        const bool on_boundary = v(0) == 0.0 || v(0) == 1.0 || v(1) == 0.0 || v(1) == 1.0;
        if (on_boundary) {
            ++boundary;
            CHECK(self.count(static_cast<int>(i)) == 1);
        }
    }
    CHECK(boundary == 12);
    CHECK(self.size() == 12);
}

TEST_CASE("parallel loop matches serial execution and propagates errors") {
    std::vector<double> serial(1000), parallel(1000);
    for (size_t i = 0; i < serial.size(); ++i) serial[i] = std::sqrt(static_cast<double>(i) + 1.0);
    parallel_for(static_cast<std::ptrdiff_t>(parallel.size()), [&](std::ptrdiff_t i) {
        parallel[static_cast<size_t>(i)] = std::sqrt(static_cast<double>(i) + 1.0);
    });
    CHECK(serial == parallel);
    CHECK(worker_count() >= 1);
    CHECK_THROWS_AS(parallel_for(100, [](std::ptrdiff_t i) {
        if (i == 57) throw std::runtime_error("boom");
    }), std::runtime_error);
}
