#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "crystalfold/quotient.hpp"
#include "crystalfold/registry.hpp"

using namespace crystalfold;

namespace {

Eigen::VectorXd v2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

bool same_bits(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) return false;
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return false;
    }
    return true;
}

// Random point whose coordinates are integer multiples of 2^-20: all group
// arithmetic with half-integer data stays exact on such points.
Eigen::VectorXd dyadic_point(std::mt19937_64& rng, int dim) {
    std::uniform_int_distribution<long> dist(-(1L << 21), (1L << 21));
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = std::ldexp(static_cast<double>(dist(rng)), -20);
    return x;
}

const std::vector<std::string> kHalfIntegerGroups = {
    "p1",   "p2",   "pm",   "pg",   "cm",     "p2mm",   "p2mg",  "p2gg",
    "c2mm", "p4",   "p4mm", "p4gm", "p1_1d",  "p1m_1d", "P1_3d", "I23"};
const std::vector<std::string> kHexGroups = {"p3", "p3m1", "p31m", "p6", "p6mm"};

}  // namespace

TEST_CASE("projection into the torus square") {
    const QuotientContext ctx = make_context(builtin_group("p1"));
    CHECK(same_bits(project(ctx, v2(1.25, -0.75)), v2(0.25, 0.25)));
    CHECK(same_bits(project(ctx, v2(0.3, 0.4)), v2(0.3, 0.4)));
    // Right edge is not in the transversal; it maps to the left edge.
    CHECK(in_transversal(ctx, v2(0.0, 0.4)));
    CHECK_FALSE(in_transversal(ctx, v2(1.0, 0.4)));
    CHECK(same_bits(project(ctx, v2(1.0, 0.4)), v2(0.0, 0.4)));
}

TEST_CASE("projection for a quarter turn group") {
    const QuotientContext ctx = make_context(builtin_group("p4"));
    const Eigen::VectorXd p = project(ctx, v2(0.7, 0.3));
    CHECK(p(0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(p(1) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("quotient distances match hand values on the torus") {
    const QuotientContext ctx = make_context(builtin_group("p1"));
    CHECK(quotient_distance(ctx, v2(0.1, 0.5), v2(0.9, 0.5)) == doctest::Approx(0.2));
    CHECK(quotient_distance(ctx, v2(0.25, 0.25), v2(1.25, -0.75)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(quotient_distance(ctx, v2(0.1, 0.1), v2(0.2, 0.1)) == doctest::Approx(0.1));
    // Wrap in both coordinates.
    CHECK(quotient_distance(ctx, v2(0.05, 0.05), v2(0.95, 0.95)) ==
          doctest::Approx(std::sqrt(0.02)));
}

TEST_CASE("equivalence accepts orbit mates and rejects others") {
    const QuotientContext ctx = make_context(builtin_group("p4"));
    CHECK(equivalent(ctx, v2(0.2, 0.1), v2(-0.1, 0.2)));     // quarter turn image
    CHECK(equivalent(ctx, v2(0.2, 0.1), v2(3.2, -4.9)));     // translate
    CHECK_FALSE(equivalent(ctx, v2(0.2, 0.1), v2(0.25, 0.1)));
}

TEST_CASE("projection is idempotent to the bit for every group") {
    std::mt19937_64 rng(2024);
    for (const auto& name : builtin_group_names()) {
        const QuotientContext ctx = make_context(builtin_group(name));
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        for (int k = 0; k < 25; ++k) {
            Eigen::VectorXd x(ctx.group.dimension);
            for (int i = 0; i < x.size(); ++i) x(i) = dist(rng);
            const Eigen::VectorXd y = project(ctx, x);
            CHECK_MESSAGE(same_bits(project(ctx, y), y), "group ", name);
        }
    }
}

TEST_CASE("projection is invariant to the bit on dyadic points") {
    std::mt19937_64 rng(77);
    for (const auto& name : kHalfIntegerGroups) {
        const QuotientContext ctx = make_context(builtin_group(name));
        std::uniform_int_distribution<size_t> pick(0, ctx.local.size() - 1);
        for (int k = 0; k < 25; ++k) {
            const Eigen::VectorXd x = dyadic_point(rng, ctx.group.dimension);
            const Isometry& phi = ctx.local[pick(rng)];
            CHECK_MESSAGE(same_bits(project(ctx, x), project(ctx, apply(phi, x))),
                          "group ", name);
        }
    }
}

TEST_CASE("projection is invariant within 1e-9 for the hexagonal groups") {
    std::mt19937_64 rng(78);
    for (const auto& name : kHexGroups) {
        const QuotientContext ctx = make_context(builtin_group(name));
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        std::uniform_int_distribution<size_t> pick(0, ctx.local.size() - 1);
        for (int k = 0; k < 25; ++k) {
            Eigen::VectorXd x(2);
            x << dist(rng), dist(rng);
            const Isometry& phi = ctx.local[pick(rng)];
            CHECK_MESSAGE((project(ctx, x) - project(ctx, apply(phi, x))).norm() < 1e-9,
                          "group ", name);
        }
    }
}

TEST_CASE("transversal representatives are unique on random orbits") {
    std::mt19937_64 rng(99);
    for (const auto& name : builtin_group_names()) {
        const QuotientContext ctx = make_context(builtin_group(name));
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int k = 0; k < 40; ++k) {
            Eigen::VectorXd x(ctx.group.dimension);
            for (int i = 0; i < x.size(); ++i) x(i) = dist(rng);
            const Eigen::VectorXd y = project(ctx, x);
            int hits = 0;
            for (const auto& phi : ctx.local) {
                if (in_transversal(ctx, apply(phi, y))) ++hits;
            }
            CHECK_MESSAGE(hits == 1, "group ", name, " point ", k);
        }
    }
}

TEST_CASE("quotient distance is a metric") {
    std::mt19937_64 rng(31);
    for (const std::string name : {"p4gm", "p6", "pg"}) {
        const QuotientContext ctx = make_context(builtin_group(name));
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int k = 0; k < 30; ++k) {
            const Eigen::VectorXd a = v2(dist(rng), dist(rng));
            const Eigen::VectorXd b = v2(dist(rng), dist(rng));
            const Eigen::VectorXd c = v2(dist(rng), dist(rng));
            const double dab = quotient_distance(ctx, a, b);
            const double dba = quotient_distance(ctx, b, a);
            const double dac = quotient_distance(ctx, a, c);
            const double dbc = quotient_distance(ctx, b, c);
            CHECK(dab >= 0.0);
            CHECK(std::abs(dab - dba) < 1e-9);
            CHECK(dac <= dab + dbc + 1e-9);
            CHECK(quotient_distance(ctx, a, a) == 0.0);
        }
    }
}

TEST_CASE("context construction rejects an insufficient margin") {
    CHECK_THROWS_AS(make_context(builtin_group("p6mm"), -0.9), std::invalid_argument);
}
