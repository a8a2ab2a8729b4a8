#include "crystalfold/registry.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace crystalfold {

namespace {

Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

Eigen::VectorXd vec3(double x, double y, double z) {
    Eigen::VectorXd v(3);
    v << x, y, z;
    return v;
}

Isometry linear2(double a00, double a01, double a10, double a11, double bx = 0.0,
                 double by = 0.0) {
    Eigen::MatrixXd A(2, 2);
    A << a00, a01, a10, a11;
    return make_isometry(A, vec2(bx, by));
}

Eigen::MatrixXd lattice2(double ax, double ay, double bx, double by) {
    Eigen::MatrixXd L(2, 2);
    L << ax, bx, ay, by;
    return L;
}

ConvexPolytope box2(double x0, double y0, double x1, double y1) {
    return ConvexPolytope::from_vertices(
        {vec2(x0, y0), vec2(x1, y0), vec2(x1, y1), vec2(x0, y1)});
}

ConvexPolytope polygon(std::vector<Eigen::VectorXd> pts) {
    return ConvexPolytope::from_vertices(pts);
}

CrystalGroup build(const std::string& name) {
    const double S3 = std::sqrt(3.0);
    const Isometry t10 = shift_isometry(vec2(1, 0));
    const Isometry t01 = shift_isometry(vec2(0, 1));

    if (name == "p1") {
        return make_group("p1", {t10, t01}, lattice2(1, 0, 0, 1), box2(0, 0, 1, 1));
    }
    if (name == "p2") {
        return make_group("p2", {t10, t01, linear2(-1, 0, 0, -1)}, lattice2(1, 0, 0, 1),
                          box2(0, 0, 1, 0.5));
    }
    if (name == "pm") {
        return make_group("pm", {t10, t01, linear2(1, 0, 0, -1)}, lattice2(1, 0, 0, 1),
                          box2(0, 0, 1, 0.5));
    }
    if (name == "pg") {
        return make_group("pg",
                          {linear2(1, 0, 0, -1, 0.5, 0), linear2(1, 0, 0, -1, 0.5, 1)},
                          lattice2(1, 0, 0, 1), box2(0, 0, 1, 0.5));
    }
    if (name == "cm") {
        return make_group("cm", {linear2(1, 0, 0, -1), shift_isometry(vec2(0.5, 0.5))},
                          lattice2(0.5, 0.5, 0.5, -0.5),
                          polygon({vec2(0, 0), vec2(1, 0), vec2(0.5, 0.5)}));
    }
    if (name == "p2mm") {
        return make_group("p2mm",
                          {linear2(-1, 0, 0, 1), linear2(-1, 0, 0, 1, 2, 0),
                           linear2(1, 0, 0, -1), linear2(1, 0, 0, -1, 0, 2)},
                          lattice2(2, 0, 0, 2), box2(0, 0, 1, 1));
    }
    if (name == "p2mg") {
        return make_group("p2mg",
                          {linear2(1, 0, 0, -1, 0.5, 0), linear2(-1, 0, 0, 1), t01},
                          lattice2(1, 0, 0, 1), box2(0, 0, 0.25, 1));
    }
    if (name == "p2gg") {
        return make_group("p2gg",
                          {linear2(1, 0, 0, -1, 0.5, 0.5), linear2(-1, 0, 0, 1, 0.5, 0.5)},
                          lattice2(1, 0, 0, 1), box2(0, 0, 0.5, 0.5));
    }
    if (name == "c2mm") {
        return make_group("c2mm",
                          {linear2(1, 0, 0, -1), linear2(-1, 0, 0, 1),
                           shift_isometry(vec2(0.5, 0.5))},
                          lattice2(0.5, 0.5, 0.5, -0.5), box2(0, 0, 0.25, 0.5));
    }
    if (name == "p4") {
        return make_group("p4", {t10, t01, linear2(0, -1, 1, 0)}, lattice2(1, 0, 0, 1),
                          box2(0, 0, 0.5, 0.5));
    }
    if (name == "p4mm") {
        return make_group("p4mm",
                          {linear2(0, -1, 1, 0), linear2(1, 0, 0, -1), t10, t01},
                          lattice2(1, 0, 0, 1),
                          polygon({vec2(0, 0), vec2(0.5, 0), vec2(0.5, 0.5)}));
    }
    if (name == "p4gm") {
        return make_group("p4gm",
                          {t10, t01, linear2(0, -1, 1, 0), linear2(0, -1, -1, 0, 0.5, 0.5)},
                          lattice2(1, 0, 0, 1),
                          polygon({vec2(0, 0), vec2(0.5, 0), vec2(0, 0.5)}));
    }

    const Isometry ta2 = shift_isometry(vec2(0.5, S3 / 2));
    const Eigen::MatrixXd hex = lattice2(1, 0, 0.5, S3 / 2);
    const Isometry r3 = linear2(-0.5, -S3 / 2, S3 / 2, -0.5);
    const Isometry r6 = linear2(0.5, -S3 / 2, S3 / 2, 0.5);

    if (name == "p3") {
        return make_group("p3", {t10, ta2, r3}, hex,
                          polygon({vec2(0.25, -S3 / 12), vec2(0.5, -S3 / 6), vec2(1, 0),
                                   vec2(1, S3 / 6), vec2(0.5, S3 / 6)}));
    }
    if (name == "p3m1") {
        return make_group("p3m1", {t10, ta2, r3, linear2(0.5, S3 / 2, S3 / 2, -0.5)}, hex,
                          polygon({vec2(0, 0), vec2(0.5, S3 / 6), vec2(0.5, -S3 / 6)}));
    }
    if (name == "p31m") {
        return make_group("p31m", {t10, ta2, r3, linear2(1, 0, 0, -1)}, hex,
                          polygon({vec2(0, 0), vec2(1, 0), vec2(0.5, S3 / 6)}));
    }
    if (name == "p6") {
        return make_group("p6", {t10, ta2, r6}, hex,
                          polygon({vec2(0, 0), vec2(1, 0), vec2(0.5, S3 / 6)}));
    }
    if (name == "p6mm") {
        return make_group("p6mm", {t10, ta2, r6, linear2(1, 0, 0, -1)}, hex,
                          polygon({vec2(0, 0), vec2(0.5, 0), vec2(0.5, S3 / 6)}));
    }

    if (name == "p1_1d") {
        Eigen::MatrixXd L(1, 1);
        L << 1.0;
        return make_group(
            "p1_1d", {shift_isometry(Eigen::VectorXd::Ones(1))}, L,
            ConvexPolytope::from_vertices({Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)}));
    }
    if (name == "p1m_1d") {
        Eigen::MatrixXd L(1, 1);
        L << 1.0;
        Eigen::MatrixXd flip(1, 1);
        flip << -1.0;
        return make_group(
            "p1m_1d",
            {shift_isometry(Eigen::VectorXd::Ones(1)),
             make_isometry(flip, Eigen::VectorXd::Zero(1))},
            L,
            ConvexPolytope::from_vertices(
                {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.5)}));
    }

    if (name == "P1_3d") {
        std::vector<Eigen::VectorXd> cube;
        for (int i = 0; i < 8; ++i) cube.push_back(vec3(i & 1, (i >> 1) & 1, (i >> 2) & 1));
        return make_group("P1_3d",
                          {shift_isometry(vec3(1, 0, 0)), shift_isometry(vec3(0, 1, 0)),
                           shift_isometry(vec3(0, 0, 1))},
                          Eigen::MatrixXd::Identity(3, 3), ConvexPolytope::from_vertices(cube));
    }
    if (name == "I23") {
        Eigen::MatrixXd c2z(3, 3), c3(3, 3), L(3, 3);
        c2z << -1, 0, 0, 0, -1, 0, 0, 0, 1;
        c3 << 0, 0, 1, 1, 0, 0, 0, 1, 0;
        L.col(0) = vec3(0.5, 0.5, 0.5);
        L.col(1) = vec3(0.5, 0.5, -0.5);
        L.col(2) = vec3(0.5, -0.5, 0.5);
        return make_group(
            "I23",
            {shift_isometry(vec3(1, 0, 0)), shift_isometry(vec3(0, 1, 0)),
             shift_isometry(vec3(0, 0, 1)), shift_isometry(vec3(0.5, 0.5, 0.5)),
             make_isometry(c2z, Eigen::VectorXd::Zero(3)),
             make_isometry(c3, Eigen::VectorXd::Zero(3))},
            L,
            ConvexPolytope::from_vertices({vec3(0, 0, 0), vec3(0.5, 0, 0), vec3(0, 0.5, 0),
                                           vec3(0.5, 0.5, 0), vec3(0.5, 0.5, 0.5)}));
    }

    throw std::invalid_argument("registry: no builder for " + name);
}

const std::map<std::string, std::string>& alias_map() {
    static const std::map<std::string, std::string> aliases = {
        {"pmm", "p2mm"}, {"pmg", "p2mg"}, {"pgg", "p2gg"}, {"cmm", "c2mm"},
        {"p4m", "p4mm"}, {"p4g", "p4gm"}, {"p6m", "p6mm"},
    };
    return aliases;
}

}  // namespace

const std::vector<std::string>& builtin_group_names() {
    static const std::vector<std::string> names = {
        "p1",   "p2",   "pm",   "pg",   "cm",   "p2mm", "p2mg",
        "p2gg", "c2mm", "p4",   "p4mm", "p4gm", "p3",   "p3m1",
        "p31m", "p6",   "p6mm", "p1_1d", "p1m_1d", "P1_3d", "I23",
    };
    return names;
}

bool is_builtin_group(const std::string& name) {
    for (const auto& n : builtin_group_names()) {
        if (n == name) return true;
    }
    return alias_map().count(name) > 0;
}

std::string canonical_group_name(const std::string& name) {
    const auto it = alias_map().find(name);
    if (it != alias_map().end()) return it->second;
    for (const auto& n : builtin_group_names()) {
        if (n == name) return name;
    }
    std::string msg = "unknown group \"" + name + "\"; valid names are:";
    for (const auto& n : builtin_group_names()) msg += " " + n;
    msg += "; aliases:";
    for (const auto& [a, c] : alias_map()) msg += " " + a;
    throw std::invalid_argument(msg);
}

CrystalGroup builtin_group(const std::string& name) {
    return build(canonical_group_name(name));
}

}  // namespace crystalfold
