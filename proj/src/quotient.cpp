#include "crystalfold/quotient.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace crystalfold {

QuotientContext make_context(const CrystalGroup& group, double margin) {
    QuotientContext ctx;
    ctx.group = group;
    ctx.margin = margin;
    ctx.local = enumerate_local_group(group, margin);
    ctx.transversal = compute_transversal(group.domain, ctx.local);
    ctx.lattice_inverse = group.lattice.inverse();

    // The projector shifts points into the anchored lattice cell and then scans
    // the local elements, so every cell point must be reachable: the distance
    // from any cell corner to the domain may not exceed the local radius.
    // (Distance to a convex set is convex, so corners attain the maximum.)
    const double keep = group.domain.diameter() * (1.0 + margin);
    const int n = group.dimension;
    double worst = 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Eigen::VectorXd t(n);
        for (int i = 0; i < n; ++i) t(i) = (mask >> i) & 1;
        worst = std::max(worst, group.domain.distance_to(group.lattice * t));
    }
    if (worst > keep + 1e-9) {
        throw std::invalid_argument(
            "make_context: margin " + std::to_string(margin) +
            " gives local radius " + std::to_string(keep) +
            " but the lattice cell reaches distance " + std::to_string(worst) +
            " from the domain; increase the margin");
    }
    return ctx;
}

bool in_transversal(const QuotientContext& ctx, const Eigen::VectorXd& x) {
    const int fid = ctx.group.domain.classify_face(x);
    if (fid < 0) return false;
    return ctx.transversal.representatives[ctx.transversal.face_class[fid]] == fid;
}

Eigen::VectorXd project(const QuotientContext& ctx, const Eigen::VectorXd& x) {
    if (x.size() != ctx.group.dimension) {
        throw std::invalid_argument("project: point dimension " + std::to_string(x.size()) +
                                    " does not match group dimension " +
                                    std::to_string(ctx.group.dimension));
    }
    if (in_transversal(ctx, x)) return x;

    Eigen::VectorXd z = ctx.lattice_inverse * x;
    for (int i = 0; i < z.size(); ++i) z(i) -= std::floor(z(i));
    const Eigen::VectorXd y = ctx.group.lattice * z;
    for (const auto& phi : ctx.local) {
        const Eigen::VectorXd candidate = apply(phi, y);
        if (in_transversal(ctx, candidate)) return candidate;
    }
    throw std::logic_error("project: no local element reached the transversal");
}

double quotient_distance(const QuotientContext& ctx, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b) {
    const Eigen::VectorXd pa = project(ctx, a);
    const Eigen::VectorXd pb = project(ctx, b);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& phi : ctx.local) {
        best = std::min(best, (pa - apply(phi, pb)).norm());
    }
    return best;
}

bool equivalent(const QuotientContext& ctx, const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                double tol) {
    return quotient_distance(ctx, a, b) <= tol;
}

}  // namespace crystalfold
