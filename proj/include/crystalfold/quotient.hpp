#pragma once

#include "crystalfold/domain.hpp"
#include "crystalfold/group.hpp"

namespace crystalfold {

/// Precomputed state for working in the quotient of space by a group: the local
/// elements around the fundamental domain and the face transversal used by the
/// canonical projector.
struct QuotientContext {
    CrystalGroup group;
    double margin = 1.0;
    std::vector<Isometry> local;
    Transversal transversal;
    Eigen::MatrixXd lattice_inverse;
};

/// Builds the context. `margin` widens the local neighborhood; the default is
/// enough for the projector scan, which is verified against the lattice cell
/// corners at construction time (std::invalid_argument when too small).
QuotientContext make_context(const CrystalGroup& group, double margin = 1.0);

/// True when x lies in the canonical transversal: inside the domain, on a face
/// that represents its equivalence class.
bool in_transversal(const QuotientContext& ctx, const Eigen::VectorXd& x);

/// Canonical representative of the orbit of x. Points already in the
/// transversal are returned unchanged (bitwise); otherwise x is shifted into
/// the anchored lattice cell and the local elements are scanned in enumeration
/// order for the first image inside the transversal.
Eigen::VectorXd project(const QuotientContext& ctx, const Eigen::VectorXd& x);

/// Distance between the orbits of a and b: the minimum of |p(a) - phi(p(b))|
/// over the local elements.
double quotient_distance(const QuotientContext& ctx, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b);

/// True when a and b lie on the same orbit (quotient distance below tol).
bool equivalent(const QuotientContext& ctx, const Eigen::VectorXd& a,
                const Eigen::VectorXd& b, double tol = 1e-7);

}  // namespace crystalfold
