#pragma once

#include <string>
#include <vector>

#include "crystalfold/isometry.hpp"
#include "crystalfold/polytope.hpp"

namespace crystalfold {

/// A crystallographic group given by finitely many generators, together with a
/// basis of its translation lattice (columns of `lattice`) and a fundamental
/// tile `domain` whose images under the group cover space with disjoint
/// interiors.
struct CrystalGroup {
    std::string name;
    int dimension = 0;
    std::vector<Isometry> generators;
    Eigen::MatrixXd lattice;
    ConvexPolytope domain;
};

/// Validates and assembles a group:
///  - generator/lattice/domain dimensions agree, lattice is full rank,
///  - every generator's linear part maps the lattice onto itself,
///  - every lattice basis vector is realized by a generator word of length <= 4.
/// Throws std::invalid_argument when a check fails.
CrystalGroup make_group(std::string name, std::vector<Isometry> generators,
                        const Eigen::MatrixXd& lattice, ConvexPolytope domain);

/// Enumerates the elements whose domain image lies within
/// diameter(domain) * (1 + margin) of the domain itself (as sets). The result is
/// in breadth-first discovery order over the generators and always starts with
/// the identity; it is closed under inverses. Throws std::runtime_error if the
/// search needs words longer than 32 generators.
std::vector<Isometry> enumerate_local_group(const CrystalGroup& group, double margin = 0.0);

/// Elements of `elements` fixing x. Verifies the result is closed under
/// composition with inverses and throws std::logic_error otherwise.
std::vector<Isometry> stabilizer(const std::vector<Isometry>& elements,
                                 const Eigen::VectorXd& x, double tol = 1e-9);

/// The domain tile carried to its image under phi.
ConvexPolytope transform_polytope(const ConvexPolytope& tile, const Isometry& phi);

}  // namespace crystalfold
