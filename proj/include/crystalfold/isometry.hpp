#pragma once

#include <Eigen/Dense>
#include <vector>

namespace crystalfold {

// A Euclidean isometry x -> A x + b with A orthogonal (a rigid motion, possibly
// orientation-reversing). `word` optionally records how the element was built from a
// generator list: 1-based generator indices, negated for inverses, composition order
// left to right (first applied last).
struct Isometry {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd translation;
    std::vector<int> word;

    int dimension() const { return static_cast<int>(translation.size()); }
};

// Builds an isometry after checking orthogonality (A^T A = I and |det A| = 1, both
// within 1e-9). Throws std::invalid_argument on malformed input.
Isometry make_isometry(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& translation,
                       std::vector<int> word = {});

Isometry identity_isometry(int dimension);

// Pure shift x -> x + b.
Isometry shift_isometry(const Eigen::VectorXd& b);

// Composition phi . psi, i.e. x -> phi(psi(x)). Words concatenate.
Isometry compose(const Isometry& phi, const Isometry& psi);

Isometry inverse(const Isometry& phi);

Eigen::VectorXd apply(const Isometry& phi, const Eigen::VectorXd& x);

// Entrywise comparison of (matrix, translation) with absolute tolerance.
bool isometry_equal(const Isometry& a, const Isometry& b, double tol = 1e-9);

bool is_identity(const Isometry& phi, double tol = 1e-9);

}  // namespace crystalfold
