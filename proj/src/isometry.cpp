#include "crystalfold/isometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace crystalfold {

namespace {
constexpr double kOrthogonalityTol = 1e-9;
}

Isometry make_isometry(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& translation,
                       std::vector<int> word) {
    const auto n = translation.size();
    if (matrix.rows() != n || matrix.cols() != n) {
        throw std::invalid_argument("isometry: matrix is " + std::to_string(matrix.rows()) +
                                    "x" + std::to_string(matrix.cols()) +
                                    " but translation has length " + std::to_string(n));
    }
    const Eigen::MatrixXd gram = matrix.transpose() * matrix;
    const double defect =
        (gram - Eigen::MatrixXd::Identity(n, n)).array().abs().maxCoeff();
    if (defect > kOrthogonalityTol) {
        throw std::invalid_argument(
            "isometry: matrix is not orthogonal (max deviation of A^T A from I is " +
            std::to_string(defect) + ")");
    }
    if (std::abs(std::abs(matrix.determinant()) - 1.0) > kOrthogonalityTol) {
        throw std::invalid_argument("isometry: |det| differs from 1");
    }
    Isometry phi;
    phi.matrix = matrix;
    phi.translation = translation;
    phi.word = std::move(word);
    return phi;
}

Isometry identity_isometry(int dimension) {
    Isometry phi;
    phi.matrix = Eigen::MatrixXd::Identity(dimension, dimension);
    phi.translation = Eigen::VectorXd::Zero(dimension);
    return phi;
}

Isometry shift_isometry(const Eigen::VectorXd& b) {
    Isometry phi;
    phi.matrix = Eigen::MatrixXd::Identity(b.size(), b.size());
    phi.translation = b;
    return phi;
}

Isometry compose(const Isometry& phi, const Isometry& psi) {
    if (phi.dimension() != psi.dimension()) {
        throw std::invalid_argument("compose: dimension mismatch (" +
                                    std::to_string(phi.dimension()) + " vs " +
                                    std::to_string(psi.dimension()) + ")");
    }
    Isometry out;
    out.matrix = phi.matrix * psi.matrix;
    out.translation = phi.matrix * psi.translation + phi.translation;
    out.word = phi.word;
    out.word.insert(out.word.end(), psi.word.begin(), psi.word.end());
    return out;
}

Isometry inverse(const Isometry& phi) {
    Isometry out;
    out.matrix = phi.matrix.transpose();
    out.translation = -(phi.matrix.transpose() * phi.translation);
    out.word.reserve(phi.word.size());
    for (auto it = phi.word.rbegin(); it != phi.word.rend(); ++it) out.word.push_back(-*it);
    return out;
}

Eigen::VectorXd apply(const Isometry& phi, const Eigen::VectorXd& x) {
    if (x.size() != phi.dimension()) {
        throw std::invalid_argument("apply: point dimension " + std::to_string(x.size()) +
                                    " does not match isometry dimension " +
                                    std::to_string(phi.dimension()));
    }
    return phi.matrix * x + phi.translation;
}

bool isometry_equal(const Isometry& a, const Isometry& b, double tol) {
    if (a.dimension() != b.dimension()) return false;
    return (a.matrix - b.matrix).array().abs().maxCoeff() <= tol &&
           (a.translation - b.translation).array().abs().maxCoeff() <= tol;
}

bool is_identity(const Isometry& phi, double tol) {
    const auto n = phi.dimension();
    return (phi.matrix - Eigen::MatrixXd::Identity(n, n)).array().abs().maxCoeff() <= tol &&
           phi.translation.array().abs().maxCoeff() <= tol;
}

}  // namespace crystalfold
