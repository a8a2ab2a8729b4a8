#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "crystalfold/embed.hpp"

namespace crystalfold {

/// Positive-definite kernel on R^n that is invariant in both arguments:
/// a Gaussian base kernel pulled back through the embedding map, so two
/// points compare by the Euclidean distance of their embedded images.
/// Holds a non-owning reference; the embedding must outlive the kernel.
struct InvariantKernel {
    const Embedding* embedding = nullptr;
    double lengthscale = 1.0;
};

/// Builds the Gaussian kernel. Throws std::invalid_argument for a
/// non-positive length scale.
InvariantKernel make_rbf_kernel(const Embedding& embedding, double lengthscale);

/// exp(-|rho(x) - rho(y)|^2 / (2 l^2)); equals 1 at x = y and is unchanged
/// when either argument moves within its orbit.
double kernel_eval(const InvariantKernel& kernel, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

/// Kernel matrix of a point list: symmetric, unit diagonal, positive
/// semidefinite up to eigensolver noise. Assembly is parallel over rows.
Eigen::MatrixXd gram(const InvariantKernel& kernel, const std::vector<Eigen::VectorXd>& points);

/// Random-feature sampler for the Gaussian process with the invariant kernel
/// as covariance. A draw is the feature expansion
///     F(x) = sqrt(2/m) * sum_j w_j cos(omega_j . rho(x) + b_j)
/// with frequencies from the Gaussian spectral density (std 1/l), phases
/// uniform on [0, 2 pi) and standard normal weights, all derived from the
/// seed through counter-based streams. F is exactly invariant because it is
/// a fixed function of rho(x), and the same seed reproduces it bitwise.
/// Holds a non-owning reference; the embedding must outlive the sampler.
struct GPSampler {
    const Embedding* embedding = nullptr;
    double lengthscale = 1.0;
    int feature_count = 0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd frequencies;  ///< feature_count x embedding dimension
    Eigen::VectorXd phases;
    Eigen::VectorXd weights;
};

/// Draws the feature expansion. Throws std::invalid_argument for a
/// non-positive length scale or feature count.
GPSampler make_gp_sampler(const Embedding& embedding, double lengthscale, int feature_count,
                          std::uint64_t seed);

double gp_sample(const GPSampler& sampler, const Eigen::VectorXd& x);

/// One sample value per point; parallel over points, identical to the serial
/// result.
Eigen::VectorXd gp_sample_grid(const GPSampler& sampler,
                               const std::vector<Eigen::VectorXd>& points);

/// Mean and covariance callables for downstream Gaussian-process machinery:
/// the mean is mean_hat composed with the embedding map and the covariance is
/// the invariant Gaussian kernel, so both are constant along orbits in every
/// argument. The callables capture the embedding by reference.
struct GPParams {
    std::function<double(const Eigen::VectorXd&)> mean;
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> kernel;
};

GPParams gp_distributional_params(const Embedding& embedding,
                                  std::function<double(const Eigen::VectorXd&)> mean_hat,
                                  double lengthscale);

/// Soft-margin kernel SVM in dual form. `coefficients` stores alpha_i * y_i
/// for the support points only, so the decision function is
///     f(x) = sum_i coefficients_i * kernel(support_points_i, x) + bias
/// and is invariant because the kernel is invariant in its second argument.
struct SVMModel {
    std::vector<Eigen::VectorXd> support_points;
    Eigen::VectorXd coefficients;
    double bias = 0.0;
    double regularization = 0.0;
    InvariantKernel kernel;
    double dual_objective = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Trains by sequential minimal optimization on the dual: each step picks the
/// maximal KKT-violating pair and solves the two-variable subproblem in
/// closed form, until the violation gap drops below 1e-3 or 10^4 iterations
/// pass (the best iterate is returned with `converged` false). Labels are
/// +-1. Throws std::invalid_argument for size mismatch, a missing class, or
/// non-positive regularization.
SVMModel svm_train(const InvariantKernel& kernel, const std::vector<Eigen::VectorXd>& points,
                   const std::vector<int>& labels, double regularization);

double svm_predict(const SVMModel& model, const Eigen::VectorXd& x);

/// Weights of the fixed multilayer perceptron shape used on top of the
/// embedding: input -> 10 -> 10 -> 10 -> 1 with rectified-linear activations
/// on the hidden layers and a linear output.
struct MlpWeights {
    std::vector<Eigen::MatrixXd> layers;  ///< 4 matrices, row-major fan-out
    std::vector<Eigen::VectorXd> biases;  ///< 4 vectors matching the rows
};

/// Deterministic He-style initialization (normal / sqrt(fan_in), zero biases)
/// from the counter-based generator.
MlpWeights make_mlp_weights(int input_dim, std::uint64_t seed);

/// Forward pass on the embedded image rho(x); invariant by construction.
/// Throws std::invalid_argument when the weight shapes do not match the
/// fixed architecture or the embedding dimension.
double mlp_forward(const Embedding& embedding, const MlpWeights& weights,
                   const Eigen::VectorXd& x);

}  // namespace crystalfold
