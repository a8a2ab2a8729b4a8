#include "crystalfold/ml.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "crystalfold/parallel.hpp"
#include "crystalfold/rng.hpp"

namespace crystalfold {

namespace {

// Stream ids of the single-seed randomness budget. Everything random in the
// library draws through one of these, so one 64-bit seed pins every artifact.
constexpr std::uint64_t kStreamFrequencies = 0;
constexpr std::uint64_t kStreamPhases = 1;
constexpr std::uint64_t kStreamWeights = 2;
constexpr std::uint64_t kStreamMlp = 3;

double squared_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).squaredNorm();
}

}  // namespace

InvariantKernel make_rbf_kernel(const Embedding& embedding, double lengthscale) {
    if (!(lengthscale > 0.0)) {
        std::ostringstream msg;
        msg << "kernel length scale must be positive, got " << lengthscale;
        throw std::invalid_argument(msg.str());
    }
    InvariantKernel kernel;
    kernel.embedding = &embedding;
    kernel.lengthscale = lengthscale;
    return kernel;
}

double kernel_eval(const InvariantKernel& kernel, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
    if (kernel.embedding == nullptr) throw std::invalid_argument("kernel has no embedding");
    const double d2 = squared_gap(rho(*kernel.embedding, x), rho(*kernel.embedding, y));
    return std::exp(-d2 / (2.0 * kernel.lengthscale * kernel.lengthscale));
}

Eigen::MatrixXd gram(const InvariantKernel& kernel, const std::vector<Eigen::VectorXd>& points) {
    if (kernel.embedding == nullptr) throw std::invalid_argument("kernel has no embedding");
    const int n = static_cast<int>(points.size());
    std::vector<Eigen::VectorXd> images(points.size());
    parallel_for(n, [&](std::ptrdiff_t i) { images[i] = rho(*kernel.embedding, points[i]); });
    Eigen::MatrixXd g(n, n);
    const double scale = 2.0 * kernel.lengthscale * kernel.lengthscale;
    parallel_for(n, [&](std::ptrdiff_t i) {
        g(i, i) = 1.0;
        for (int j = 0; j < i; ++j) {
            const double value = std::exp(-squared_gap(images[i], images[j]) / scale);
            g(i, j) = value;
            g(j, i) = value;
        }
    });
    return g;
}

GPSampler make_gp_sampler(const Embedding& embedding, double lengthscale, int feature_count,
                          std::uint64_t seed) {
    if (!(lengthscale > 0.0)) {
        std::ostringstream msg;
        msg << "length scale must be positive, got " << lengthscale;
        throw std::invalid_argument(msg.str());
    }
    if (feature_count < 1) {
        std::ostringstream msg;
        msg << "feature count must be at least 1, got " << feature_count;
        throw std::invalid_argument(msg.str());
    }
    GPSampler sampler;
    sampler.embedding = &embedding;
    sampler.lengthscale = lengthscale;
    sampler.feature_count = feature_count;
    sampler.seed = seed;
    const int dim = embedding.dimension;
    sampler.frequencies.resize(feature_count, dim);
    sampler.phases.resize(feature_count);
    sampler.weights.resize(feature_count);
    for (int j = 0; j < feature_count; ++j) {
        for (int d = 0; d < dim; ++d) {
            const std::uint64_t index = static_cast<std::uint64_t>(j) * dim + d;
            sampler.frequencies(j, d) =
                rng_normal(seed, kStreamFrequencies, index) / lengthscale;
        }
        sampler.phases(j) =
            2.0 * std::numbers::pi * rng_unit(seed, kStreamPhases, static_cast<std::uint64_t>(j));
        sampler.weights(j) = rng_normal(seed, kStreamWeights, static_cast<std::uint64_t>(j));
    }
    return sampler;
}

double gp_sample(const GPSampler& sampler, const Eigen::VectorXd& x) {
    if (sampler.embedding == nullptr) throw std::invalid_argument("sampler has no embedding");
    const Eigen::VectorXd image = rho(*sampler.embedding, x);
    const Eigen::ArrayXd angles = (sampler.frequencies * image + sampler.phases).array();
    const double total = (sampler.weights.array() * angles.cos()).sum();
    return std::sqrt(2.0 / sampler.feature_count) * total;
}

Eigen::VectorXd gp_sample_grid(const GPSampler& sampler,
                               const std::vector<Eigen::VectorXd>& points) {
    Eigen::VectorXd values(points.size());
    parallel_for(static_cast<std::ptrdiff_t>(points.size()),
                 [&](std::ptrdiff_t i) { values(i) = gp_sample(sampler, points[i]); });
    return values;
}

GPParams gp_distributional_params(const Embedding& embedding,
                                  std::function<double(const Eigen::VectorXd&)> mean_hat,
                                  double lengthscale) {
    const InvariantKernel kernel = make_rbf_kernel(embedding, lengthscale);
    GPParams params;
    params.mean = [&embedding, mean_hat](const Eigen::VectorXd& x) {
        return mean_hat(rho(embedding, x));
    };
    params.kernel = [kernel](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
        return kernel_eval(kernel, x, y);
    };
    return params;
}

SVMModel svm_train(const InvariantKernel& kernel, const std::vector<Eigen::VectorXd>& points,
                   const std::vector<int>& labels, double regularization) {
    const int n = static_cast<int>(points.size());
    if (labels.size() != points.size()) {
        std::ostringstream msg;
        msg << "label count " << labels.size() << " does not match point count " << points.size();
        throw std::invalid_argument(msg.str());
    }
    if (!(regularization > 0.0)) {
        std::ostringstream msg;
        msg << "regularization must be positive, got " << regularization;
        throw std::invalid_argument(msg.str());
    }
    bool has_pos = false;
    bool has_neg = false;
    for (int label : labels) {
        if (label == 1) has_pos = true;
        else if (label == -1) has_neg = true;
        else throw std::invalid_argument("labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) {
        throw std::invalid_argument("training data must contain both classes");
    }

    const double c = regularization;
    const Eigen::MatrixXd k = gram(kernel, points);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = labels[i];
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
    // g(i) = sum_j alpha_j y_j K_ij, the decision value without bias.
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);

    constexpr double kTolerance = 1e-3;
    constexpr int kMaxIterations = 10000;
    const double bound_slack = 1e-12 * c;

    double gap_upper = 0.0;
    double gap_lower = 0.0;
    bool converged = false;
    int iterations = 0;
    while (iterations < kMaxIterations) {
        // Maximal violating pair: the most increasable residual among points
        // whose alpha can grow in the +y direction vs the least among those
        // that can shrink.
        int i_up = -1;
        int i_low = -1;
        double r_up = -std::numeric_limits<double>::infinity();
        double r_low = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double r = y(i) - g(i);
            const bool can_up = (y(i) > 0) ? alpha(i) < c - bound_slack : alpha(i) > bound_slack;
            const bool can_low = (y(i) > 0) ? alpha(i) > bound_slack : alpha(i) < c - bound_slack;
            if (can_up && r > r_up) {
                r_up = r;
                i_up = i;
            }
            if (can_low && r < r_low) {
                r_low = r;
                i_low = i;
            }
        }
        gap_upper = r_up;
        gap_lower = r_low;
        if (i_up < 0 || i_low < 0 || r_up - r_low <= kTolerance) {
            converged = true;
            break;
        }
        ++iterations;

        // Closed-form step on the (i_up, i_low) pair with box clipping.
        const int i = i_up;
        const int j = i_low;
        const double s = y(i) * y(j);
        double eta = k(i, i) + k(j, j) - 2.0 * k(i, j);
        eta = std::max(eta, 1e-12);
        double target = alpha(j) + y(j) * (r_low - r_up) / eta;
        double lo, hi;
        if (s > 0) {
            lo = std::max(0.0, alpha(i) + alpha(j) - c);
            hi = std::min(c, alpha(i) + alpha(j));
        } else {
            lo = std::max(0.0, alpha(j) - alpha(i));
            hi = std::min(c, c + alpha(j) - alpha(i));
        }
        target = std::clamp(target, lo, hi);
        const double delta_j = target - alpha(j);
        if (std::abs(delta_j) < 1e-14) break;  // boxed in; gap cannot shrink further
        const double delta_i = -s * delta_j;
        alpha(j) = target;
        alpha(i) += delta_i;
        g += (y(i) * delta_i) * k.col(i) + (y(j) * delta_j) * k.col(j);
    }

    SVMModel model;
    model.regularization = c;
    model.kernel = kernel;
    model.converged = converged;
    model.iterations = iterations;

    // Bias from on-margin support vectors, falling back to the midpoint of
    // the feasible interval when every support vector sits at a bound.
    double bias_sum = 0.0;
    int bias_count = 0;
    for (int i = 0; i < n; ++i) {
        if (alpha(i) > bound_slack && alpha(i) < c - bound_slack) {
            bias_sum += y(i) - g(i);
            ++bias_count;
        }
    }
    model.bias = bias_count > 0 ? bias_sum / bias_count : 0.5 * (gap_upper + gap_lower);

    model.dual_objective = alpha.sum();
    for (int i = 0; i < n; ++i) {
        // g already holds (K (alpha . y))_i, so the quadratic term needs no
        // second pass over the matrix.
        model.dual_objective -= 0.5 * alpha(i) * y(i) * g(i);
    }

    std::vector<int> support;
    for (int i = 0; i < n; ++i) {
        if (alpha(i) > bound_slack) support.push_back(i);
    }
    model.support_points.reserve(support.size());
    model.coefficients.resize(static_cast<int>(support.size()));
    for (size_t s_idx = 0; s_idx < support.size(); ++s_idx) {
        const int i = support[s_idx];
        model.support_points.push_back(points[static_cast<size_t>(i)]);
        model.coefficients(static_cast<int>(s_idx)) = alpha(i) * y(i);
    }
    return model;
}

double svm_predict(const SVMModel& model, const Eigen::VectorXd& x) {
    double value = model.bias;
    for (size_t i = 0; i < model.support_points.size(); ++i) {
        value += model.coefficients(static_cast<int>(i)) *
                 kernel_eval(model.kernel, model.support_points[i], x);
    }
    return value;
}

MlpWeights make_mlp_weights(int input_dim, std::uint64_t seed) {
    if (input_dim < 1) {
        std::ostringstream msg;
        msg << "input dimension must be at least 1, got " << input_dim;
        throw std::invalid_argument(msg.str());
    }
    const std::vector<int> sizes = {input_dim, 10, 10, 10, 1};
    MlpWeights weights;
    std::uint64_t counter = 0;
    for (size_t layer = 0; layer + 1 < sizes.size(); ++layer) {
        const int fan_in = sizes[layer];
        const int fan_out = sizes[layer + 1];
        Eigen::MatrixXd w(fan_out, fan_in);
        const double scale = std::sqrt(2.0 / fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int col = 0; col < fan_in; ++col) {
                w(r, col) = scale * rng_normal(seed, kStreamMlp, counter++);
            }
        }
        weights.layers.push_back(std::move(w));
        weights.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return weights;
}

double mlp_forward(const Embedding& embedding, const MlpWeights& weights,
                   const Eigen::VectorXd& x) {
    const std::vector<int> hidden = {10, 10, 10};
    if (weights.layers.size() != 4 || weights.biases.size() != 4) {
        throw std::invalid_argument("expected 4 weight layers (three hidden, one output)");
    }
    int expected_in = embedding.dimension;
    for (size_t layer = 0; layer < 4; ++layer) {
        const int expected_out = layer < 3 ? hidden[layer] : 1;
        if (weights.layers[layer].rows() != expected_out ||
            weights.layers[layer].cols() != expected_in ||
            weights.biases[layer].size() != expected_out) {
            std::ostringstream msg;
            msg << "layer " << layer << " expects " << expected_out << "x" << expected_in
                << " weights, got " << weights.layers[layer].rows() << "x"
                << weights.layers[layer].cols();
            throw std::invalid_argument(msg.str());
        }
        expected_in = expected_out;
    }
    Eigen::VectorXd h = rho(embedding, x);
    for (size_t layer = 0; layer < 3; ++layer) {
        h = ((weights.layers[layer] * h + weights.biases[layer]).array().max(0.0)).matrix();
    }
    return (weights.layers[3] * h + weights.biases[3])(0);
}

}  // namespace crystalfold
