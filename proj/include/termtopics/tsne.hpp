#ifndef TERMTOPICS_TSNE_HPP
#define TERMTOPICS_TSNE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <Eigen/Dense>

#include "termtopics/errors.hpp"
#include "termtopics/rng.hpp"

namespace termtopics {

struct TsneParams {
    double perplexity = 30.0;
    int iterations = 1000;
    std::uint64_t seed = 42;
    double learning_rate = 200.0;
    double exaggeration = 12.0;
    int exaggeration_iterations = 250;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
};

template <typename Scalar>
struct TsneResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 2> embedding;
    Scalar kl_after_exaggeration = 0; ///< KL right after the exaggeration phase
    Scalar kl_final = 0;
    double perplexity = 0;            ///< after clamping
};

namespace detail {

/// Row-conditional affinities P(j|i) with a per-row Gaussian bandwidth found
/// by bisection on the entropy.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
conditional_affinities(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& sq_dist, double perplexity) {
    const Eigen::Index n = sq_dist.rows();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> p = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    const Scalar target = std::log(Scalar(perplexity));
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> row(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar min_d = std::numeric_limits<Scalar>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) {
                min_d = std::min(min_d, sq_dist(i, j));
            }
        }
        Scalar beta = 1;
        Scalar lo = 0;
        Scalar hi = std::numeric_limits<Scalar>::infinity();
        for (int step = 0; step < 200; ++step) {
            Scalar sum = 0;
            Scalar weighted = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) {
                    row(j) = 0;
                    continue;
                }
                // Shifting by the nearest distance avoids underflow of every weight.
                const Scalar d = sq_dist(i, j) - min_d;
                row(j) = std::exp(-beta * d);
                sum += row(j);
                weighted += d * row(j);
            }
            const Scalar entropy = std::log(sum) + beta * weighted / sum;
            row /= sum;
            const Scalar diff = entropy - target;
            if (std::abs(diff) < Scalar(1e-5)) {
                break;
            }
            if (diff > 0) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2 : (beta + hi) / 2;
            } else {
                hi = beta;
                beta = (beta + lo) / 2;
            }
        }
        p.row(i) = row.transpose();
    }
    return p;
}

template <typename Scalar>
Scalar kl_divergence(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& p,
                     const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& num, Scalar z) {
    Scalar kl = 0;
    const Eigen::Index n = p.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i != j && p(i, j) > 0) {
                const Scalar q = std::max(num(i, j) / z, std::numeric_limits<Scalar>::min());
                kl += p(i, j) * std::log(p(i, j) / q);
            }
        }
    }
    return kl;
}

} // namespace detail

/// Exact t-SNE of the rows of `data` into two dimensions.
///
/// Perplexity is clamped to max(1, (N - 1) / 3). A single row maps to the
/// origin. Deterministic for a given seed.
template <typename Derived>
TsneResult<typename Derived::Scalar> tsne(const Eigen::MatrixBase<Derived>& data, const TsneParams& params = {}) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Embedding = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

    const Eigen::Index n = data.rows();
    if (n == 0) {
        throw ValidationError("t-SNE needs at least one point");
    }
    TsneResult<Scalar> result;
    result.perplexity = std::min(params.perplexity, std::max(1.0, static_cast<double>(n - 1) / 3.0));
    if (n == 1) {
        result.embedding = Embedding::Zero(1, 2);
        return result;
    }

    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> norms = data.rowwise().squaredNorm();
    Matrix sq_dist = (-2 * data * data.transpose()).eval();
    sq_dist.colwise() += norms;
    sq_dist.rowwise() += norms.transpose();
    sq_dist = sq_dist.cwiseMax(Scalar(0));

    Matrix p = detail::conditional_affinities<Scalar>(sq_dist, result.perplexity);
    p = (p + p.transpose()) / (Scalar(2) * Scalar(n));
    p = p.cwiseMax(std::numeric_limits<Scalar>::min());
    p.diagonal().setZero();

    Rng rng(params.seed);
    Embedding y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i, 0) = Scalar(1e-4 * rng.normal());
        y(i, 1) = Scalar(1e-4 * rng.normal());
    }
    Embedding update = Embedding::Zero(n, 2);
    Embedding gains = Embedding::Ones(n, 2);
    Matrix num(n, n);
    Matrix force(n, n);

    auto compute_num = [&]() -> Scalar {
        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> yn = y.rowwise().squaredNorm();
        num.noalias() = Scalar(-2) * y * y.transpose();
        num.colwise() += yn;
        num.rowwise() += yn.transpose();
        num = (Scalar(1) + num.cwiseMax(Scalar(0)).array()).inverse().matrix();
        num.diagonal().setZero();
        return num.sum();
    };

    bool recorded = false;
    for (int it = 0; it < params.iterations; ++it) {
        const bool early = it < params.exaggeration_iterations;
        if (!early && !recorded) {
            const Scalar z = compute_num();
            result.kl_after_exaggeration = detail::kl_divergence<Scalar>(p, num, z);
            recorded = true;
        }
        const Scalar z = compute_num();
        const Scalar exaggeration = early ? Scalar(params.exaggeration) : Scalar(1);
        force = (exaggeration * p - num / z).cwiseProduct(num);
        // grad_i = 4 * sum_j force_ij (y_i - y_j)
        const Embedding grad = Scalar(4) * (force.rowwise().sum().asDiagonal() * y - force * y);

        const Scalar momentum = Scalar(early ? params.initial_momentum : params.final_momentum);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int d = 0; d < 2; ++d) {
                const bool same_sign = (grad(i, d) > 0) == (update(i, d) > 0);
                gains(i, d) = same_sign ? gains(i, d) * Scalar(0.8) : gains(i, d) + Scalar(0.2);
                gains(i, d) = std::max(gains(i, d), Scalar(0.01));
            }
        }
        update = momentum * update - Scalar(params.learning_rate) * gains.cwiseProduct(grad);
        y += update;
        y.rowwise() -= y.colwise().mean();
    }
    const Scalar z = compute_num();
    result.kl_final = detail::kl_divergence<Scalar>(p, num, z);
    if (!recorded) {
        result.kl_after_exaggeration = result.kl_final;
    }
    result.embedding = y;
    return result;
}

} // namespace termtopics

#endif // TERMTOPICS_TSNE_HPP
