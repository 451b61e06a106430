// Independent reference computations for the test suites. Nothing here calls
// into the library's algorithms; only plain Eigen and the standard library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace oracle {

using Dense = Eigen::MatrixXd;

inline Eigen::SparseMatrix<double> to_sparse(const Dense& a) {
    return a.sparseView();
}

/// Symmetric random weighted graph, empty diagonal.
inline Dense random_graph(int n, double density, std::mt19937_64& rng, bool integer_weights = false) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> real_weight(0.1, 2.0);
    std::uniform_int_distribution<int> int_weight(1, 5);
    Dense a = Dense::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (coin(rng) < density) {
                a(i, j) = a(j, i) = integer_weights ? int_weight(rng) : real_weight(rng);
            }
        }
    }
    return a;
}

/// H = (1/2m) sum_ij [A_ij - gamma k_i k_j / 2m] delta(c_i, c_j), straight from the definition.
inline double modularity(const Dense& a, const std::vector<int>& labels, double gamma) {
    const Eigen::VectorXd k = a.rowwise().sum();
    const double two_m = k.sum();
    double h = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) {
                h += a(i, j) - gamma * k(i) * k(j) / two_m;
            }
        }
    }
    return h / two_m;
}

/// Calls `visit` with every set partition of n elements as a restricted growth string.
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> extend = [&](int i, int highest) {
        if (i == n) {
            visit(labels);
            return;
        }
        for (int l = 0; l <= highest + 1; ++l) {
            labels[static_cast<std::size_t>(i)] = l;
            extend(i + 1, std::max(highest, l));
        }
    };
    if (n == 0) {
        visit(labels);
        return;
    }
    extend(1, 0);
}

struct Optimum {
    double value = -INFINITY;
    std::vector<int> labels;
    std::size_t partitions = 0;
};

inline Optimum best_partition(const Dense& a, double gamma) {
    Optimum best;
    for_each_partition(static_cast<int>(a.rows()), [&](const std::vector<int>& labels) {
        ++best.partitions;
        const double h = modularity(a, labels, gamma);
        if (h > best.value) {
            best.value = h;
            best.labels = labels;
        }
    });
    return best;
}

/// Stationary vector of a column-stochastic matrix from the linear system
/// (G - I) x = 0 with the last equation replaced by sum(x) = 1.
inline Eigen::VectorXd stationary_solve(const Dense& g) {
    const Eigen::Index n = g.rows();
    Dense system = g - Dense::Identity(n, n);
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    return system.fullPivLu().solve(rhs);
}

/// Adjusted Rand Index of two labelings of the same items.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> rows;
    std::map<int, double> cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1;
        rows[a[i]] += 1;
        cols[b[i]] += 1;
    }
    auto pairs = [](double x) { return x * (x - 1) / 2; };
    double index = 0;
    for (const auto& [key, count] : joint) {
        index += pairs(count);
    }
    double row_sum = 0;
    for (const auto& [key, count] : rows) {
        row_sum += pairs(count);
    }
    double col_sum = 0;
    for (const auto& [key, count] : cols) {
        col_sum += pairs(count);
    }
    const double total = pairs(static_cast<double>(a.size()));
    const double expected = row_sum * col_sum / total;
    const double max_index = (row_sum + col_sum) / 2;
    if (max_index == expected) {
        return 1.0;
    }
    return (index - expected) / (max_index - expected);
}

/// Ward cost (within-group sum of squared distances to the centroid).
inline double ward_cost(const Dense& points, const std::vector<int>& labels) {
    std::map<int, std::vector<Eigen::Index>> groups;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        groups[labels[i]].push_back(static_cast<Eigen::Index>(i));
    }
    double cost = 0;
    for (const auto& [label, members] : groups) {
        Eigen::RowVectorXd centroid = Eigen::RowVectorXd::Zero(points.cols());
        for (auto m : members) {
            centroid += points.row(m);
        }
        centroid /= static_cast<double>(members.size());
        for (auto m : members) {
            cost += (points.row(m) - centroid).squaredNorm();
        }
    }
    return cost;
}

} // namespace oracle
