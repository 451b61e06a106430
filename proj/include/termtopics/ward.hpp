#ifndef TERMTOPICS_WARD_HPP
#define TERMTOPICS_WARD_HPP

#include <limits>
#include <vector>

#include <Eigen/Core>

namespace termtopics {

/// Agglomerative clustering with Ward linkage over Euclidean distance.
///
/// Rows of `points` are observations. Clusters are merged pairwise, always
/// joining the pair with the smallest increase in within-cluster sum of
/// squares, until `clusters` remain (ties merge the lowest index pair).
/// Returns labels numbered by first appearance.
template <typename Derived>
std::vector<int> ward_clusters(const Eigen::MatrixBase<Derived>& points, int clusters) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = points.rows();
    std::vector<int> labels(static_cast<std::size_t>(n));
    if (n == 0) {
        return labels;
    }
    if (clusters < 1) {
        clusters = 1;
    }

    // Squared Euclidean distances between cluster centroids.
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> dist(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            dist(i, j) = (points.row(i) - points.row(j)).squaredNorm();
        }
    }
    std::vector<Scalar> size(static_cast<std::size_t>(n), Scalar(1));
    std::vector<bool> active(static_cast<std::size_t>(n), true);
    std::vector<Eigen::Index> owner(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        owner[static_cast<std::size_t>(i)] = i;
    }

    for (Eigen::Index remaining = n; remaining > clusters; --remaining) {
        Scalar best = std::numeric_limits<Scalar>::infinity();
        Eigen::Index bi = -1;
        Eigen::Index bj = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)]) {
                continue;
            }
            const Scalar si = size[static_cast<std::size_t>(i)];
            for (Eigen::Index j = i + 1; j < n; ++j) {
                if (!active[static_cast<std::size_t>(j)]) {
                    continue;
                }
                const Scalar sj = size[static_cast<std::size_t>(j)];
                const Scalar cost = si * sj / (si + sj) * dist(i, j);
                if (cost < best) {
                    best = cost;
                    bi = i;
                    bj = j;
                }
            }
        }
        const Scalar si = size[static_cast<std::size_t>(bi)];
        const Scalar sj = size[static_cast<std::size_t>(bj)];
        const Scalar s = si + sj;
        const Scalar dij = dist(bi, bj);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (!active[static_cast<std::size_t>(k)] || k == bi || k == bj) {
                continue;
            }
            Scalar d = (si * dist(bi, k) + sj * dist(bj, k)) / s - si * sj * dij / (s * s);
            d = d < Scalar(0) ? Scalar(0) : d;
            dist(bi, k) = d;
            dist(k, bi) = d;
        }
        size[static_cast<std::size_t>(bi)] = s;
        active[static_cast<std::size_t>(bj)] = false;
        for (auto& o : owner) {
            if (o == bj) {
                o = bi;
            }
        }
    }

    std::vector<int> relabel(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        auto& slot = relabel[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])];
        if (slot < 0) {
            slot = next++;
        }
        labels[static_cast<std::size_t>(i)] = slot;
    }
    return labels;
}

} // namespace termtopics

#endif // TERMTOPICS_WARD_HPP
