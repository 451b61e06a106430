#ifndef TERMTOPICS_LEIDEN_HPP
#define TERMTOPICS_LEIDEN_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "termtopics/graph.hpp"
#include "termtopics/partition.hpp"

namespace termtopics {

struct ModularityParams {
    double gamma = 1.0;
    std::uint64_t seed = 42;
    int max_passes = 20;

    /// gamma must be finite and >= 0 (0 is the all-in-one limit), max_passes >= 1.
    void validate() const;
};

/// State after one full pass (local moving, refinement and aggregation down
/// to a level that no longer aggregates).
struct PassInfo {
    int pass = 0;
    std::size_t moves = 0;
    double tracked_quality = 0;   ///< accumulated from per-move gains
    std::vector<int> membership; ///< flattened onto the input vertices
};

using PassObserver = std::function<void(const PassInfo&)>;

struct LeidenResult {
    Partition partition;     ///< labelled by decreasing community size
    double quality = 0;      ///< H_gamma recomputed from scratch; 0 for an edgeless graph
    int passes = 0;
    bool converged = false;  ///< false when max_passes was hit
};

/// Leiden optimisation of generalized modularity. Every returned community is
/// connected; the result is never worse than the singleton partition or the
/// connected-component partition. Deterministic for a given seed.
LeidenResult leiden_partition(const Adjacency& adjacency, const ModularityParams& params,
                              const PassObserver& observer = {});
LeidenResult leiden_partition(const TermNetwork& net, const ModularityParams& params,
                              const PassObserver& observer = {});

/// Connected components of the subgraph induced by each community.
Partition split_disconnected(const Adjacency& adjacency, const Partition& partition);

bool communities_connected(const Adjacency& adjacency, const Partition& partition);

struct SweepEntry {
    double gamma = 0;
    Partition partition;
    double quality = 0;
    int community_count = 0;
};

/// One Leiden run per gamma (each > 0) with the same seed, in input order.
std::vector<SweepEntry> resolution_sweep(const TermNetwork& net, std::span<const double> gammas,
                                         std::uint64_t seed, int max_passes = 20);

} // namespace termtopics

#endif // TERMTOPICS_LEIDEN_HPP
