#include "termtopics/leiden.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "termtopics/errors.hpp"
#include "termtopics/modularity.hpp"
#include "termtopics/rng.hpp"

namespace termtopics {

void ModularityParams::validate() const {
    if (!std::isfinite(gamma) || gamma < 0) {
        throw ValidationError("gamma must be a finite non-negative number");
    }
    if (max_passes < 1) {
        throw ValidationError("max_passes must be at least 1");
    }
}

namespace {

// Weighted graph in CSR form. Self-loop weight is the ordered-pair sum of the
// edge weight collapsed into a node by aggregation.
struct WorkGraph {
    int n = 0;
    std::vector<std::size_t> offsets;
    std::vector<int> neighbors;
    std::vector<double> weights;
    std::vector<double> self_loops;
    std::vector<double> node_weights;
};

WorkGraph from_adjacency(const Adjacency& a) {
    WorkGraph g;
    g.n = static_cast<int>(a.cols());
    g.offsets.assign(static_cast<std::size_t>(g.n) + 1, 0);
    g.self_loops.assign(static_cast<std::size_t>(g.n), 0.0);
    g.node_weights.assign(static_cast<std::size_t>(g.n), 0.0);
    g.neighbors.reserve(static_cast<std::size_t>(a.nonZeros()));
    g.weights.reserve(static_cast<std::size_t>(a.nonZeros()));
    for (Eigen::Index j = 0; j < a.outerSize(); ++j) {
        const auto v = static_cast<std::size_t>(j);
        for (Adjacency::InnerIterator it(a, j); it; ++it) {
            g.node_weights[v] += it.value();
            if (it.row() == j) {
                g.self_loops[v] += it.value();
            } else {
                g.neighbors.push_back(static_cast<int>(it.row()));
                g.weights.push_back(it.value());
            }
        }
        g.offsets[v + 1] = g.neighbors.size();
    }
    return g;
}

// Relabels to 0..k-1 in order of first appearance; returns k.
int renumber(std::vector<int>& labels) {
    const int top = labels.empty() ? -1 : *std::max_element(labels.begin(), labels.end());
    std::vector<int> map(static_cast<std::size_t>(top + 1), -1);
    int next = 0;
    for (int& c : labels) {
        auto& slot = map[static_cast<std::size_t>(c)];
        if (slot < 0) {
            slot = next++;
        }
        c = slot;
    }
    return next;
}

class Optimizer {
public:
    Optimizer(double gamma, double two_m, Rng& rng) : gamma_(gamma), two_m_(two_m), rng_(rng) {}

    // Greedy queue-based local moving. Returns the accumulated quality gain.
    double local_move(const WorkGraph& g, std::vector<int>& comm, std::size_t& moves) {
        const auto n = static_cast<std::size_t>(g.n);
        std::vector<double> total(n, 0.0);
        std::vector<int> size(n, 0);
        for (std::size_t v = 0; v < n; ++v) {
            total[static_cast<std::size_t>(comm[v])] += g.node_weights[v];
            ++size[static_cast<std::size_t>(comm[v])];
        }
        std::vector<int> empty;
        for (std::size_t c = n; c-- > 0;) {
            if (size[c] == 0) {
                empty.push_back(static_cast<int>(c));
            }
        }

        std::vector<int> queue(n);
        std::iota(queue.begin(), queue.end(), 0);
        rng_.shuffle(std::span<int>(queue));
        std::vector<char> queued(n, 1);
        std::size_t head = 0;
        std::size_t queued_count = n;

        std::vector<double> link(n, 0.0);
        std::vector<char> seen(n, 0);
        std::vector<int> touched;
        double gain_sum = 0;

        while (queued_count > 0) {
            const auto v = static_cast<std::size_t>(queue[head]);
            head = (head + 1) % n;
            --queued_count;
            queued[v] = 0;

            const int current = comm[v];
            touched.clear();
            for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                const auto c = static_cast<std::size_t>(comm[static_cast<std::size_t>(g.neighbors[e])]);
                if (!seen[c]) {
                    seen[c] = 1;
                    touched.push_back(static_cast<int>(c));
                }
                link[c] += g.weights[e];
            }
            const double kv = g.node_weights[v];
            const double scale = gamma_ * kv / two_m_;
            const double stay = link[static_cast<std::size_t>(current)] -
                                scale * (total[static_cast<std::size_t>(current)] - kv);

            if (size[static_cast<std::size_t>(current)] > 1 && !empty.empty()) {
                touched.push_back(empty.back());
            }
            std::sort(touched.begin(), touched.end());

            int best = current;
            double best_gain = 0;
            const double eps = 1e-12 * std::max(1.0, kv);
            for (int c : touched) {
                if (c == current) {
                    continue;
                }
                const auto cu = static_cast<std::size_t>(c);
                const double gain = link[cu] - scale * total[cu] - stay;
                if (gain > best_gain + eps) {
                    best = c;
                    best_gain = gain;
                }
            }
            for (int c : touched) {
                link[static_cast<std::size_t>(c)] = 0;
                seen[static_cast<std::size_t>(c)] = 0;
            }
            if (best == current) {
                continue;
            }

            const auto b = static_cast<std::size_t>(best);
            const auto a = static_cast<std::size_t>(current);
            if (size[b] == 0) {
                empty.pop_back();
            }
            total[a] -= kv;
            --size[a];
            if (size[a] == 0) {
                empty.push_back(current);
            }
            total[b] += kv;
            ++size[b];
            comm[v] = best;
            ++moves;
            gain_sum += 2.0 * best_gain / two_m_;

            for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                const auto u = static_cast<std::size_t>(g.neighbors[e]);
                if (!queued[u] && comm[u] != best) {
                    queued[u] = 1;
                    queue[(head + queued_count) % n] = static_cast<int>(u);
                    ++queued_count;
                }
            }
        }
        return gain_sum;
    }

    // Refinement: starting from singletons, merge well-connected nodes into
    // well-connected refined communities inside their local-move community,
    // choosing uniformly among merges that do not decrease the quality.
    std::vector<int> refine(const WorkGraph& g, const std::vector<int>& comm) {
        const auto n = static_cast<std::size_t>(g.n);
        std::vector<int> refined(n);
        std::iota(refined.begin(), refined.end(), 0);
        std::vector<double> refined_total(g.node_weights);
        std::vector<int> refined_size(n, 1);
        std::vector<double> community_total(n, 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            community_total[static_cast<std::size_t>(comm[v])] += g.node_weights[v];
        }
        // Edge weight from each node (and later each refined community) to the
        // rest of its local-move community.
        std::vector<double> inside(n, 0.0);
        for (std::size_t v = 0; v < n; ++v) {
            for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                if (comm[static_cast<std::size_t>(g.neighbors[e])] == comm[v]) {
                    inside[v] += g.weights[e];
                }
            }
        }
        std::vector<double> external(inside);

        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng_.shuffle(std::span<int>(order));

        std::vector<double> link(n, 0.0);
        std::vector<char> seen(n, 0);
        std::vector<int> touched;
        std::vector<int> candidates;
        for (int vi : order) {
            const auto v = static_cast<std::size_t>(vi);
            if (refined_size[static_cast<std::size_t>(refined[v])] != 1) {
                continue;
            }
            const auto c = static_cast<std::size_t>(comm[v]);
            const double kv = g.node_weights[v];
            const double kc = community_total[c];
            if (inside[v] < gamma_ * kv * (kc - kv) / two_m_) {
                continue;
            }
            touched.clear();
            for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                const auto u = static_cast<std::size_t>(g.neighbors[e]);
                if (static_cast<std::size_t>(comm[u]) != c) {
                    continue;
                }
                const auto r = static_cast<std::size_t>(refined[u]);
                if (!seen[r]) {
                    seen[r] = 1;
                    touched.push_back(static_cast<int>(r));
                }
                link[r] += g.weights[e];
            }
            std::sort(touched.begin(), touched.end());
            candidates.clear();
            const int own = refined[v];
            for (int ri : touched) {
                const auto r = static_cast<std::size_t>(ri);
                if (ri == own) {
                    continue;
                }
                const double kr = refined_total[r];
                const bool well_connected = external[r] >= gamma_ * kr * (kc - kr) / two_m_;
                const double gain = link[r] - gamma_ * kv * kr / two_m_;
                if (well_connected && gain >= 0) {
                    candidates.push_back(ri);
                }
            }
            if (!candidates.empty()) {
                const int target = candidates[static_cast<std::size_t>(rng_.bounded(candidates.size()))];
                const auto t = static_cast<std::size_t>(target);
                const auto o = static_cast<std::size_t>(own);
                external[t] += inside[v] - 2.0 * link[t];
                refined_total[t] += kv;
                ++refined_size[t];
                refined_total[o] = 0;
                refined_size[o] = 0;
                external[o] = 0;
                refined[v] = target;
            }
            for (int r : touched) {
                link[static_cast<std::size_t>(r)] = 0;
                seen[static_cast<std::size_t>(r)] = 0;
            }
        }
        return refined;
    }

private:
    double gamma_;
    double two_m_;
    Rng& rng_;
};

// Collapses each refined community (dense labels 0..k-1) into one node.
WorkGraph aggregate(const WorkGraph& g, const std::vector<int>& refined, int k) {
    const auto n = static_cast<std::size_t>(g.n);
    const auto ku = static_cast<std::size_t>(k);
    std::vector<std::vector<int>> members(ku);
    for (std::size_t v = 0; v < n; ++v) {
        members[static_cast<std::size_t>(refined[v])].push_back(static_cast<int>(v));
    }
    WorkGraph out;
    out.n = k;
    out.offsets.assign(ku + 1, 0);
    out.self_loops.assign(ku, 0.0);
    out.node_weights.assign(ku, 0.0);
    std::vector<double> link(ku, 0.0);
    std::vector<char> seen(ku, 0);
    std::vector<int> touched;
    for (std::size_t a = 0; a < ku; ++a) {
        touched.clear();
        for (int vi : members[a]) {
            const auto v = static_cast<std::size_t>(vi);
            out.node_weights[a] += g.node_weights[v];
            out.self_loops[a] += g.self_loops[v];
            for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
                const auto b = static_cast<std::size_t>(refined[static_cast<std::size_t>(g.neighbors[e])]);
                if (b == a) {
                    out.self_loops[a] += g.weights[e];
                    continue;
                }
                if (!seen[b]) {
                    seen[b] = 1;
                    touched.push_back(static_cast<int>(b));
                }
                link[b] += g.weights[e];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int b : touched) {
            out.neighbors.push_back(b);
            out.weights.push_back(link[static_cast<std::size_t>(b)]);
            link[static_cast<std::size_t>(b)] = 0;
            seen[static_cast<std::size_t>(b)] = 0;
        }
        out.offsets[a + 1] = out.neighbors.size();
    }
    return out;
}

std::vector<int> component_labels(const Adjacency& a, const std::vector<int>& membership) {
    const auto n = static_cast<std::size_t>(a.cols());
    std::vector<int> label(n, -1);
    std::vector<Eigen::Index> stack;
    int next = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (label[s] >= 0) {
            continue;
        }
        label[s] = next;
        stack.assign(1, static_cast<Eigen::Index>(s));
        while (!stack.empty()) {
            const Eigen::Index v = stack.back();
            stack.pop_back();
            for (Adjacency::InnerIterator it(a, v); it; ++it) {
                const auto u = static_cast<std::size_t>(it.row());
                if (label[u] < 0 && membership[u] == membership[static_cast<std::size_t>(v)]) {
                    label[u] = next;
                    stack.push_back(it.row());
                }
            }
        }
        ++next;
    }
    return label;
}

} // namespace

Partition split_disconnected(const Adjacency& adjacency, const Partition& partition) {
    return Partition::from_labels(component_labels(adjacency, partition.membership()));
}

bool communities_connected(const Adjacency& adjacency, const Partition& partition) {
    return split_disconnected(adjacency, partition).community_count() == partition.community_count();
}

LeidenResult leiden_partition(const Adjacency& adjacency, const ModularityParams& params,
                              const PassObserver& observer) {
    params.validate();
    LeidenResult result;
    const auto n = static_cast<std::size_t>(adjacency.cols());
    if (n == 0) {
        result.converged = true;
        return result;
    }
    const WorkGraph base = from_adjacency(adjacency);
    const double two_m = std::accumulate(base.node_weights.begin(), base.node_weights.end(), 0.0);
    if (!(two_m > 0)) {
        result.partition = Partition::singletons(static_cast<Eigen::Index>(n));
        result.converged = true;
        return result;
    }

    Rng rng(params.seed);
    Optimizer optimizer(params.gamma, two_m, rng);
    std::vector<int> membership(n);
    std::iota(membership.begin(), membership.end(), 0);
    double tracked = generalized_modularity(adjacency, membership, params.gamma);

    while (result.passes < params.max_passes) {
        ++result.passes;
        WorkGraph level;
        const WorkGraph* g = &base;
        std::vector<int> comm = membership;
        std::vector<int> node_of(n);
        std::iota(node_of.begin(), node_of.end(), 0);
        std::size_t moves = 0;
        for (;;) {
            tracked += optimizer.local_move(*g, comm, moves);
            std::vector<int> refined = optimizer.refine(*g, comm);
            const int k = renumber(refined);
            if (k == g->n) {
                break;
            }
            std::vector<int> next_comm(static_cast<std::size_t>(k));
            for (std::size_t v = 0; v < refined.size(); ++v) {
                next_comm[static_cast<std::size_t>(refined[v])] = comm[v];
            }
            renumber(next_comm);
            for (int& node : node_of) {
                node = refined[static_cast<std::size_t>(node)];
            }
            level = aggregate(*g, refined, k);
            g = &level;
            comm = std::move(next_comm);
        }

        std::vector<int> flattened(n);
        for (std::size_t v = 0; v < n; ++v) {
            flattened[v] = comm[static_cast<std::size_t>(node_of[v])];
        }
        const bool changed = Partition::by_size(flattened) != Partition::by_size(membership);
        membership = std::move(flattened);
        if (observer) {
            observer(PassInfo{result.passes, moves, tracked, membership});
        }
        if (!changed) {
            result.converged = true;
            break;
        }
    }

    // Communities are connected at convergence; a capped run may not be.
    Partition candidate = Partition::by_size(component_labels(adjacency, membership));
    double quality = generalized_modularity(adjacency, candidate.membership(), params.gamma);

    const Partition components = Partition::by_size(
        component_labels(adjacency, std::vector<int>(n, 0)));
    const Partition singles = Partition::singletons(static_cast<Eigen::Index>(n));
    for (const Partition* baseline : {&components, &singles}) {
        const double q = generalized_modularity(adjacency, baseline->membership(), params.gamma);
        if (q > quality + 1e-12) {
            candidate = *baseline;
            quality = q;
        }
    }
    result.partition = std::move(candidate);
    result.quality = quality;
    return result;
}

LeidenResult leiden_partition(const TermNetwork& net, const ModularityParams& params,
                              const PassObserver& observer) {
    return leiden_partition(net.adjacency(), params, observer);
}

std::vector<SweepEntry> resolution_sweep(const TermNetwork& net, std::span<const double> gammas,
                                         std::uint64_t seed, int max_passes) {
    if (gammas.empty()) {
        throw ValidationError("resolution sweep needs at least one gamma");
    }
    for (double gamma : gammas) {
        if (!(gamma > 0)) {
            throw ValidationError("sweep gammas must be positive");
        }
    }
    std::vector<SweepEntry> out;
    out.reserve(gammas.size());
    for (double gamma : gammas) {
        LeidenResult r = leiden_partition(net, ModularityParams{gamma, seed, max_passes});
        const int count = r.partition.community_count();
        out.push_back({gamma, std::move(r.partition), r.quality, count});
    }
    return out;
}

} // namespace termtopics
