#include "termtopics/modularity.hpp"

#include <algorithm>
#include <vector>

#include "termtopics/errors.hpp"

namespace termtopics {

ModularityTerms modularity_terms(const Adjacency& adjacency, std::span<const int> membership) {
    if (static_cast<Eigen::Index>(membership.size()) != adjacency.cols()) {
        throw Error("membership size does not match the adjacency");
    }
    int count = 0;
    for (int c : membership) {
        count = std::max(count, c + 1);
    }
    std::vector<double> community_degree(static_cast<std::size_t>(count), 0.0);
    double two_m = 0;
    double internal = 0;
    for (Eigen::Index j = 0; j < adjacency.outerSize(); ++j) {
        const int cj = membership[static_cast<std::size_t>(j)];
        for (Adjacency::InnerIterator it(adjacency, j); it; ++it) {
            two_m += it.value();
            community_degree[static_cast<std::size_t>(cj)] += it.value();
            if (membership[static_cast<std::size_t>(it.row())] == cj) {
                internal += it.value();
            }
        }
    }
    if (!(two_m > 0)) {
        throw ValidationError("modularity is undefined for a network without edges");
    }
    double expected = 0;
    for (double k : community_degree) {
        expected += k * k;
    }
    return {internal / two_m, expected / (two_m * two_m)};
}

ModularityTerms modularity_terms(const TermNetwork& net, const Partition& partition) {
    return modularity_terms(net.adjacency(), partition.membership());
}

double generalized_modularity(const Adjacency& adjacency, std::span<const int> membership, double gamma) {
    return modularity_terms(adjacency, membership).value(gamma);
}

double generalized_modularity(const TermNetwork& net, const Partition& partition, double gamma) {
    return modularity_terms(net, partition).value(gamma);
}

} // namespace termtopics
