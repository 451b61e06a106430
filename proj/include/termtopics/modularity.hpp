#ifndef TERMTOPICS_MODULARITY_HPP
#define TERMTOPICS_MODULARITY_HPP

#include <span>

#include "termtopics/graph.hpp"
#include "termtopics/partition.hpp"

namespace termtopics {

/// The two halves of generalized modularity H = internal - gamma * expected.
struct ModularityTerms {
    double internal = 0; ///< (1/2m) sum_ij A_ij delta(c_i, c_j)
    double expected = 0; ///< (1/(2m)^2) sum_ij k_i k_j delta(c_i, c_j)

    double value(double gamma) const { return internal - gamma * expected; }
};

/// Both double sums run over ordered pairs including i == j.
/// Throws ValidationError when the network has no edge weight (2m = 0).
ModularityTerms modularity_terms(const Adjacency& adjacency, std::span<const int> membership);
ModularityTerms modularity_terms(const TermNetwork& net, const Partition& partition);

double generalized_modularity(const Adjacency& adjacency, std::span<const int> membership, double gamma);
double generalized_modularity(const TermNetwork& net, const Partition& partition, double gamma);

} // namespace termtopics

#endif // TERMTOPICS_MODULARITY_HPP
