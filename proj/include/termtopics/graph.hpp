#ifndef TERMTOPICS_GRAPH_HPP
#define TERMTOPICS_GRAPH_HPP

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Sparse>

#include "termtopics/rank.hpp"

namespace termtopics {

using Adjacency = Eigen::SparseMatrix<double>;

/// Undirected term co-occurrence network. A(i, j) is the number of thinned
/// documents retaining both terms; the diagonal is empty.
class TermNetwork {
public:
    TermNetwork() = default;

    /// Vertices must be unique; `adjacency` must be symmetric with an empty diagonal.
    TermNetwork(std::vector<std::string> terms, std::vector<std::size_t> document_frequency, Adjacency adjacency);

    Eigen::Index vertex_count() const { return static_cast<Eigen::Index>(terms_.size()); }
    /// Number of undirected edges.
    std::size_t edge_count() const { return static_cast<std::size_t>(adjacency_.nonZeros()) / 2; }

    const std::vector<std::string>& terms() const { return terms_; }
    const std::string& term(Eigen::Index v) const { return terms_[static_cast<std::size_t>(v)]; }
    /// Throws LookupError.
    Eigen::Index index_of(const std::string& term) const;
    bool contains(const std::string& term) const { return index_.contains(term); }

    const Adjacency& adjacency() const { return adjacency_; }
    double weight(Eigen::Index i, Eigen::Index j) const { return adjacency_.coeff(i, j); }
    const Eigen::VectorXd& degree() const { return degree_; }
    const std::vector<std::size_t>& document_frequency() const { return df_; }
    /// 2m, the sum of all weighted degrees.
    double total_weight() const { return total_weight_; }

    /// Recomputes degrees from the adjacency and checks symmetry, the empty
    /// diagonal and 2m. Throws Error on violation.
    void check_consistency() const;

    bool operator==(const TermNetwork& other) const;

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, Eigen::Index> index_;
    std::vector<std::size_t> df_;
    Adjacency adjacency_;
    Eigen::VectorXd degree_;
    double total_weight_ = 0;
};

/// Vertices are all retained terms (sorted by text); every document adds 1 to
/// each pair of distinct terms it retains.
TermNetwork build_network(std::span<const DocumentTermRanking> rankings);

/// Drops edges whose endpoints both have df < min_df. Vertices are kept.
TermNetwork prune_rare_edges(const TermNetwork& net, std::size_t min_df);

/// `term_a\tterm_b\tweight` per edge (a < b).
void write_edge_list(std::ostream& out, const TermNetwork& net);
/// `term\tdf` per vertex.
void write_vertex_list(std::ostream& out, const TermNetwork& net);
void dump_network(const std::filesystem::path& dir, const TermNetwork& net);

} // namespace termtopics

#endif // TERMTOPICS_GRAPH_HPP
