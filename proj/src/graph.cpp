#include "termtopics/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace termtopics {

TermNetwork::TermNetwork(std::vector<std::string> terms, std::vector<std::size_t> document_frequency,
                         Adjacency adjacency)
    : terms_(std::move(terms)), df_(std::move(document_frequency)), adjacency_(std::move(adjacency)) {
    const auto n = static_cast<Eigen::Index>(terms_.size());
    if (adjacency_.rows() != n || adjacency_.cols() != n || df_.size() != terms_.size()) {
        throw Error("network dimensions do not match the vertex list");
    }
    adjacency_.makeCompressed();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!index_.try_emplace(terms_[static_cast<std::size_t>(i)], i).second) {
            throw Error("duplicate vertex '" + terms_[static_cast<std::size_t>(i)] + "'");
        }
    }
    degree_ = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < adjacency_.outerSize(); ++j) {
        for (Adjacency::InnerIterator it(adjacency_, j); it; ++it) {
            degree_(j) += it.value();
        }
    }
    total_weight_ = degree_.sum();
    check_consistency();
}

Eigen::Index TermNetwork::index_of(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) {
        throw LookupError("term '" + term + "' is not a network vertex");
    }
    return it->second;
}

void TermNetwork::check_consistency() const {
    const Adjacency transposed = adjacency_.transpose();
    if ((adjacency_ - transposed).norm() != 0.0) {
        throw Error("adjacency is not symmetric");
    }
    if (adjacency_.diagonal().cwiseAbs().sum() != 0.0) {
        throw Error("adjacency has self-loops");
    }
    Eigen::VectorXd k = Eigen::VectorXd::Zero(vertex_count());
    double edge_sum = 0;
    for (Eigen::Index j = 0; j < adjacency_.outerSize(); ++j) {
        for (Adjacency::InnerIterator it(adjacency_, j); it; ++it) {
            if (it.value() <= 0) {
                throw Error("non-positive edge weight");
            }
            k(it.row()) += it.value();
            if (it.row() < j) {
                edge_sum += it.value();
            }
        }
    }
    if ((vertex_count() > 0 && (k - degree_).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, total_weight_)) ||
        std::abs(total_weight_ - 2 * edge_sum) > 1e-9 * std::max(1.0, total_weight_)) {
        throw Error("degrees are inconsistent with the adjacency");
    }
}

bool TermNetwork::operator==(const TermNetwork& other) const {
    if (terms_ != other.terms_ || df_ != other.df_ || adjacency_.nonZeros() != other.adjacency_.nonZeros()) {
        return false;
    }
    return (adjacency_ - other.adjacency_).norm() == 0.0;
}

TermNetwork build_network(std::span<const DocumentTermRanking> rankings) {
    std::vector<std::string> terms;
    for (const auto& r : rankings) {
        for (const auto& t : r.terms) {
            if (t.retained) {
                terms.push_back(t.term.text);
            }
        }
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    std::unordered_map<std::string, Eigen::Index> index;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        index.emplace(terms[i], static_cast<Eigen::Index>(i));
    }

    std::vector<std::size_t> df(terms.size(), 0);
    std::vector<Eigen::Triplet<double>> triplets;
    std::vector<Eigen::Index> members;
    for (const auto& r : rankings) {
        members.clear();
        for (const auto& t : r.terms) {
            if (t.retained) {
                members.push_back(index.at(t.term.text));
            }
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (std::size_t a = 0; a < members.size(); ++a) {
            ++df[static_cast<std::size_t>(members[a])];
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                triplets.emplace_back(members[a], members[b], 1.0);
                triplets.emplace_back(members[b], members[a], 1.0);
            }
        }
    }
    const auto n = static_cast<Eigen::Index>(terms.size());
    Adjacency adjacency(n, n);
    adjacency.setFromTriplets(triplets.begin(), triplets.end());
    TermNetwork net(std::move(terms), std::move(df), std::move(adjacency));
    net.check_consistency();
    return net;
}

TermNetwork prune_rare_edges(const TermNetwork& net, std::size_t min_df) {
    const auto& df = net.document_frequency();
    Adjacency pruned = net.adjacency();
    pruned.prune([&](Eigen::Index row, Eigen::Index col, double) {
        return df[static_cast<std::size_t>(row)] >= min_df || df[static_cast<std::size_t>(col)] >= min_df;
    });
    TermNetwork out(net.terms(), df, std::move(pruned));
    out.check_consistency();
    return out;
}

void write_edge_list(std::ostream& out, const TermNetwork& net) {
    const Adjacency& a = net.adjacency();
    for (Eigen::Index j = 0; j < a.outerSize(); ++j) {
        for (Adjacency::InnerIterator it(a, j); it; ++it) {
            if (it.row() < j) {
                out << net.term(it.row()) << '\t' << net.term(j) << '\t'
                    << static_cast<long long>(std::llround(it.value())) << '\n';
            }
        }
    }
}

void write_vertex_list(std::ostream& out, const TermNetwork& net) {
    for (Eigen::Index v = 0; v < net.vertex_count(); ++v) {
        out << net.term(v) << '\t' << net.document_frequency()[static_cast<std::size_t>(v)] << '\n';
    }
}

void dump_network(const std::filesystem::path& dir, const TermNetwork& net) {
    std::filesystem::create_directories(dir);
    std::ofstream edges(dir / "edges.tsv", std::ios::binary | std::ios::trunc);
    write_edge_list(edges, net);
    std::ofstream vertices(dir / "vertices.tsv", std::ios::binary | std::ios::trunc);
    write_vertex_list(vertices, net);
    if (!edges || !vertices) {
        throw Error("cannot write network dump to '" + dir.string() + "'");
    }
}

} // namespace termtopics
