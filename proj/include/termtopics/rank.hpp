#ifndef TERMTOPICS_RANK_HPP
#define TERMTOPICS_RANK_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "termtopics/errors.hpp"
#include "termtopics/preprocess.hpp"
#include "termtopics/rank_params.hpp"

namespace termtopics {

/// Document frequencies over a set of term documents, with idf = ln(N / df).
class IdfTable {
public:
    IdfTable() = default;
    IdfTable(std::size_t doc_count, std::unordered_map<std::string, std::size_t> df);

    std::size_t doc_count() const { return doc_count_; }
    std::size_t vocabulary_size() const { return df_.size(); }
    bool contains(const std::string& term) const { return df_.contains(term); }

    /// Throws LookupError for a term that occurs in no document.
    std::size_t document_frequency(const std::string& term) const;
    double idf(const std::string& term) const;

private:
    std::size_t doc_count_ = 0;
    std::unordered_map<std::string, std::size_t> df_;
};

IdfTable compute_idf(std::span<const TermDocument> docs);

/// Unique terms of a document in first-occurrence order.
struct DocumentTerms {
    std::vector<Term> terms;
    std::vector<Eigen::Index> earliest; ///< earliest index in the term sequence
    std::vector<Eigen::Index> sequence; ///< unique-term index of every occurrence
};

DocumentTerms unique_terms(const TermDocument& doc);

struct CooccurrenceCounts {
    std::vector<Term> terms;
    Eigen::MatrixXd counts; ///< symmetric; f(i, i) counts distinct positions only
};

/// Counts pairs of positions p < q with q - p <= (window - 1) / 2.
CooccurrenceCounts window_cooccurrence(const TermDocument& doc, int window);
Eigen::MatrixXd window_cooccurrence(const std::vector<Eigen::Index>& sequence, Eigen::Index n, int window);

/// Column-stochastic posIdfRank transition matrix.
///
/// Column j is the distribution of the next term given current term j: with
/// probability alpha a co-occurrence edge is followed (destination i weighted
/// by idf_i * f_ij), otherwise the walk teleports (destination i weighted by
/// (1 + pos_i)^beta * idf_i). Columns without co-occurrence mass teleport
/// with probability 1.
template <typename DerivedF, typename DerivedIdf, typename DerivedPos>
Eigen::Matrix<typename DerivedF::Scalar, Eigen::Dynamic, Eigen::Dynamic>
transition_matrix(const Eigen::MatrixBase<DerivedF>& cooccurrence,
                  const Eigen::MatrixBase<DerivedIdf>& idf,
                  const Eigen::MatrixBase<DerivedPos>& earliest,
                  typename DerivedF::Scalar alpha,
                  typename DerivedF::Scalar beta) {
    using Scalar = typename DerivedF::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index n = cooccurrence.rows();
    eigen_assert(cooccurrence.cols() == n && idf.size() == n && earliest.size() == n);
    if (n == 1) {
        return Matrix::Ones(1, 1);
    }

    Vector teleport(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        teleport(i) = std::pow(Scalar(1) + Scalar(earliest(i)), beta) * Scalar(idf(i));
    }
    const Scalar teleport_mass = teleport.sum();
    if (!(teleport_mass > Scalar(0))) {
        throw DegenerateDocumentError("transition matrix undefined: all terms have zero idf");
    }
    teleport /= teleport_mass;

    // weighted(i, j) = idf_i * f_ij
    Matrix weighted = idf.template cast<Scalar>().asDiagonal() * cooccurrence;
    const Vector column_mass = weighted.colwise().sum().transpose();

    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (column_mass(j) > Scalar(0)) {
            g.col(j) = alpha * weighted.col(j) / column_mass(j) + (Scalar(1) - alpha) * teleport;
        } else {
            g.col(j) = teleport;
        }
    }
    return g;
}

template <typename Scalar>
struct StationaryResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> distribution;
    Scalar residual = 0;
    int iterations = 0;
};

/// Power iteration from the uniform vector until ||Gx - x||_1 <= tol.
/// Throws NumericalError with the last residual after `max_iterations`.
template <typename Derived>
StationaryResult<typename Derived::Scalar>
power_iteration(const Eigen::MatrixBase<Derived>& transition,
                typename Derived::Scalar tol = 1e-10,
                int max_iterations = 10000) {
    using Scalar = typename Derived::Scalar;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index n = transition.rows();
    eigen_assert(transition.cols() == n && n > 0);
    StationaryResult<Scalar> result;
    Vector x = Vector::Constant(n, Scalar(1) / Scalar(n));
    Vector next(n);
    for (int it = 0; it <= max_iterations; ++it) {
        next.noalias() = transition * x;
        result.residual = (next - x).template lpNorm<1>();
        result.iterations = it;
        if (result.residual <= tol) {
            result.distribution = x;
            return result;
        }
        x = next / next.sum();
    }
    throw NumericalError("power iteration did not converge in " + std::to_string(max_iterations) +
                             " iterations (residual " + std::to_string(double(result.residual)) + ")",
                         double(result.residual));
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>
stationary_distribution(const Eigen::MatrixBase<Derived>& transition,
                        typename Derived::Scalar tol = 1e-10) {
    return power_iteration(transition, tol).distribution;
}

struct RankedTerm {
    Term term;
    Eigen::Index earliest = 0;
    double score = 0;
    int rank = 0; ///< 1-based, best first
    bool retained = false;
};

/// A document's terms sorted by posIdfRank, best first.
struct DocumentTermRanking {
    std::string doc_id;
    std::vector<RankedTerm> terms;

    std::size_t size() const { return terms.size(); }
    std::size_t retained_count() const;
    /// nullptr when absent.
    const RankedTerm* find(const std::string& text) const;
};

/// max(1, floor(P / 100 * n)), or 0 when n == 0.
std::size_t thinned_size(std::size_t n, double thin_percent);

/// Sorts by score (descending), then earliest position, then text, and flags
/// the top thinned_size(n, P) terms as retained.
DocumentTermRanking rank_and_thin(std::string doc_id,
                                  const std::vector<Term>& terms,
                                  const std::vector<Eigen::Index>& earliest,
                                  const Eigen::VectorXd& scores,
                                  double thin_percent);

/// Full posIdfRank of one document. Documents where every term has zero idf
/// fall back to unit idf weights (with a warning).
DocumentTermRanking rank_document(const TermDocument& doc, const IdfTable& idf, const RankingParams& params);

/// Ranks every document; `threads == 0` picks the hardware concurrency.
/// Output order matches input order regardless of scheduling.
std::vector<DocumentTermRanking> rank_corpus(std::span<const TermDocument> docs,
                                             const IdfTable& idf,
                                             const RankingParams& params,
                                             unsigned threads = 0);

} // namespace termtopics

#endif // TERMTOPICS_RANK_HPP
