#ifndef TERMTOPICS_TOPICSTATS_HPP
#define TERMTOPICS_TOPICSTATS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "termtopics/embeddings.hpp"
#include "termtopics/graph.hpp"
#include "termtopics/partition.hpp"
#include "termtopics/rank.hpp"

namespace termtopics {

/// Documents listed for a topic need a proportion strictly above this.
inline constexpr double kTopicDocumentThreshold = 0.15;
inline constexpr std::size_t kTopicDocumentLimit = 30;
/// Topics at or above this document proportion are highlighted.
inline constexpr double kHighlightThreshold = 0.10;
/// Prior rating of an unseen term.
inline constexpr double kRatingPrior = 0.3;

/// 3, 2 or 1 when the 1-based rank lies within the top 5, 10 or 15 percent
/// (ceil) of n terms, else 0.
int band_score(std::size_t rank, std::size_t n);
/// Throws LookupError when the term is not in the ranking.
int band_score(const DocumentTermRanking& ranking, const std::string& term);

/// Bayesian average (0.3 C + s) / (C + d).
double bayesian_average(double constant, double documents, double band_sum);

struct TermRating {
    std::string term;
    std::size_t documents = 0; ///< d(a): thinned documents retaining the term
    double band_sum = 0;       ///< s(a) over those documents
    double rating = 0;         ///< x(a)
};

/// Corpus-level term ratings over thinned documents.
class RatingTable {
public:
    RatingTable() = default;
    explicit RatingTable(std::span<const DocumentTermRanking> rankings);

    /// C: summed per-document retained unique-term counts over the number of
    /// distinct retained terms.
    double constant() const { return constant_; }
    std::size_t size() const { return ratings_.size(); }
    bool contains(const std::string& term) const { return ratings_.contains(term); }
    /// Throws LookupError.
    const TermRating& at(const std::string& term) const;

private:
    double constant_ = 0;
    std::unordered_map<std::string, TermRating> ratings_;
};

TermRating bayesian_rating(std::span<const DocumentTermRanking> rankings, const std::string& term);

struct RatedTerm {
    std::string term;
    double rating = 0;
};

struct Stratum {
    std::vector<std::string> terms; ///< by rating, best first
    double best_rating = 0;
    bool embedded = true;
};

/// Ward clustering of the embedded terms into min(strata, embedded count)
/// groups, plus one trailing group of unembedded terms. Strata are ordered by
/// their best member's rating.
std::vector<Stratum> stratify_terms(std::span<const RatedTerm> terms, const EmbeddingTable* embeddings, int strata);

struct TopicTerm {
    std::string term;
    double rating = 0;
    int rank = 0;        ///< 1-based within the topic
    bool displayed = false;
    int stratum = -1;    ///< index into Topic::strata when displayed
    double font_size = 0;
};

struct Topic {
    int topic_id = 0;
    std::vector<TopicTerm> terms; ///< every member, best rated first
    std::vector<Stratum> strata;
    std::string label;

    std::size_t displayed_count() const;
};

struct TopicOptions {
    std::size_t display_terms = 100;
    int strata = 8;
    double min_font = 12.0;
    double max_font = 44.0;
};

/// Font size for a 1-based rank among `displayed` terms: linear from max_font
/// at rank 1 down to min_font at the last rank.
double font_size(int rank, std::size_t displayed, const TopicOptions& options);

std::vector<Topic> build_topics(const TermNetwork& net, const Partition& partition, const RatingTable& ratings,
                                const EmbeddingTable* embeddings, const TopicOptions& options = {});

/// Share of the document's retained unique terms in each topic; all zeros for
/// a document without retained terms.
Eigen::VectorXd doc_topic_proportions(const DocumentTermRanking& ranking, const TermNetwork& net,
                                      const Partition& partition);

/// Rows are documents, columns topics.
Eigen::MatrixXd topic_proportion_matrix(std::span<const DocumentTermRanking> rankings, const TermNetwork& net,
                                        const Partition& partition);

/// Documents whose proportion exceeds 0.15, best first (ties by id), at most 30.
std::vector<std::pair<std::string, double>> topic_documents(int topic, const Eigen::MatrixXd& proportions,
                                                            std::span<const std::string> doc_ids);

struct Highlight {
    std::int64_t first_position = 0;
    std::int64_t last_position = 0;
    std::string term;
    int topic = 0;
};

/// Every occurrence of a retained term whose topic has a document proportion of at least 0.10.
std::vector<Highlight> document_highlights(const TermDocument& doc, const DocumentTermRanking& ranking,
                                           const TermNetwork& net, const Partition& partition,
                                           const Eigen::Ref<const Eigen::VectorXd>& proportions);

} // namespace termtopics

#endif // TERMTOPICS_TOPICSTATS_HPP
