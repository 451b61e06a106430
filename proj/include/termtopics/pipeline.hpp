#ifndef TERMTOPICS_PIPELINE_HPP
#define TERMTOPICS_PIPELINE_HPP

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "termtopics/analytics.hpp"
#include "termtopics/corpus.hpp"
#include "termtopics/graph.hpp"
#include "termtopics/leiden.hpp"
#include "termtopics/preprocess.hpp"
#include "termtopics/rank.hpp"
#include "termtopics/topicstats.hpp"

namespace termtopics {

/// Called with a stage name as a long computation advances.
using ProgressFn = std::function<void(std::string_view stage)>;

struct IngestOptions {
    RankingParams ranking;
    std::size_t min_df = 0; ///< rare-edge pruning threshold, 0 = off
    unsigned threads = 0;   ///< ranking workers, 0 = hardware concurrency
};

/// A corpus after filtering, ranking, thinning and network construction.
struct PreparedCorpus {
    Corpus corpus;
    StopwordSet stopwords;
    IngestOptions options;
    std::vector<TermDocument> term_docs;
    IdfTable idf;
    std::vector<DocumentTermRanking> rankings;
    TermNetwork network;

    std::vector<std::string> doc_ids() const;
};

PreparedCorpus prepare_corpus(Corpus corpus, StopwordSet stopwords, const IngestOptions& options,
                              const ProgressFn& progress = {});

struct ModelOptions {
    ModularityParams modularity;
    TopicOptions topics;
    TsneParams tsne; ///< the seed is taken from `modularity`
};

struct TopicModel {
    ModularityParams params;
    Partition partition;
    double quality = 0;
    bool converged = true;
    int passes = 0;
    RatingTable ratings;
    std::vector<Topic> topics;
    Eigen::MatrixXd proportions; ///< documents x topics, corpus order
    DocumentMap map;

    int topic_count() const { return partition.community_count(); }
    PartitionRecord partition_record() const { return {partition, params.gamma, params.seed, quality}; }
};

/// Leiden partition plus every derived artifact.
TopicModel build_topic_model(const PreparedCorpus& prepared, const ModelOptions& options,
                             const EmbeddingTable* embeddings = nullptr, const ProgressFn& progress = {});

/// Derived artifacts for a stored partition.
TopicModel topic_model_from_partition(const PreparedCorpus& prepared, const PartitionRecord& record,
                                      const ModelOptions& options, const EmbeddingTable* embeddings = nullptr);

/// `topic_id,term,rating,rank,stratum` for every displayed topic term.
std::string topic_terms_csv(const TopicModel& model);
/// `doc_id,topic_0,...` with one proportion row per document.
std::string doc_topics_csv(const PreparedCorpus& prepared, const TopicModel& model);

} // namespace termtopics

#endif // TERMTOPICS_PIPELINE_HPP
