#include "termtopics/pipeline.hpp"

#include <cstdio>
#include <sstream>

#include "termtopics/csv.hpp"
#include "termtopics/errors.hpp"

namespace termtopics {

namespace {

void report(const ProgressFn& progress, std::string_view stage) {
    if (progress) {
        progress(stage);
    }
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void derive_artifacts(const PreparedCorpus& prepared, const ModelOptions& options,
                      const EmbeddingTable* embeddings, TopicModel& model, const ProgressFn& progress) {
    report(progress, "rating");
    model.ratings = RatingTable(prepared.rankings);
    report(progress, "stratification");
    model.topics = build_topics(prepared.network, model.partition, model.ratings, embeddings, options.topics);
    report(progress, "proportions");
    model.proportions = topic_proportion_matrix(prepared.rankings, prepared.network, model.partition);
    report(progress, "layout");
    TsneParams tsne = options.tsne;
    tsne.seed = model.params.seed;
    model.map = document_map(model.proportions, tsne);
}

} // namespace

std::vector<std::string> PreparedCorpus::doc_ids() const {
    std::vector<std::string> ids;
    ids.reserve(corpus.documents.size());
    for (const auto& d : corpus.documents) {
        ids.push_back(d.doc_id);
    }
    return ids;
}

PreparedCorpus prepare_corpus(Corpus corpus, StopwordSet stopwords, const IngestOptions& options,
                              const ProgressFn& progress) {
    options.ranking.validate();
    PreparedCorpus out;
    out.corpus = std::move(corpus);
    out.corpus.ingest_params = options.ranking;
    out.stopwords = std::move(stopwords);
    out.options = options;

    report(progress, "filter");
    out.term_docs.reserve(out.corpus.documents.size());
    for (const auto& doc : out.corpus.documents) {
        out.term_docs.push_back(preprocess_document(doc, out.stopwords));
    }
    report(progress, "rank");
    out.idf = compute_idf(out.term_docs);
    out.rankings = rank_corpus(out.term_docs, out.idf, options.ranking, options.threads);
    report(progress, "network");
    out.network = build_network(out.rankings);
    if (options.min_df > 0) {
        out.network = prune_rare_edges(out.network, options.min_df);
    }
    if (out.network.vertex_count() == 0) {
        throw ValidationError("no document retains any term; the term network is empty");
    }
    return out;
}

TopicModel build_topic_model(const PreparedCorpus& prepared, const ModelOptions& options,
                             const EmbeddingTable* embeddings, const ProgressFn& progress) {
    TopicModel model;
    model.params = options.modularity;
    report(progress, "leiden");
    LeidenResult leiden = leiden_partition(prepared.network, options.modularity);
    model.partition = std::move(leiden.partition);
    model.quality = leiden.quality;
    model.converged = leiden.converged;
    model.passes = leiden.passes;
    derive_artifacts(prepared, options, embeddings, model, progress);
    return model;
}

TopicModel topic_model_from_partition(const PreparedCorpus& prepared, const PartitionRecord& record,
                                      const ModelOptions& options, const EmbeddingTable* embeddings) {
    if (record.partition.size() != prepared.network.vertex_count()) {
        throw ValidationError("stored partition does not match the corpus network");
    }
    TopicModel model;
    model.params = options.modularity;
    model.params.gamma = record.gamma;
    model.params.seed = record.seed;
    model.partition = record.partition;
    model.quality = record.quality;
    derive_artifacts(prepared, options, embeddings, model, {});
    return model;
}

std::string topic_terms_csv(const TopicModel& model) {
    std::ostringstream out;
    const std::vector<std::string> header = {"topic_id", "term", "rating", "rank", "stratum"};
    write_csv_row(out, header);
    for (const auto& topic : model.topics) {
        for (const auto& t : topic.terms) {
            if (!t.displayed) {
                continue;
            }
            const std::vector<std::string> row = {std::to_string(topic.topic_id), t.term, format_number(t.rating),
                                                  std::to_string(t.rank), std::to_string(t.stratum)};
            write_csv_row(out, row);
        }
    }
    return out.str();
}

std::string doc_topics_csv(const PreparedCorpus& prepared, const TopicModel& model) {
    std::ostringstream out;
    std::vector<std::string> row = {"doc_id"};
    for (int t = 0; t < model.topic_count(); ++t) {
        row.push_back("topic_" + std::to_string(t));
    }
    write_csv_row(out, row);
    for (std::size_t d = 0; d < prepared.corpus.documents.size(); ++d) {
        row.assign(1, prepared.corpus.documents[d].doc_id);
        for (int t = 0; t < model.topic_count(); ++t) {
            row.push_back(format_number(model.proportions(static_cast<Eigen::Index>(d), t)));
        }
        write_csv_row(out, row);
    }
    return out.str();
}

} // namespace termtopics
