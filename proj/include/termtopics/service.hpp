#ifndef TERMTOPICS_SERVICE_HPP
#define TERMTOPICS_SERVICE_HPP

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "termtopics/embeddings.hpp"
#include "termtopics/jobs.hpp"
#include "termtopics/pipeline.hpp"
#include "termtopics/store.hpp"

namespace termtopics {

struct ServiceOptions {
    std::filesystem::path data_dir = "data";
    std::optional<std::filesystem::path> embeddings;
    ModelOptions model;   ///< gamma and seed are overridden per request
    unsigned threads = 0; ///< ranking workers
};

/// Environment variable that overrides the data directory.
inline constexpr const char* kDataDirEnv = "TERMTOPICS_DATA_DIR";

/// Corpus and model management plus the read-only views behind the HTTP API.
/// Thread-safe; model builds are serialized per corpus.
class TopicService {
public:
    explicit TopicService(ServiceOptions options);

    const ServiceOptions& options() const { return options_; }
    const Store& store() const { return store_; }

    struct UploadRequest {
        std::string content;
        CorpusFormat format = CorpusFormat::AnnotatedJsonl;
        std::string corpus_id;
        IngestOptions ingest;
        std::optional<StopwordSet> stopwords; ///< built-in English list when empty
    };

    /// Starts an asynchronous ingest. Throws ConflictError when the id exists
    /// or is being ingested, ValidationError for bad ids or parameters.
    std::string add_corpus(UploadRequest request);
    /// Synchronous ingest, same checks.
    CorpusMeta ingest(UploadRequest request);

    std::vector<CorpusMeta> list_corpora() const;

    struct BuildTicket {
        std::string job_id;
        std::string model_id;
        bool cached = false;
    };

    /// Starts an asynchronous model build, or returns the cached model.
    /// Throws NotFoundError for an unknown corpus, ValidationError for gamma <= 0.
    BuildTicket request_model(const std::string& corpus_id, double gamma, std::uint64_t seed);
    /// Synchronous build; returns the cached record when it exists.
    ModelMeta build_model(const std::string& corpus_id, double gamma, std::uint64_t seed);

    JobStatus job(const std::string& job_id) const { return jobs_.status(job_id); }
    JobStatus wait(const std::string& job_id) const { return jobs_.wait(job_id); }

    nlohmann::json corpora_view() const;
    nlohmann::json job_view(const std::string& job_id) const;
    nlohmann::json model_view(const std::string& model_id);
    nlohmann::json models_view(const std::string& corpus_id) const;
    nlohmann::json map_view(const std::string& model_id);
    nlohmann::json topics_view(const std::string& model_id);
    nlohmann::json topic_view(const std::string& model_id, int topic);
    nlohmann::json document_view(const std::string& model_id, const std::string& doc_id);
    /// Empty `topics` selects every topic.
    nlohmann::json timeseries_view(const std::string& model_id, const std::vector<int>& topics);
    nlohmann::json themes_view(const std::string& model_id);

    enum class ExportKind { TopicTerms, DocTopics };
    static std::optional<ExportKind> parse_export_kind(std::string_view name);
    std::string export_csv(const std::string& model_id, ExportKind kind);
    /// Writes topic_terms.csv and doc_topics.csv into `dir`.
    void export_downloads(const std::string& model_id, const std::filesystem::path& dir);

    struct LoadedModel {
        ModelMeta meta;
        std::shared_ptr<const PreparedCorpus> corpus;
        TopicModel model;
    };
    std::shared_ptr<const LoadedModel> model(const std::string& model_id);
    std::shared_ptr<const PreparedCorpus> corpus(const std::string& corpus_id);

private:
    void reserve_corpus_id(const UploadRequest& request);
    CorpusMeta run_ingest(UploadRequest request, const ProgressFn& progress);
    ModelMeta run_build(const std::string& corpus_id, double gamma, std::uint64_t seed, const ProgressFn& progress);
    std::mutex& corpus_build_mutex(const std::string& corpus_id);
    ModelOptions model_options(double gamma, std::uint64_t seed) const;

    ServiceOptions options_;
    Store store_;
    EmbeddingTable embeddings_;

    mutable std::mutex mutex_;
    std::set<std::string> ingesting_;
    std::map<std::string, std::shared_ptr<const PreparedCorpus>> corpora_;
    std::map<std::string, std::shared_ptr<const LoadedModel>> models_;
    std::map<std::string, std::unique_ptr<std::mutex>> build_mutexes_;
    std::map<std::string, std::string> pending_builds_; ///< model id -> job id

    JobManager jobs_; // last: joins job threads before the state above goes away
};

} // namespace termtopics

#endif // TERMTOPICS_SERVICE_HPP
