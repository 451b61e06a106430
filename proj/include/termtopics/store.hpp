#ifndef TERMTOPICS_STORE_HPP
#define TERMTOPICS_STORE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "termtopics/partition.hpp"
#include "termtopics/pipeline.hpp"

namespace termtopics {

struct CorpusMeta {
    std::string corpus_id;
    IngestOptions options;
    std::size_t documents = 0;
    std::size_t vertices = 0;
    std::size_t edges = 0;
    std::string created_at;
};

struct ModelMeta {
    std::string model_id;
    std::string corpus_id;
    double gamma = 1.0;
    std::uint64_t seed = 42;
    std::string created_at;
    double quality = 0;
    int community_count = 0;
    bool converged = true;
    int passes = 0;
};

/// Stable id of the model built for (corpus, gamma, seed).
std::string model_id_for(const std::string& corpus_id, double gamma, std::uint64_t seed);

/// Ids become directory names: letters, digits, '.', '_' and '-' only, not starting with '.'.
bool is_valid_id(std::string_view id);

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string utc_timestamp();

/// File-backed persistence under a data directory:
///
///     corpora/<corpus_id>/corpus.jsonl     annotated-jsonl
///     corpora/<corpus_id>/stopwords.txt
///     corpora/<corpus_id>/meta.json
///     models/<model_id>/partition.tsv      partition export format
///     models/<model_id>/meta.json
class Store {
public:
    explicit Store(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    bool has_corpus(const std::string& corpus_id) const;
    std::vector<CorpusMeta> list_corpora() const;
    void save_corpus(const PreparedCorpus& prepared, const CorpusMeta& meta) const;
    CorpusMeta corpus_meta(const std::string& corpus_id) const;
    /// Re-runs preprocessing from the stored annotated corpus. Throws NotFoundError.
    PreparedCorpus load_corpus(const std::string& corpus_id, unsigned threads = 0) const;

    bool has_model(const std::string& model_id) const;
    std::vector<ModelMeta> list_models(const std::string& corpus_id) const;
    void save_model(const ModelMeta& meta, const TermNetwork& net, const PartitionRecord& record) const;
    ModelMeta model_meta(const std::string& model_id) const;
    PartitionRecord load_partition(const std::string& model_id, const TermNetwork& net) const;

private:
    std::filesystem::path corpus_dir(const std::string& id) const;
    std::filesystem::path model_dir(const std::string& id) const;

    std::filesystem::path root_;
};

} // namespace termtopics

#endif // TERMTOPICS_STORE_HPP
