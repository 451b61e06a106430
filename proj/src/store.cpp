#include "termtopics/store.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "termtopics/errors.hpp"

namespace termtopics {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Writes through a temporary file so readers never see a partial file.
void write_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, path);
}

json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("missing '" + path.string() + "'");
    }
    return json::parse(in);
}

json to_json(const CorpusMeta& m) {
    const auto& r = m.options.ranking;
    return {{"corpus_id", m.corpus_id},
            {"alpha", r.alpha},
            {"beta", r.beta},
            {"window", r.window},
            {"thin_percent", r.thin_percent},
            {"min_df", m.options.min_df},
            {"documents", m.documents},
            {"vertices", m.vertices},
            {"edges", m.edges},
            {"created_at", m.created_at}};
}

CorpusMeta corpus_meta_from_json(const json& j) {
    CorpusMeta m;
    m.corpus_id = j.at("corpus_id").get<std::string>();
    m.options.ranking.alpha = j.at("alpha").get<double>();
    m.options.ranking.beta = j.at("beta").get<double>();
    m.options.ranking.window = j.at("window").get<int>();
    m.options.ranking.thin_percent = j.at("thin_percent").get<double>();
    m.options.min_df = j.at("min_df").get<std::size_t>();
    m.documents = j.at("documents").get<std::size_t>();
    m.vertices = j.at("vertices").get<std::size_t>();
    m.edges = j.at("edges").get<std::size_t>();
    m.created_at = j.at("created_at").get<std::string>();
    return m;
}

json to_json(const ModelMeta& m) {
    return {{"model_id", m.model_id},
            {"corpus_id", m.corpus_id},
            {"gamma", m.gamma},
            {"seed", m.seed},
            {"created_at", m.created_at},
            {"quality", m.quality},
            {"community_count", m.community_count},
            {"converged", m.converged},
            {"passes", m.passes}};
}

ModelMeta model_meta_from_json(const json& j) {
    ModelMeta m;
    m.model_id = j.at("model_id").get<std::string>();
    m.corpus_id = j.at("corpus_id").get<std::string>();
    m.gamma = j.at("gamma").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.created_at = j.at("created_at").get<std::string>();
    m.quality = j.at("quality").get<double>();
    m.community_count = j.at("community_count").get<int>();
    m.converged = j.at("converged").get<bool>();
    m.passes = j.at("passes").get<int>();
    return m;
}

} // namespace

std::string model_id_for(const std::string& corpus_id, double gamma, std::uint64_t seed) {
    // Shortest decimal that reads back as the same double.
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, gamma);
        if (std::strtod(buf, nullptr) == gamma) {
            break;
        }
    }
    std::string text = buf;
    if (auto plus = text.find('+'); plus != std::string::npos) {
        text.erase(plus, 1);
    }
    return corpus_id + "_g" + text + "_s" + std::to_string(seed);
}

bool is_valid_id(std::string_view id) {
    if (id.empty() || id.size() > 200 || id.front() == '.') {
        return false;
    }
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '_' || c == '-';
        if (!ok) {
            return false;
        }
    }
    return true;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Store::Store(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_ / "corpora");
    fs::create_directories(root_ / "models");
}

fs::path Store::corpus_dir(const std::string& id) const {
    if (!is_valid_id(id)) {
        throw ValidationError("invalid corpus id '" + id + "'");
    }
    return root_ / "corpora" / id;
}

fs::path Store::model_dir(const std::string& id) const {
    if (!is_valid_id(id)) {
        throw NotFoundError("invalid model id '" + id + "'");
    }
    return root_ / "models" / id;
}

bool Store::has_corpus(const std::string& corpus_id) const {
    return is_valid_id(corpus_id) && fs::exists(corpus_dir(corpus_id) / "meta.json");
}

std::vector<CorpusMeta> Store::list_corpora() const {
    std::vector<CorpusMeta> out;
    for (const auto& entry : fs::directory_iterator(root_ / "corpora")) {
        if (fs::exists(entry.path() / "meta.json")) {
            out.push_back(corpus_meta_from_json(read_json(entry.path() / "meta.json")));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.corpus_id < b.corpus_id; });
    return out;
}

void Store::save_corpus(const PreparedCorpus& prepared, const CorpusMeta& meta) const {
    const fs::path dir = corpus_dir(meta.corpus_id);
    fs::create_directories(dir);
    std::ostringstream corpus;
    write_corpus(corpus, prepared.corpus);
    write_file(dir / "corpus.jsonl", corpus.str());
    std::ostringstream stopwords;
    prepared.stopwords.write(stopwords);
    write_file(dir / "stopwords.txt", stopwords.str());
    // meta.json last: its presence marks the corpus as complete.
    write_file(dir / "meta.json", to_json(meta).dump(2) + "\n");
}

CorpusMeta Store::corpus_meta(const std::string& corpus_id) const {
    if (!has_corpus(corpus_id)) {
        throw NotFoundError("unknown corpus '" + corpus_id + "'");
    }
    return corpus_meta_from_json(read_json(corpus_dir(corpus_id) / "meta.json"));
}

PreparedCorpus Store::load_corpus(const std::string& corpus_id, unsigned threads) const {
    CorpusMeta meta = corpus_meta(corpus_id);
    const fs::path dir = corpus_dir(corpus_id);
    Corpus corpus = termtopics::load_corpus(dir / "corpus.jsonl", CorpusFormat::AnnotatedJsonl);
    corpus.corpus_id = corpus_id;
    IngestOptions options = meta.options;
    options.threads = threads;
    return prepare_corpus(std::move(corpus), StopwordSet::load(dir / "stopwords.txt"), options);
}

bool Store::has_model(const std::string& model_id) const {
    return is_valid_id(model_id) && fs::exists(model_dir(model_id) / "meta.json");
}

std::vector<ModelMeta> Store::list_models(const std::string& corpus_id) const {
    std::vector<ModelMeta> out;
    for (const auto& entry : fs::directory_iterator(root_ / "models")) {
        if (fs::exists(entry.path() / "meta.json")) {
            ModelMeta m = model_meta_from_json(read_json(entry.path() / "meta.json"));
            if (m.corpus_id == corpus_id) {
                out.push_back(std::move(m));
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.gamma != b.gamma ? a.gamma < b.gamma : a.seed < b.seed;
    });
    return out;
}

void Store::save_model(const ModelMeta& meta, const TermNetwork& net, const PartitionRecord& record) const {
    const fs::path dir = model_dir(meta.model_id);
    fs::create_directories(dir);
    std::ostringstream partition;
    write_partition(partition, net, record);
    write_file(dir / "partition.tsv", partition.str());
    write_file(dir / "meta.json", to_json(meta).dump(2) + "\n");
}

ModelMeta Store::model_meta(const std::string& model_id) const {
    if (!has_model(model_id)) {
        throw NotFoundError("unknown model '" + model_id + "'");
    }
    return model_meta_from_json(read_json(model_dir(model_id) / "meta.json"));
}

PartitionRecord Store::load_partition(const std::string& model_id, const TermNetwork& net) const {
    std::ifstream in(model_dir(model_id) / "partition.tsv");
    if (!in) {
        throw NotFoundError("missing partition for model '" + model_id + "'");
    }
    return read_partition(in, net);
}

} // namespace termtopics
