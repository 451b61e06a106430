// Command-line front end: ingest corpora, build models, export CSVs, serve the API.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "termtopics/errors.hpp"
#include "termtopics/graph.hpp"
#include "termtopics/http_server.hpp"
#include "termtopics/service.hpp"

#include <CLI11.hpp>

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw termtopics::NotFoundError("cannot open '" + path.string() + "'");
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::filesystem::path data_dir(const std::string& flag) {
    if (const char* env = std::getenv(termtopics::kDataDirEnv); env && *env) {
        return env;
    }
    return flag;
}

} // namespace

int main(int argc, char** argv) {
    using namespace termtopics;

    CLI::App app{"Term-community topic detection"};
    app.require_subcommand(1);
    std::string data_flag = "data";
    app.add_option("--data-dir", data_flag, "Data directory (overridden by " + std::string(kDataDirEnv) + ")");
    std::string embeddings;
    unsigned threads = 0;
    app.add_option("--threads", threads, "Ranking workers, 0 = all cores");

    auto* ingest = app.add_subcommand("ingest", "Preprocess and store a corpus");
    std::string corpus_file;
    std::string format = "annotated-jsonl";
    std::string corpus_id;
    std::string stopwords_file;
    std::string dump_dir;
    IngestOptions ingest_options;
    ingest->add_option("file", corpus_file, "Corpus file")->required()->check(CLI::ExistingFile);
    ingest->add_option("--format", format, "annotated-jsonl or plain-jsonl")->capture_default_str();
    ingest->add_option("--corpus-id", corpus_id, "Defaults to the file name stem");
    ingest->add_option("--alpha", ingest_options.ranking.alpha)->capture_default_str();
    ingest->add_option("--beta", ingest_options.ranking.beta)->capture_default_str();
    ingest->add_option("--window", ingest_options.ranking.window)->capture_default_str();
    ingest->add_option("--thin-percent", ingest_options.ranking.thin_percent)->capture_default_str();
    ingest->add_option("--min-df", ingest_options.min_df, "Prune edges between two terms rarer than this");
    ingest->add_option("--stopwords", stopwords_file, "One stopword per line")->check(CLI::ExistingFile);
    ingest->add_option("--dump-network", dump_dir, "Write edges.tsv and vertices.tsv here");

    auto* model = app.add_subcommand("model", "Build a topic model");
    double gamma = 1.0;
    std::uint64_t seed = 42;
    model->add_option("--corpus-id", corpus_id)->required();
    model->add_option("--gamma", gamma, "Resolution")->capture_default_str();
    model->add_option("--seed", seed)->capture_default_str();
    model->add_option("--embeddings", embeddings, "Word vectors for term strata")->check(CLI::ExistingFile);

    auto* exporter = app.add_subcommand("export", "Write topic_terms.csv and doc_topics.csv");
    std::string model_id;
    std::string out_dir = ".";
    exporter->add_option("--model-id", model_id)->required();
    exporter->add_option("--out-dir", out_dir)->capture_default_str();
    exporter->add_option("--embeddings", embeddings)->check(CLI::ExistingFile);

    auto* server = app.add_subcommand("serve", "Serve the HTTP API");
    std::string host = "127.0.0.1";
    int port = 8080;
    server->add_option("--host", host)->capture_default_str();
    server->add_option("--port", port)->capture_default_str();
    server->add_option("--embeddings", embeddings)->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        ServiceOptions options;
        options.data_dir = data_dir(data_flag);
        options.threads = threads;
        if (!embeddings.empty()) {
            options.embeddings = embeddings;
        }
        TopicService service(options);

        if (*ingest) {
            TopicService::UploadRequest up;
            up.content = read_file(corpus_file);
            const auto parsed = parse_corpus_format(format);
            if (!parsed) {
                throw ValidationError("unknown corpus format '" + format + "'");
            }
            up.format = *parsed;
            up.corpus_id = corpus_id.empty() ? std::filesystem::path(corpus_file).stem().string() : corpus_id;
            up.ingest = ingest_options;
            if (!stopwords_file.empty()) {
                up.stopwords = StopwordSet::load(stopwords_file);
            }
            const CorpusMeta meta = service.ingest(std::move(up));
            std::cout << meta.corpus_id << '\t' << meta.documents << " documents\t" << meta.vertices << " terms\t"
                      << meta.edges << " edges\n";
            if (!dump_dir.empty()) {
                dump_network(dump_dir, service.corpus(meta.corpus_id)->network);
            }
        } else if (*model) {
            const ModelMeta meta = service.build_model(corpus_id, gamma, seed);
            std::cout << meta.model_id << '\t' << meta.community_count << " topics\tquality " << meta.quality << '\n';
        } else if (*exporter) {
            service.export_downloads(model_id, out_dir);
            std::cout << out_dir << "/topic_terms.csv\n" << out_dir << "/doc_topics.csv\n";
        } else if (*server) {
            serve(service, host, port);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
