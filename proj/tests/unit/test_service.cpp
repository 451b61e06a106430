#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "synthetic.hpp"
#include "termtopics/csv.hpp"
#include "termtopics/errors.hpp"
#include "termtopics/jobs.hpp"
#include "termtopics/service.hpp"

using namespace termtopics;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("termtopics_service_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

// Two planted topics, everything retained, plus a document whose eleven terms
// are ten from the first topic and one from the second.
synthetic::PlantedCorpus mixed_corpus() {
    synthetic::PlantedSpec spec;
    spec.documents = 60;
    spec.topics = 2;
    spec.vocabulary = 30;
    spec.noise_rate = 0;
    auto planted = synthetic::planted_corpus(spec, "mixed");
    for (int d = 0; d < 10; d += 2) {
        auto& doc = planted.corpus.documents[static_cast<std::size_t>(d)];
        doc.tokens.push_back({"sea, salt", "sea, salt", PosTag::NOUN, std::nullopt, 100});
    }
    AnnotatedDocument doc;
    doc.doc_id = "blend";
    doc.title = "Blend";
    doc.date = Date{2021, 6, 1};
    for (int w = 0; w < 10; ++w) {
        const auto t = synthetic::topic_term(0, w);
        doc.tokens.push_back({t, t, PosTag::NOUN, std::nullopt, w});
    }
    const auto lone = synthetic::topic_term(1, 0);
    doc.tokens.push_back({lone, lone, PosTag::NOUN, std::nullopt, 10});
    planted.corpus.documents.push_back(doc);
    return planted;
}

TopicService::UploadRequest upload(const Corpus& corpus, const std::string& id, double thin = 100) {
    TopicService::UploadRequest up;
    up.content = synthetic::to_jsonl(corpus);
    up.corpus_id = id;
    up.ingest.ranking.thin_percent = thin;
    up.ingest.threads = 1;
    return up;
}

ServiceOptions options_for(const fs::path& dir) {
    ServiceOptions o;
    o.data_dir = dir;
    o.threads = 1;
    o.model.tsne.iterations = 400;
    return o;
}

} // namespace

TEST_CASE("csv quoting and parsing") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("sea, salt") == "\"sea, salt\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_field("two\nlines") == "\"two\nlines\"");
    std::ostringstream out;
    const std::vector<std::string> row = {"a", "b,c", "d\"e", ""};
    write_csv_row(out, row);
    CHECK(out.str() == "a,\"b,c\",\"d\"\"e\",\r\n");
    const auto parsed = parse_csv(out.str() + "x,y\n");
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0] == row);
    CHECK(parsed[1] == std::vector<std::string>{"x", "y"});
    CHECK_THROWS_AS(parse_csv("\"open"), Error);
}

TEST_CASE("model ids and id validation") {
    CHECK(model_id_for("c", 1.0, 42) == "c_g1_s42");
    CHECK(model_id_for("c", 0.8, 7) == "c_g0.8_s7");
    CHECK(model_id_for("c", 1e6, 1) == "c_g1e06_s1");
    CHECK(is_valid_id(model_id_for("c", 1e6, 1)));
    CHECK(is_valid_id("eu-news_2020.v1"));
    CHECK_FALSE(is_valid_id("../etc"));
    CHECK_FALSE(is_valid_id(".hidden"));
    CHECK_FALSE(is_valid_id("a b"));
    CHECK_FALSE(is_valid_id(""));
}

TEST_CASE("job states only move forward") {
    JobManager jobs;
    const auto ok = jobs.submit("test", "c", "", [](JobContext& ctx) { ctx.set_stage("working"); });
    const auto done = jobs.wait(ok);
    CHECK(done.state == JobState::Done);
    CHECK(done.history == std::vector<JobState>{JobState::Queued, JobState::Running, JobState::Done});
    CHECK(done.stage == "working");

    const auto bad = jobs.submit("test", "c", "", [](JobContext&) { throw IngestError(7, "broken"); });
    const auto failed = jobs.wait(bad);
    CHECK(failed.state == JobState::Failed);
    CHECK(failed.error == "line 7: broken");
    CHECK(failed.history == std::vector<JobState>{JobState::Queued, JobState::Running, JobState::Failed});

    const auto cached = jobs.status(jobs.record_done("model", "c", "m"));
    CHECK(cached.state == JobState::Done);
    CHECK(cached.model_id == "m");
    CHECK_THROWS_AS(jobs.status("nope"), NotFoundError);
    CHECK(to_string(JobState::Running) == "running");
}

TEST_CASE("corpus upload jobs") {
    TempDir dir;
    TopicService service(options_for(dir.path));
    const auto planted = mixed_corpus();

    const auto job = service.add_corpus(upload(planted.corpus, "mixed"));
    const auto status = service.wait(job);
    CHECK(status.state == JobState::Done);
    CHECK(status.history == std::vector<JobState>{JobState::Queued, JobState::Running, JobState::Done});
    REQUIRE(service.list_corpora().size() == 1);
    CHECK(service.list_corpora()[0].documents == 61);
    CHECK(service.corpora_view()["corpora"][0]["corpus_id"] == "mixed");

    CHECK_THROWS_AS(service.add_corpus(upload(planted.corpus, "mixed")), ConflictError);
    CHECK_THROWS_AS(service.add_corpus(upload(planted.corpus, "bad id")), ValidationError);
    auto even = upload(planted.corpus, "even");
    even.ingest.ranking.window = 4;
    CHECK_THROWS_AS(service.add_corpus(even), ValidationError);

    std::string text = synthetic::to_jsonl(planted.corpus);
    std::istringstream lines(text);
    std::string corrupt;
    std::string line;
    for (int i = 0; i < 6 && std::getline(lines, line); ++i) {
        corrupt += line + "\n";
    }
    corrupt += "{\"doc_id\": \"broken\", \"tokens\": [\n";
    TopicService::UploadRequest bad;
    bad.content = corrupt;
    bad.corpus_id = "corrupt";
    const auto failed = service.wait(service.add_corpus(bad));
    CHECK(failed.state == JobState::Failed);
    CHECK(failed.error.find("line 7") != std::string::npos);
    CHECK_FALSE(service.store().has_corpus("corrupt"));
    // The id is free again after a failed ingest.
    TopicService::UploadRequest retry = upload(planted.corpus, "corrupt");
    CHECK(service.wait(service.add_corpus(retry)).state == JobState::Done);
}

TEST_CASE("model builds, caching and views") {
    TempDir dir;
    const auto planted = mixed_corpus();
    std::map<std::string, std::string> bodies;
    std::string model_id;
    {
        TopicService service(options_for(dir.path));
        service.ingest(upload(planted.corpus, "mixed"));

        CHECK_THROWS_AS(service.request_model("x", 1.0, 42), NotFoundError);
        CHECK_THROWS_AS(service.request_model("mixed", 0.0, 42), ValidationError);
        CHECK_THROWS_AS(service.request_model("mixed", -1.0, 42), ValidationError);

        const auto first = service.request_model("mixed", 1.0, 42);
        CHECK_FALSE(first.cached);
        const auto built = service.wait(first.job_id);
        REQUIRE(built.state == JobState::Done);
        const auto second = service.request_model("mixed", 1.0, 42);
        CHECK(second.cached);
        CHECK(second.model_id == first.model_id);
        CHECK(service.job(second.job_id).state == JobState::Done);
        model_id = first.model_id;

        const auto model = service.model_view(model_id);
        CHECK(model["community_count"] == 2);
        CHECK(service.models_view("mixed")["models"].size() == 1);
        CHECK_THROWS_AS(service.models_view("nope"), NotFoundError);

        const auto topic = service.topic_view(model_id, 0);
        CHECK(topic["terms"].size() <= 100);
        CHECK(topic["terms"].size() > 0);
        CHECK(topic["strata"].size() >= 1);
        CHECK(topic["documents"].size() <= 30);
        for (const auto& t : topic["terms"]) {
            CHECK(t.contains("rating"));
            CHECK(t.contains("stratum"));
            CHECK(t["size"].get<double>() <= 44.0);
        }
        CHECK_THROWS_AS(service.topic_view(model_id, 2), NotFoundError);

        // The blended document holds 1/11 of the second topic: below the 0.10 threshold.
        const auto doc = service.document_view(model_id, "blend");
        const auto props = doc["proportions"].get<std::vector<double>>();
        const auto lone_topic = service.model(model_id)->model.partition.community(
            service.corpus("mixed")->network.index_of(synthetic::topic_term(1, 0)));
        CHECK(props[static_cast<std::size_t>(lone_topic)] == doctest::Approx(1.0 / 11));
        for (const auto& t : doc["topics"]) {
            CHECK(t["topic"] != lone_topic);
        }
        CHECK(doc["highlights"].size() == 10);
        for (const auto& h : doc["highlights"]) {
            CHECK(h["topic"] != lone_topic);
            const auto begin = h["char_begin"].get<long>();
            const auto end = h["char_end"].get<long>();
            REQUIRE(begin >= 0);
            CHECK(doc["text"].get<std::string>().substr(static_cast<std::size_t>(begin),
                                                        static_cast<std::size_t>(end - begin)) == h["term"]);
        }
        CHECK_THROWS_AS(service.document_view(model_id, "missing"), NotFoundError);

        const auto series = service.timeseries_view(model_id, {0, 1});
        REQUIRE(series["series"].size() == 2);
        CHECK(series["series"][0]["label"] == "Topic 0");
        CHECK(series["series"][1]["label"] == "Topic 1");
        CHECK_THROWS_AS(service.timeseries_view(model_id, {5}), NotFoundError);

        const auto themes = service.themes_view(model_id);
        CHECK(themes["tags"].size() == 3);

        const auto map = service.map_view(model_id);
        CHECK(map["points"].size() == 61);

        const std::string doc_topics = service.export_csv(model_id, TopicService::ExportKind::DocTopics);
        const auto rows = parse_csv(doc_topics);
        REQUIRE(rows.size() == 62);
        CHECK(rows[0] == std::vector<std::string>{"doc_id", "topic_0", "topic_1"});
        for (std::size_t r = 1; r < rows.size(); ++r) {
            REQUIRE(rows[r].size() == 3);
            CHECK(std::stod(rows[r][1]) + std::stod(rows[r][2]) == doctest::Approx(1.0).epsilon(1e-6));
        }
        const std::string topic_terms = service.export_csv(model_id, TopicService::ExportKind::TopicTerms);
        CHECK(topic_terms.find("\"sea, salt\"") != std::string::npos);
        CHECK(parse_csv(topic_terms)[0] ==
              std::vector<std::string>{"topic_id", "term", "rating", "rank", "stratum"});

        service.export_downloads(model_id, dir.path / "out");
        CHECK(fs::exists(dir.path / "out" / "topic_terms.csv"));
        std::ifstream in(dir.path / "out" / "doc_topics.csv", std::ios::binary);
        std::stringstream file;
        file << in.rdbuf();
        CHECK(file.str() == doc_topics);

        bodies["model"] = model.dump();
        bodies["map"] = map.dump();
        bodies["topics"] = service.topics_view(model_id).dump();
        bodies["topic"] = topic.dump();
        bodies["doc"] = doc.dump();
        bodies["series"] = series.dump();
        bodies["themes"] = themes.dump();
        bodies["doc_topics"] = doc_topics;
        bodies["topic_terms"] = topic_terms;
        CHECK(service.map_view(model_id).dump() == bodies["map"]);
        CHECK(service.topic_view(model_id, 0).dump() == bodies["topic"]);
    }

    // A fresh service over the same data directory reproduces every response.
    TopicService restarted(options_for(dir.path));
    CHECK(restarted.model_view(model_id).dump() == bodies["model"]);
    CHECK(restarted.map_view(model_id).dump() == bodies["map"]);
    CHECK(restarted.topics_view(model_id).dump() == bodies["topics"]);
    CHECK(restarted.topic_view(model_id, 0).dump() == bodies["topic"]);
    CHECK(restarted.document_view(model_id, "blend").dump() == bodies["doc"]);
    CHECK(restarted.timeseries_view(model_id, {0, 1}).dump() == bodies["series"]);
    CHECK(restarted.themes_view(model_id).dump() == bodies["themes"]);
    CHECK(restarted.export_csv(model_id, TopicService::ExportKind::DocTopics) == bodies["doc_topics"]);
    CHECK(restarted.export_csv(model_id, TopicService::ExportKind::TopicTerms) == bodies["topic_terms"]);
    CHECK(restarted.build_model("mixed", 1.0, 42).model_id == model_id);
    CHECK_THROWS_AS(restarted.model_view("mixed_g9_s9"), NotFoundError);
}

TEST_CASE("builds for one corpus run one at a time") {
    TempDir dir;
    TopicService service(options_for(dir.path));
    const auto planted = mixed_corpus();
    service.ingest(upload(planted.corpus, "mixed"));
    const auto a = service.request_model("mixed", 1.0, 1);
    const auto b = service.request_model("mixed", 2.0, 1);
    const auto again = service.request_model("mixed", 1.0, 1);
    if (!again.cached) {
        CHECK(again.job_id == a.job_id);
    }
    CHECK(service.wait(a.job_id).state == JobState::Done);
    CHECK(service.wait(b.job_id).state == JobState::Done);
    CHECK(service.models_view("mixed")["models"].size() == 2);
}
