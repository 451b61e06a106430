#include "termtopics/service.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "termtopics/errors.hpp"
#include "termtopics/log.hpp"

namespace termtopics {

using nlohmann::json;

namespace {

json to_json(const CorpusMeta& m) {
    const auto& r = m.options.ranking;
    return {{"corpus_id", m.corpus_id},
            {"params", {{"alpha", r.alpha}, {"beta", r.beta}, {"window", r.window}, {"thin_percent", r.thin_percent},
                        {"min_df", m.options.min_df}}},
            {"documents", m.documents},
            {"vertices", m.vertices},
            {"edges", m.edges},
            {"created_at", m.created_at}};
}

json to_json(const ModelMeta& m) {
    return {{"model_id", m.model_id},   {"corpus_id", m.corpus_id},
            {"gamma", m.gamma},         {"seed", m.seed},
            {"created_at", m.created_at}, {"quality", m.quality},
            {"community_count", m.community_count}, {"converged", m.converged},
            {"passes", m.passes}};
}

json to_json(const JobStatus& s) {
    json history = json::array();
    for (JobState h : s.history) {
        history.push_back(std::string(to_string(h)));
    }
    json out = {{"job_id", s.job_id}, {"kind", s.kind},   {"state", std::string(to_string(s.state))},
                {"stage", s.stage},   {"history", history}, {"corpus_id", s.corpus_id}};
    if (!s.model_id.empty()) {
        out["model_id"] = s.model_id;
    }
    if (!s.error.empty()) {
        out["error"] = s.error;
    }
    return out;
}

// Character span of each token inside `text`, found by scanning the surfaces
// left to right; {-1, -1} when a surface cannot be located.
std::vector<std::pair<long, long>> token_char_spans(const AnnotatedDocument& doc, const std::string& text) {
    std::vector<std::pair<long, long>> spans;
    std::size_t cursor = 0;
    for (const auto& token : doc.tokens) {
        const std::string& needle = token.surface.empty() ? token.lemma : token.surface;
        const std::size_t at = text.find(needle, cursor);
        if (at == std::string::npos) {
            spans.emplace_back(-1, -1);
            continue;
        }
        spans.emplace_back(static_cast<long>(at), static_cast<long>(at + needle.size()));
        cursor = at + needle.size();
    }
    return spans;
}

std::string display_text(const AnnotatedDocument& doc) {
    if (doc.raw_text) {
        return *doc.raw_text;
    }
    std::string text;
    for (const auto& token : doc.tokens) {
        if (!text.empty()) {
            text += ' ';
        }
        text += token.surface.empty() ? token.lemma : token.surface;
    }
    return text;
}

} // namespace

TopicService::TopicService(ServiceOptions options) : options_(std::move(options)), store_(options_.data_dir) {
    if (options_.embeddings) {
        embeddings_ = EmbeddingTable::load(*options_.embeddings);
        log_info("loaded " + std::to_string(embeddings_.size()) + " embeddings");
    }
}

ModelOptions TopicService::model_options(double gamma, std::uint64_t seed) const {
    ModelOptions o = options_.model;
    o.modularity.gamma = gamma;
    o.modularity.seed = seed;
    return o;
}

void TopicService::reserve_corpus_id(const UploadRequest& request) {
    if (!is_valid_id(request.corpus_id)) {
        throw ValidationError("invalid corpus id '" + request.corpus_id + "'");
    }
    request.ingest.ranking.validate();
    std::lock_guard lock(mutex_);
    if (store_.has_corpus(request.corpus_id) || ingesting_.contains(request.corpus_id)) {
        throw ConflictError("corpus '" + request.corpus_id + "' already exists");
    }
    ingesting_.insert(request.corpus_id);
}

CorpusMeta TopicService::run_ingest(UploadRequest request, const ProgressFn& progress) {
    const std::string id = request.corpus_id;
    try {
        if (progress) {
            progress("ingest");
        }
        std::istringstream in(request.content);
        Corpus corpus = read_corpus(in, request.format, id);
        StopwordSet stopwords = request.stopwords ? std::move(*request.stopwords) : StopwordSet::english();
        IngestOptions ingest = request.ingest;
        if (ingest.threads == 0) {
            ingest.threads = options_.threads;
        }
        auto prepared = std::make_shared<PreparedCorpus>(
            prepare_corpus(std::move(corpus), std::move(stopwords), ingest, progress));
        CorpusMeta meta;
        meta.corpus_id = id;
        meta.options = request.ingest;
        meta.documents = prepared->corpus.documents.size();
        meta.vertices = static_cast<std::size_t>(prepared->network.vertex_count());
        meta.edges = prepared->network.edge_count();
        meta.created_at = utc_timestamp();
        if (progress) {
            progress("store");
        }
        store_.save_corpus(*prepared, meta);
        std::lock_guard lock(mutex_);
        corpora_[id] = std::move(prepared);
        ingesting_.erase(id);
        return meta;
    } catch (...) {
        std::lock_guard lock(mutex_);
        ingesting_.erase(id);
        throw;
    }
}

std::string TopicService::add_corpus(UploadRequest request) {
    reserve_corpus_id(request);
    std::string id = request.corpus_id;
    return jobs_.submit("ingest", id, {}, [this, request = std::move(request)](JobContext& ctx) mutable {
        run_ingest(std::move(request), [&ctx](std::string_view stage) { ctx.set_stage(stage); });
    });
}

CorpusMeta TopicService::ingest(UploadRequest request) {
    reserve_corpus_id(request);
    return run_ingest(std::move(request), {});
}

std::vector<CorpusMeta> TopicService::list_corpora() const {
    return store_.list_corpora();
}

std::shared_ptr<const PreparedCorpus> TopicService::corpus(const std::string& corpus_id) {
    {
        std::lock_guard lock(mutex_);
        auto it = corpora_.find(corpus_id);
        if (it != corpora_.end()) {
            return it->second;
        }
    }
    auto loaded = std::make_shared<const PreparedCorpus>(store_.load_corpus(corpus_id, options_.threads));
    std::lock_guard lock(mutex_);
    auto [it, inserted] = corpora_.try_emplace(corpus_id, std::move(loaded));
    return it->second;
}

std::mutex& TopicService::corpus_build_mutex(const std::string& corpus_id) {
    std::lock_guard lock(mutex_);
    auto& m = build_mutexes_[corpus_id];
    if (!m) {
        m = std::make_unique<std::mutex>();
    }
    return *m;
}

ModelMeta TopicService::run_build(const std::string& corpus_id, double gamma, std::uint64_t seed,
                                  const ProgressFn& progress) {
    std::lock_guard build_lock(corpus_build_mutex(corpus_id));
    const std::string model_id = model_id_for(corpus_id, gamma, seed);
    if (store_.has_model(model_id)) {
        return store_.model_meta(model_id);
    }
    auto prepared = corpus(corpus_id);
    const ModelOptions options = model_options(gamma, seed);
    auto loaded = std::make_shared<LoadedModel>();
    loaded->corpus = prepared;
    loaded->model = build_topic_model(*prepared, options, embeddings_.empty() ? nullptr : &embeddings_, progress);

    ModelMeta meta;
    meta.model_id = model_id;
    meta.corpus_id = corpus_id;
    meta.gamma = gamma;
    meta.seed = seed;
    meta.created_at = utc_timestamp();
    meta.quality = loaded->model.quality;
    meta.community_count = loaded->model.topic_count();
    meta.converged = loaded->model.converged;
    meta.passes = loaded->model.passes;
    loaded->meta = meta;
    if (progress) {
        progress("store");
    }
    store_.save_model(meta, prepared->network, loaded->model.partition_record());
    std::lock_guard lock(mutex_);
    models_[model_id] = std::move(loaded);
    return meta;
}

TopicService::BuildTicket TopicService::request_model(const std::string& corpus_id, double gamma,
                                                      std::uint64_t seed) {
    if (!std::isfinite(gamma) || gamma <= 0) {
        throw ValidationError("gamma must be positive");
    }
    if (!store_.has_corpus(corpus_id)) {
        throw NotFoundError("unknown corpus '" + corpus_id + "'");
    }
    BuildTicket ticket;
    ticket.model_id = model_id_for(corpus_id, gamma, seed);
    if (store_.has_model(ticket.model_id)) {
        ticket.cached = true;
        ticket.job_id = jobs_.record_done("model", corpus_id, ticket.model_id);
        return ticket;
    }
    std::lock_guard lock(mutex_);
    if (auto it = pending_builds_.find(ticket.model_id); it != pending_builds_.end()) {
        const JobStatus s = jobs_.status(it->second);
        if (s.state == JobState::Queued || s.state == JobState::Running) {
            ticket.job_id = it->second;
            return ticket;
        }
    }
    ticket.job_id = jobs_.submit("model", corpus_id, ticket.model_id, [this, corpus_id, gamma, seed](JobContext& ctx) {
        run_build(corpus_id, gamma, seed, [&ctx](std::string_view stage) { ctx.set_stage(stage); });
    });
    pending_builds_[ticket.model_id] = ticket.job_id;
    return ticket;
}

ModelMeta TopicService::build_model(const std::string& corpus_id, double gamma, std::uint64_t seed) {
    if (!std::isfinite(gamma) || gamma <= 0) {
        throw ValidationError("gamma must be positive");
    }
    if (!store_.has_corpus(corpus_id)) {
        throw NotFoundError("unknown corpus '" + corpus_id + "'");
    }
    return run_build(corpus_id, gamma, seed, {});
}

std::shared_ptr<const TopicService::LoadedModel> TopicService::model(const std::string& model_id) {
    {
        std::lock_guard lock(mutex_);
        auto it = models_.find(model_id);
        if (it != models_.end()) {
            return it->second;
        }
    }
    const ModelMeta meta = store_.model_meta(model_id);
    auto loaded = std::make_shared<LoadedModel>();
    loaded->meta = meta;
    loaded->corpus = corpus(meta.corpus_id);
    const PartitionRecord record = store_.load_partition(model_id, loaded->corpus->network);
    loaded->model = topic_model_from_partition(*loaded->corpus, record, model_options(meta.gamma, meta.seed),
                                               embeddings_.empty() ? nullptr : &embeddings_);
    loaded->model.converged = meta.converged;
    loaded->model.passes = meta.passes;
    std::lock_guard lock(mutex_);
    auto [it, inserted] = models_.try_emplace(model_id, std::move(loaded));
    return it->second;
}

json TopicService::corpora_view() const {
    json list = json::array();
    for (const auto& m : list_corpora()) {
        list.push_back(to_json(m));
    }
    return {{"corpora", list}};
}

json TopicService::job_view(const std::string& job_id) const {
    return to_json(jobs_.status(job_id));
}

json TopicService::model_view(const std::string& model_id) {
    return to_json(model(model_id)->meta);
}

json TopicService::models_view(const std::string& corpus_id) const {
    if (!store_.has_corpus(corpus_id)) {
        throw NotFoundError("unknown corpus '" + corpus_id + "'");
    }
    json list = json::array();
    for (const auto& m : store_.list_models(corpus_id)) {
        list.push_back(to_json(m));
    }
    return {{"corpus_id", corpus_id}, {"models", list}};
}

json TopicService::map_view(const std::string& model_id) {
    auto m = model(model_id);
    const auto& docs = m->corpus->corpus.documents;
    json points = json::array();
    for (const auto& p : m->model.map.points) {
        points.push_back({{"doc_id", docs[p.document].doc_id},
                          {"title", docs[p.document].title},
                          {"x", p.x},
                          {"y", p.y},
                          {"topic", p.dominant_topic}});
    }
    return {{"model_id", model_id},
            {"topic_count", m->model.topic_count()},
            {"kl_divergence", m->model.map.kl_final},
            {"points", points}};
}

json TopicService::topics_view(const std::string& model_id) {
    auto m = model(model_id);
    const auto ids = m->corpus->doc_ids();
    json topics = json::array();
    for (const auto& topic : m->model.topics) {
        json top = json::array();
        for (std::size_t i = 0; i < topic.terms.size() && i < 10; ++i) {
            top.push_back(topic.terms[i].term);
        }
        const auto documents = topic_documents(topic.topic_id, m->model.proportions, ids);
        topics.push_back({{"topic_id", topic.topic_id},
                          {"term_count", topic.terms.size()},
                          {"small", topic.terms.size() <= 3},
                          {"top_terms", top},
                          {"document_count", documents.size()}});
    }
    return {{"model_id", model_id}, {"topics", topics}};
}

json TopicService::topic_view(const std::string& model_id, int topic_id) {
    auto m = model(model_id);
    if (topic_id < 0 || topic_id >= m->model.topic_count()) {
        throw NotFoundError("unknown topic " + std::to_string(topic_id));
    }
    const Topic& topic = m->model.topics[static_cast<std::size_t>(topic_id)];
    json terms = json::array();
    for (const auto& t : topic.terms) {
        if (t.displayed) {
            terms.push_back({{"term", t.term},
                             {"rating", t.rating},
                             {"rank", t.rank},
                             {"size", t.font_size},
                             {"stratum", t.stratum}});
        }
    }
    json strata = json::array();
    for (std::size_t s = 0; s < topic.strata.size(); ++s) {
        strata.push_back({{"index", s}, {"terms", topic.strata[s].terms}, {"embedded", topic.strata[s].embedded}});
    }
    const auto& docs = m->corpus->corpus.documents;
    json documents = json::array();
    for (const auto& [doc_id, proportion] : topic_documents(topic_id, m->model.proportions, m->corpus->doc_ids())) {
        documents.push_back(
            {{"doc_id", doc_id}, {"title", docs[m->corpus->corpus.index_of(doc_id)].title}, {"proportion", proportion}});
    }
    return {{"model_id", model_id},
            {"topic_id", topic_id},
            {"term_count", topic.terms.size()},
            {"terms", terms},
            {"strata", strata},
            {"documents", documents}};
}

json TopicService::document_view(const std::string& model_id, const std::string& doc_id) {
    auto m = model(model_id);
    const PreparedCorpus& pc = *m->corpus;
    std::size_t index = 0;
    try {
        index = pc.corpus.index_of(doc_id);
    } catch (const LookupError&) {
        throw NotFoundError("unknown document '" + doc_id + "'");
    }
    const AnnotatedDocument& doc = pc.corpus.documents[index];
    const Eigen::VectorXd proportions = m->model.proportions.row(static_cast<Eigen::Index>(index)).transpose();
    const auto highlights =
        document_highlights(pc.term_docs[index], pc.rankings[index], pc.network, m->model.partition, proportions);

    const std::string text = display_text(doc);
    const auto char_spans = token_char_spans(doc, text);
    std::unordered_map<std::int64_t, std::size_t> token_at;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        token_at.emplace(doc.tokens[i].position, i);
    }

    json marks = json::array();
    for (const auto& h : highlights) {
        long begin = -1;
        long end = -1;
        if (auto a = token_at.find(h.first_position), b = token_at.find(h.last_position);
            a != token_at.end() && b != token_at.end()) {
            begin = char_spans[a->second].first;
            end = char_spans[b->second].second;
        }
        marks.push_back({{"first_position", h.first_position},
                         {"last_position", h.last_position},
                         {"char_begin", begin},
                         {"char_end", end},
                         {"term", h.term},
                         {"topic", h.topic}});
    }
    json topics = json::array();
    for (Eigen::Index t = 0; t < proportions.size(); ++t) {
        if (proportions(t) >= kHighlightThreshold) {
            topics.push_back({{"topic", t}, {"proportion", proportions(t)}});
        }
    }
    std::vector<double> all(proportions.data(), proportions.data() + proportions.size());
    return {{"model_id", model_id},
            {"doc_id", doc.doc_id},
            {"title", doc.title},
            {"date", doc.date ? json(to_string(*doc.date)) : json(nullptr)},
            {"tags", doc.tags},
            {"text", text},
            {"retained_terms", pc.rankings[index].retained_count()},
            {"proportions", all},
            {"topics", topics},
            {"highlights", marks}};
}

json TopicService::timeseries_view(const std::string& model_id, const std::vector<int>& topics) {
    auto m = model(model_id);
    std::vector<int> selected = topics;
    if (selected.empty()) {
        for (int t = 0; t < m->model.topic_count(); ++t) {
            selected.push_back(t);
        }
    }
    for (int t : selected) {
        if (t < 0 || t >= m->model.topic_count()) {
            throw NotFoundError("unknown topic " + std::to_string(t));
        }
    }
    std::vector<std::optional<Date>> dates;
    for (const auto& d : m->corpus->corpus.documents) {
        dates.push_back(d.date);
    }
    json series = json::array();
    for (const auto& s : topic_time_series(selected, m->model.proportions, dates)) {
        json points = json::array();
        for (const auto& [month, value] : s.values) {
            points.push_back({{"month", month.to_string()}, {"value", value}});
        }
        series.push_back({{"topic", s.topic}, {"label", "Topic " + std::to_string(s.topic)}, {"points", points}});
    }
    return {{"model_id", model_id}, {"series", series}};
}

json TopicService::themes_view(const std::string& model_id) {
    auto m = model(model_id);
    std::vector<std::vector<std::string>> tags;
    for (const auto& d : m->corpus->corpus.documents) {
        tags.push_back(d.tags);
    }
    const ThemeCrosstab tab = theme_crosstab(m->model.proportions, tags);
    json rows = json::array();
    for (Eigen::Index r = 0; r < tab.mean_proportion.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(tab.mean_proportion.cols()));
        for (Eigen::Index c = 0; c < tab.mean_proportion.cols(); ++c) {
            row[static_cast<std::size_t>(c)] = tab.mean_proportion(r, c);
        }
        rows.push_back(row);
    }
    return {{"model_id", model_id},
            {"tags", tab.tags},
            {"documents", tab.documents},
            {"topic_count", m->model.topic_count()},
            {"matrix", rows}};
}

std::optional<TopicService::ExportKind> TopicService::parse_export_kind(std::string_view name) {
    if (name == "topic_terms") {
        return ExportKind::TopicTerms;
    }
    if (name == "doc_topics") {
        return ExportKind::DocTopics;
    }
    return std::nullopt;
}

std::string TopicService::export_csv(const std::string& model_id, ExportKind kind) {
    auto m = model(model_id);
    return kind == ExportKind::TopicTerms ? topic_terms_csv(m->model) : doc_topics_csv(*m->corpus, m->model);
}

void TopicService::export_downloads(const std::string& model_id, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (auto [kind, name] : {std::pair{ExportKind::TopicTerms, "topic_terms.csv"},
                              std::pair{ExportKind::DocTopics, "doc_topics.csv"}}) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        out << export_csv(model_id, kind);
        if (!out) {
            throw Error("cannot write '" + (dir / name).string() + "'");
        }
    }
}

} // namespace termtopics
