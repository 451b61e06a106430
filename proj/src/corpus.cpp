#include "termtopics/corpus.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "termtopics/errors.hpp"
#include "termtopics/preprocess.hpp"

namespace termtopics {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 17> kPosNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

const json* find_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        return nullptr;
    }
    return &*it;
}

std::string required_string(const json& obj, const char* key, std::size_t line) {
    const json* v = find_field(obj, key);
    if (v == nullptr || !v->is_string()) {
        throw IngestError(line, std::string("missing or non-string field '") + key + "'");
    }
    return v->get<std::string>();
}

std::string optional_string(const json& obj, const char* key, std::size_t line) {
    const json* v = find_field(obj, key);
    if (v == nullptr) {
        return {};
    }
    if (!v->is_string()) {
        throw IngestError(line, std::string("field '") + key + "' must be a string");
    }
    return v->get<std::string>();
}

AnnotatedToken parse_token(const json& t, std::size_t line) {
    if (!t.is_object()) {
        throw IngestError(line, "token is not an object");
    }
    AnnotatedToken token;
    token.surface = optional_string(t, "surface", line);
    token.lemma = required_string(t, "lemma", line);
    if (token.lemma.empty()) {
        throw IngestError(line, "empty lemma");
    }
    auto pos = parse_pos(required_string(t, "pos", line));
    if (!pos) {
        throw IngestError(line, "unknown POS tag '" + t["pos"].get<std::string>() + "'");
    }
    token.pos = *pos;
    if (const json* ner = find_field(t, "ner")) {
        if (!ner->is_string()) {
            throw IngestError(line, "field 'ner' must be a string or null");
        }
        auto tag = parse_ner(ner->get<std::string>());
        if (!tag) {
            throw IngestError(line, "bad NER tag '" + ner->get<std::string>() + "'");
        }
        token.ner = std::move(*tag);
    }
    const json* position = find_field(t, "position");
    if (position == nullptr || !position->is_number_integer() || position->get<std::int64_t>() < 0) {
        throw IngestError(line, "token position must be a non-negative integer");
    }
    token.position = position->get<std::int64_t>();
    return token;
}

AnnotatedDocument parse_document(const json& obj, CorpusFormat format, std::size_t line) {
    if (!obj.is_object()) {
        throw IngestError(line, "expected a JSON object");
    }
    AnnotatedDocument doc;
    doc.doc_id = required_string(obj, "doc_id", line);
    if (doc.doc_id.empty()) {
        throw IngestError(line, "empty doc_id");
    }
    doc.title = optional_string(obj, "title", line);

    if (const json* date = find_field(obj, "date")) {
        if (!date->is_string()) {
            throw IngestError(line, "field 'date' must be an ISO 8601 string or null");
        }
        doc.date = parse_date(date->get<std::string>());
        if (!doc.date) {
            throw IngestError(line, "bad date '" + date->get<std::string>() + "'");
        }
    }
    if (const json* tags = find_field(obj, "tags")) {
        if (!tags->is_array()) {
            throw IngestError(line, "field 'tags' must be an array");
        }
        for (const auto& tag : *tags) {
            if (!tag.is_string()) {
                throw IngestError(line, "tags must be strings");
            }
            doc.tags.push_back(tag.get<std::string>());
        }
    }
    if (const json* raw = find_field(obj, "raw_text")) {
        if (!raw->is_string()) {
            throw IngestError(line, "field 'raw_text' must be a string");
        }
        doc.raw_text = raw->get<std::string>();
    }

    if (format == CorpusFormat::PlainJsonl) {
        if (!doc.raw_text) {
            throw IngestError(line, "plain-jsonl requires 'raw_text'");
        }
        doc.tokens = fallback_tokenize(*doc.raw_text);
        return doc;
    }

    const json* tokens = find_field(obj, "tokens");
    if (tokens == nullptr || !tokens->is_array()) {
        throw IngestError(line, "missing 'tokens' array");
    }
    doc.tokens.reserve(tokens->size());
    for (const auto& t : *tokens) {
        doc.tokens.push_back(parse_token(t, line));
        if (doc.tokens.size() > 1 &&
            doc.tokens.back().position <= doc.tokens[doc.tokens.size() - 2].position) {
            throw IngestError(line, "token positions must be strictly increasing");
        }
    }
    return doc;
}

int parse_int(std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return -1;
    }
    return value;
}

} // namespace

std::optional<PosTag> parse_pos(std::string_view tag) {
    for (std::size_t i = 0; i < kPosNames.size(); ++i) {
        if (kPosNames[i] == tag) {
            return static_cast<PosTag>(i);
        }
    }
    return std::nullopt;
}

std::string_view to_string(PosTag tag) {
    return kPosNames[static_cast<std::size_t>(tag)];
}

std::optional<NerTag> parse_ner(std::string_view tag) {
    if (tag.size() < 3 || tag[1] != '-') {
        return std::nullopt;
    }
    NerTag out;
    if (tag[0] == 'B') {
        out.bio = BioPosition::Begin;
    } else if (tag[0] == 'I') {
        out.bio = BioPosition::Inside;
    } else {
        return std::nullopt;
    }
    out.label = std::string(tag.substr(2));
    return out;
}

std::string to_string(const NerTag& tag) {
    return (tag.bio == BioPosition::Begin ? "B-" : "I-") + tag.label;
}

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        return std::nullopt;
    }
    if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') {
        return std::nullopt;
    }
    Date d{parse_int(text.substr(0, 4)), parse_int(text.substr(5, 2)), parse_int(text.substr(8, 2))};
    if (d.year < 0 || d.month < 1 || d.month > 12 || d.day < 1) {
        return std::nullopt;
    }
    static constexpr std::array<int, 12> kDays = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (d.year % 4 == 0 && d.year % 100 != 0) || d.year % 400 == 0;
    const int max_day = (d.month == 2 && !leap) ? 28 : kDays[d.month - 1];
    if (d.day > max_day) {
        return std::nullopt;
    }
    return d;
}

std::string to_string(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", date.year, date.month, date.day);
    return buf;
}

std::size_t Corpus::index_of(const std::string& doc_id) const {
    for (std::size_t i = 0; i < documents.size(); ++i) {
        if (documents[i].doc_id == doc_id) {
            return i;
        }
    }
    throw LookupError("unknown document '" + doc_id + "'");
}

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
    if (name == "annotated-jsonl") {
        return CorpusFormat::AnnotatedJsonl;
    }
    if (name == "plain-jsonl") {
        return CorpusFormat::PlainJsonl;
    }
    return std::nullopt;
}

bool ValidationReport::has_fatal() const {
    return fatal_count() > 0;
}

std::size_t ValidationReport::warning_count() const {
    std::size_t n = 0;
    for (const auto& issue : issues) {
        n += issue.severity == ValidationIssue::Severity::Warning;
    }
    return n;
}

std::size_t ValidationReport::fatal_count() const {
    return issues.size() - warning_count();
}

ValidationReport validate_corpus(const Corpus& corpus) {
    using Severity = ValidationIssue::Severity;
    ValidationReport report;
    for (const auto& doc : corpus.documents) {
        if (doc.tokens.empty()) {
            report.issues.push_back({Severity::Fatal, doc.doc_id, "document has no tokens"});
        }
        if (!doc.date) {
            report.issues.push_back({Severity::Warning, doc.doc_id, "missing date"});
        }
        if (doc.title.empty()) {
            report.issues.push_back({Severity::Warning, doc.doc_id, "missing title"});
        }
    }
    return report;
}

Corpus read_corpus(std::istream& in, CorpusFormat format, std::string corpus_id) {
    Corpus corpus;
    corpus.corpus_id = std::move(corpus_id);
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw IngestError(line_no, std::string("malformed JSON: ") + e.what());
        }
        AnnotatedDocument doc = parse_document(obj, format, line_no);
        if (!seen.insert(doc.doc_id).second) {
            throw ValidationError("duplicate doc_id '" + doc.doc_id + "' (line " +
                                  std::to_string(line_no) + ")");
        }
        corpus.documents.push_back(std::move(doc));
    }
    if (corpus.documents.empty()) {
        throw ValidationError("corpus is empty");
    }
    const ValidationReport report = validate_corpus(corpus);
    for (const auto& issue : report.issues) {
        if (issue.severity == ValidationIssue::Severity::Fatal) {
            throw ValidationError("document '" + issue.doc_id + "': " + issue.message);
        }
    }
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw NotFoundError("cannot open corpus file '" + path.string() + "'");
    }
    return read_corpus(in, format, path.stem().string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
    for (const auto& doc : corpus.documents) {
        json tokens = json::array();
        for (const auto& t : doc.tokens) {
            tokens.push_back({{"surface", t.surface},
                              {"lemma", t.lemma},
                              {"pos", std::string(to_string(t.pos))},
                              {"ner", t.ner ? json(to_string(*t.ner)) : json(nullptr)},
                              {"position", t.position}});
        }
        json obj = {{"doc_id", doc.doc_id},
                    {"title", doc.title},
                    {"date", doc.date ? json(to_string(*doc.date)) : json(nullptr)},
                    {"tags", doc.tags},
                    {"raw_text", doc.raw_text ? json(*doc.raw_text) : json(nullptr)},
                    {"tokens", std::move(tokens)}};
        out << obj.dump() << '\n';
    }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write corpus file '" + path.string() + "'");
    }
    write_corpus(out, corpus);
}

} // namespace termtopics
