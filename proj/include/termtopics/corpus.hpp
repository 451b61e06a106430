#ifndef TERMTOPICS_CORPUS_HPP
#define TERMTOPICS_CORPUS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "termtopics/rank_params.hpp"

namespace termtopics {

/// Universal POS tags. Only ADJ, NOUN and PROPN survive term filtering.
enum class PosTag : std::uint8_t {
    ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X
};

std::optional<PosTag> parse_pos(std::string_view tag);
std::string_view to_string(PosTag tag);

enum class BioPosition : std::uint8_t { Begin, Inside };

/// A `B-<LABEL>` / `I-<LABEL>` named-entity annotation.
struct NerTag {
    BioPosition bio = BioPosition::Begin;
    std::string label;

    bool operator==(const NerTag&) const = default;
};

std::optional<NerTag> parse_ner(std::string_view tag);
std::string to_string(const NerTag& tag);

struct AnnotatedToken {
    std::string surface;
    std::string lemma;
    PosTag pos = PosTag::X;
    std::optional<NerTag> ner;
    std::int64_t position = 0;

    bool operator==(const AnnotatedToken&) const = default;
};

/// Calendar date, timezone-free.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

/// Parses `YYYY-MM-DD` (a trailing time part is ignored). Returns nullopt on bad input.
std::optional<Date> parse_date(std::string_view text);
std::string to_string(const Date& date);

struct AnnotatedDocument {
    std::string doc_id;
    std::string title;
    std::vector<AnnotatedToken> tokens;
    std::optional<Date> date;
    std::vector<std::string> tags;
    std::optional<std::string> raw_text;

    bool operator==(const AnnotatedDocument&) const = default;
};

struct Corpus {
    std::string corpus_id;
    std::vector<AnnotatedDocument> documents;
    RankingParams ingest_params;

    bool operator==(const Corpus&) const = default;

    /// Index of the document with this id; throws LookupError.
    std::size_t index_of(const std::string& doc_id) const;
};

enum class CorpusFormat { AnnotatedJsonl, PlainJsonl };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);

struct ValidationIssue {
    enum class Severity { Warning, Fatal };
    Severity severity;
    std::string doc_id;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool has_fatal() const;
    std::size_t warning_count() const;
    std::size_t fatal_count() const;
};

/// Report-only check: empty token lists are fatal, missing dates/titles are warnings.
ValidationReport validate_corpus(const Corpus& corpus);

/// Parses a corpus from a stream. Throws IngestError on a malformed line and
/// ValidationError on duplicate ids, an empty corpus or fatal validation issues.
Corpus read_corpus(std::istream& in, CorpusFormat format, std::string corpus_id = {});

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

/// Writes annotated-jsonl. `read_corpus(..., AnnotatedJsonl)` reproduces the documents.
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

} // namespace termtopics

#endif // TERMTOPICS_CORPUS_HPP
