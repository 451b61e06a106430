#ifndef TERMTOPICS_PREPROCESS_HPP
#define TERMTOPICS_PREPROCESS_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "termtopics/corpus.hpp"

namespace termtopics {

struct Term {
    std::string text;
    bool is_entity = false;

    bool operator==(const Term&) const = default;
};

/// One surviving term and the token span it covers.
struct TermOccurrence {
    Term term;
    std::int64_t position = 0;      ///< first token position
    std::int64_t last_position = 0; ///< last token position (equal to position unless merged)
    PosTag pos = PosTag::NOUN;

    bool operator==(const TermOccurrence&) const = default;
};

struct TermDocument {
    std::string doc_id;
    std::vector<TermOccurrence> terms;

    bool operator==(const TermDocument&) const = default;
};

/// Case-folded stopword set.
class StopwordSet {
public:
    StopwordSet() = default;
    explicit StopwordSet(const std::vector<std::string>& words);

    /// Built-in English list.
    static StopwordSet english();
    /// One word per line; blank lines and lines starting with '#' are skipped.
    static StopwordSet read(std::istream& in);
    static StopwordSet load(const std::filesystem::path& path);

    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }
    /// Sorted word list, one per line.
    void write(std::ostream& out) const;

private:
    std::unordered_set<std::string> words_;
};

/// ASCII lowercase; bytes outside ASCII are copied unchanged.
std::string fold_case(std::string_view text);

/// True if the text has at least one letter (non-ASCII UTF-8 bytes count as letters).
bool has_letter(std::string_view text);

/// Keeps ADJ/NOUN/PROPN tokens whose lemma is not a stopword and has a letter.
/// Term text is the lemma, case-folded unless the token is a proper noun.
TermDocument filter_tokens(const AnnotatedDocument& doc, const StopwordSet& stopwords);

/// Replaces each B-/I- entity span of two or more tokens by one entity term at
/// the span's first position. Spans come from the original token sequence.
TermDocument merge_named_entities(const AnnotatedDocument& doc, const TermDocument& filtered);

/// filter_tokens followed by merge_named_entities.
TermDocument preprocess_document(const AnnotatedDocument& doc, const StopwordSet& stopwords);

/// Splits on every non-alphanumeric ASCII character; lemma is the lowercased
/// surface, POS is NOUN.
std::vector<AnnotatedToken> fallback_tokenize(std::string_view raw_text);

} // namespace termtopics

#endif // TERMTOPICS_PREPROCESS_HPP
