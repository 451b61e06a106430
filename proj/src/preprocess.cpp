#include "termtopics/preprocess.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "termtopics/errors.hpp"
#include "termtopics/log.hpp"

namespace termtopics {

namespace {

bool is_ascii_alnum(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool keeps_pos(PosTag pos) {
    return pos == PosTag::ADJ || pos == PosTag::NOUN || pos == PosTag::PROPN;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

std::string fold_case(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

bool has_letter(std::string_view text) {
    return std::any_of(text.begin(), text.end(), [](char ch) {
        const auto c = static_cast<unsigned char>(ch);
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
    });
}

StopwordSet::StopwordSet(const std::vector<std::string>& words) {
    for (const auto& w : words) {
        auto t = trim(w);
        if (!t.empty()) {
            words_.insert(fold_case(t));
        }
    }
}

StopwordSet StopwordSet::read(std::istream& in) {
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        words.emplace_back(t);
    }
    return StopwordSet(words);
}

StopwordSet StopwordSet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("cannot open stopword file '" + path.string() + "'");
    }
    return read(in);
}

bool StopwordSet::contains(std::string_view word) const {
    return words_.contains(fold_case(word));
}

void StopwordSet::write(std::ostream& out) const {
    std::vector<std::string> sorted(words_.begin(), words_.end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& w : sorted) {
        out << w << '\n';
    }
}

TermDocument filter_tokens(const AnnotatedDocument& doc, const StopwordSet& stopwords) {
    TermDocument out;
    out.doc_id = doc.doc_id;
    for (const auto& token : doc.tokens) {
        if (!keeps_pos(token.pos) || !has_letter(token.lemma) || stopwords.contains(token.lemma)) {
            continue;
        }
        TermOccurrence occ;
        occ.term.text = token.pos == PosTag::PROPN ? token.lemma : fold_case(token.lemma);
        occ.position = token.position;
        occ.last_position = token.position;
        occ.pos = token.pos;
        out.terms.push_back(std::move(occ));
    }
    return out;
}

TermDocument merge_named_entities(const AnnotatedDocument& doc, const TermDocument& filtered) {
    struct Span {
        std::size_t first;
        std::size_t last;
    };
    std::vector<Span> spans;
    const auto& tokens = doc.tokens;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (!tokens[i].ner) {
            ++i;
            continue;
        }
        if (tokens[i].ner->bio == BioPosition::Inside) {
            log_warning("document '" + doc.doc_id + "': I-" + tokens[i].ner->label +
                        " without preceding B- at position " + std::to_string(tokens[i].position) +
                        ", treated as B-");
        }
        const std::string& label = tokens[i].ner->label;
        std::size_t j = i + 1;
        while (j < tokens.size() && tokens[j].ner && tokens[j].ner->bio == BioPosition::Inside &&
               tokens[j].ner->label == label) {
            ++j;
        }
        if (j - i >= 2) {
            spans.push_back({i, j - 1});
        }
        i = j;
    }
    if (spans.empty()) {
        return filtered;
    }

    TermDocument out;
    out.doc_id = filtered.doc_id;
    std::size_t next_span = 0;
    auto emit_span = [&](const Span& s) {
        TermOccurrence occ;
        for (std::size_t k = s.first; k <= s.last; ++k) {
            if (k > s.first) {
                occ.term.text += ' ';
            }
            occ.term.text += tokens[k].lemma;
        }
        occ.term.is_entity = true;
        occ.position = tokens[s.first].position;
        occ.last_position = tokens[s.last].position;
        occ.pos = PosTag::PROPN;
        out.terms.push_back(std::move(occ));
    };
    for (const auto& occ : filtered.terms) {
        while (next_span < spans.size() && tokens[spans[next_span].last].position < occ.position) {
            emit_span(spans[next_span++]);
        }
        if (next_span < spans.size() && tokens[spans[next_span].first].position <= occ.position) {
            continue; // inside the upcoming span
        }
        out.terms.push_back(occ);
    }
    while (next_span < spans.size()) {
        emit_span(spans[next_span++]);
    }
    return out;
}

TermDocument preprocess_document(const AnnotatedDocument& doc, const StopwordSet& stopwords) {
    return merge_named_entities(doc, filter_tokens(doc, stopwords));
}

std::vector<AnnotatedToken> fallback_tokenize(std::string_view raw_text) {
    std::vector<AnnotatedToken> tokens;
    std::size_t i = 0;
    while (i < raw_text.size()) {
        const auto c = static_cast<unsigned char>(raw_text[i]);
        if (!is_ascii_alnum(c) && c < 0x80) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < raw_text.size()) {
            const auto d = static_cast<unsigned char>(raw_text[j]);
            if (!is_ascii_alnum(d) && d < 0x80) {
                break;
            }
            ++j;
        }
        AnnotatedToken t;
        t.surface = std::string(raw_text.substr(i, j - i));
        t.lemma = fold_case(t.surface);
        t.pos = PosTag::NOUN;
        t.position = static_cast<std::int64_t>(tokens.size());
        tokens.push_back(std::move(t));
        i = j;
    }
    return tokens;
}

} // namespace termtopics
