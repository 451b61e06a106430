// Planted-topic corpora for end-to-end tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "termtopics/corpus.hpp"

namespace synthetic {

struct PlantedSpec {
    int documents = 300;
    int topics = 3;
    int vocabulary = 50;       ///< terms per topic, disjoint across topics
    int tokens = 20;           ///< tokens per document
    bool distinct = true;      ///< sample topic terms without replacement
    double noise_rate = 0.05;  ///< noise tokens added per document, as a fraction of `tokens`
    int noise_vocabulary = 20; ///< shared across topics
    std::uint64_t seed = 7;
};

struct PlantedCorpus {
    termtopics::Corpus corpus;
    std::vector<int> generator;            ///< topic of each document
    std::vector<std::string> topic_terms;  ///< every non-noise term
    std::vector<int> term_topic;           ///< topic of each entry of topic_terms
};

inline std::string topic_term(int topic, int index) {
    return std::string("t") + char('a' + topic % 26) + (topic >= 26 ? std::to_string(topic / 26) : "") + "w" +
           std::to_string(index);
}

inline std::string noise_term(int index) {
    return "noise" + std::to_string(index);
}

inline PlantedCorpus planted_corpus(const PlantedSpec& spec, const std::string& corpus_id = "planted") {
    std::mt19937_64 rng(spec.seed);
    std::uniform_int_distribution<int> pick_term(0, spec.vocabulary - 1);
    std::uniform_int_distribution<int> pick_noise(0, spec.noise_vocabulary - 1);
    std::uniform_int_distribution<int> pick_month(0, 23);

    PlantedCorpus out;
    out.corpus.corpus_id = corpus_id;
    for (int t = 0; t < spec.topics; ++t) {
        for (int w = 0; w < spec.vocabulary; ++w) {
            out.topic_terms.push_back(topic_term(t, w));
            out.term_topic.push_back(t);
        }
    }
    std::vector<int> order(static_cast<std::size_t>(spec.vocabulary));
    for (int d = 0; d < spec.documents; ++d) {
        const int topic = d % spec.topics;
        out.generator.push_back(topic);
        termtopics::AnnotatedDocument doc;
        doc.doc_id = "doc" + std::to_string(d);
        doc.title = "Document " + std::to_string(d);
        const int month = pick_month(rng);
        doc.date = termtopics::Date{2020 + month / 12, 1 + month % 12, 1 + d % 28};
        doc.tags = {"theme" + std::to_string(topic)};
        if (d % 5 == 0) {
            doc.tags.push_back("shared");
        }
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = static_cast<int>(i);
        }
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::string> lemmas;
        for (int k = 0; k < spec.tokens; ++k) {
            const int w = spec.distinct && k < spec.vocabulary ? order[static_cast<std::size_t>(k)] : pick_term(rng);
            lemmas.push_back(topic_term(topic, w));
        }
        const auto noise = static_cast<int>(std::lround(spec.noise_rate * spec.tokens));
        for (int k = 0; k < noise; ++k) {
            std::uniform_int_distribution<std::size_t> at(0, lemmas.size());
            lemmas.insert(lemmas.begin() + static_cast<std::ptrdiff_t>(at(rng)), noise_term(pick_noise(rng)));
        }
        for (std::size_t k = 0; k < lemmas.size(); ++k) {
            termtopics::AnnotatedToken token;
            token.surface = lemmas[k];
            token.lemma = lemmas[k];
            token.pos = termtopics::PosTag::NOUN;
            token.position = static_cast<std::int64_t>(k);
            doc.tokens.push_back(std::move(token));
        }
        out.corpus.documents.push_back(std::move(doc));
    }
    return out;
}

inline std::string to_jsonl(const termtopics::Corpus& corpus) {
    std::ostringstream out;
    termtopics::write_corpus(out, corpus);
    return out.str();
}

} // namespace synthetic
