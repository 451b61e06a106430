#include "termtopics/topicstats.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "termtopics/errors.hpp"
#include "termtopics/log.hpp"
#include "termtopics/ward.hpp"

namespace termtopics {

int band_score(std::size_t rank, std::size_t n) {
    // ceil(p * n / 100) in integers: floating 0.05 * 100 rounds above 5.
    auto cutoff = [n](std::size_t percent) { return (percent * n + 99) / 100; };
    if (rank == 0 || rank > n) {
        throw LookupError("rank outside the document");
    }
    if (rank <= cutoff(5)) {
        return 3;
    }
    if (rank <= cutoff(10)) {
        return 2;
    }
    if (rank <= cutoff(15)) {
        return 1;
    }
    return 0;
}

int band_score(const DocumentTermRanking& ranking, const std::string& term) {
    const RankedTerm* t = ranking.find(term);
    if (t == nullptr) {
        throw LookupError("term '" + term + "' does not occur in document '" + ranking.doc_id + "'");
    }
    return band_score(static_cast<std::size_t>(t->rank), ranking.size());
}

double bayesian_average(double constant, double documents, double band_sum) {
    return (kRatingPrior * constant + band_sum) / (constant + documents);
}

RatingTable::RatingTable(std::span<const DocumentTermRanking> rankings) {
    std::size_t unique_per_doc = 0;
    for (const auto& r : rankings) {
        const std::size_t n = r.size();
        for (const auto& t : r.terms) {
            if (!t.retained) {
                continue;
            }
            ++unique_per_doc;
            auto& rating = ratings_[t.term.text];
            rating.term = t.term.text;
            ++rating.documents;
            rating.band_sum += band_score(static_cast<std::size_t>(t.rank), n);
        }
    }
    constant_ = ratings_.empty() ? 0.0 : static_cast<double>(unique_per_doc) / static_cast<double>(ratings_.size());
    for (auto& [term, rating] : ratings_) {
        rating.rating = bayesian_average(constant_, static_cast<double>(rating.documents), rating.band_sum);
    }
}

const TermRating& RatingTable::at(const std::string& term) const {
    auto it = ratings_.find(term);
    if (it == ratings_.end()) {
        throw LookupError("term '" + term + "' is not rated");
    }
    return it->second;
}

TermRating bayesian_rating(std::span<const DocumentTermRanking> rankings, const std::string& term) {
    return RatingTable(rankings).at(term);
}

std::vector<Stratum> stratify_terms(std::span<const RatedTerm> terms, const EmbeddingTable* embeddings, int strata) {
    std::vector<std::size_t> embedded;
    std::vector<std::size_t> unembedded;
    std::vector<Eigen::VectorXd> vectors;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        std::optional<Eigen::VectorXd> v;
        if (embeddings != nullptr && !embeddings->empty()) {
            v = embeddings->term_vector(terms[i].term);
        }
        if (v) {
            embedded.push_back(i);
            vectors.push_back(std::move(*v));
        } else {
            unembedded.push_back(i);
        }
    }

    std::vector<std::vector<std::size_t>> groups;
    if (!embedded.empty()) {
        Eigen::MatrixXd points(static_cast<Eigen::Index>(embedded.size()), vectors.front().size());
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            points.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
        }
        const int k = std::min<int>(std::max(strata, 1), static_cast<int>(embedded.size()));
        const std::vector<int> labels = ward_clusters(points, k);
        groups.resize(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < labels.size(); ++i) {
            groups[static_cast<std::size_t>(labels[i])].push_back(embedded[i]);
        }
    } else if (!terms.empty()) {
        log_warning("no topic term has an embedding; using a single stratum");
    }

    std::vector<Stratum> out;
    auto make = [&](std::vector<std::size_t> members, bool is_embedded) {
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            if (terms[a].rating != terms[b].rating) {
                return terms[a].rating > terms[b].rating;
            }
            return terms[a].term < terms[b].term;
        });
        Stratum s;
        s.embedded = is_embedded;
        s.best_rating = terms[members.front()].rating;
        for (std::size_t m : members) {
            s.terms.push_back(terms[m].term);
        }
        out.push_back(std::move(s));
    };
    for (auto& g : groups) {
        make(std::move(g), true);
    }
    std::stable_sort(out.begin(), out.end(), [](const Stratum& a, const Stratum& b) {
        if (a.best_rating != b.best_rating) {
            return a.best_rating > b.best_rating;
        }
        return a.terms.front() < b.terms.front();
    });
    if (!unembedded.empty()) {
        make(std::move(unembedded), false);
    }
    return out;
}

std::size_t Topic::displayed_count() const {
    return static_cast<std::size_t>(
        std::count_if(terms.begin(), terms.end(), [](const TopicTerm& t) { return t.displayed; }));
}

double font_size(int rank, std::size_t displayed, const TopicOptions& options) {
    if (displayed <= 1) {
        return options.max_font;
    }
    const double t = static_cast<double>(rank - 1) / static_cast<double>(displayed - 1);
    return options.max_font - (options.max_font - options.min_font) * t;
}

std::vector<Topic> build_topics(const TermNetwork& net, const Partition& partition, const RatingTable& ratings,
                                const EmbeddingTable* embeddings, const TopicOptions& options) {
    std::vector<Topic> topics;
    const auto members = partition.communities();
    topics.reserve(members.size());
    for (std::size_t c = 0; c < members.size(); ++c) {
        Topic topic;
        topic.topic_id = static_cast<int>(c);
        for (Eigen::Index v : members[c]) {
            const std::string& term = net.term(v);
            topic.terms.push_back({term, ratings.at(term).rating, 0, false, -1, 0.0});
        }
        std::sort(topic.terms.begin(), topic.terms.end(), [](const TopicTerm& a, const TopicTerm& b) {
            if (a.rating != b.rating) {
                return a.rating > b.rating;
            }
            return a.term < b.term;
        });
        const std::size_t shown = std::min(options.display_terms, topic.terms.size());
        std::vector<RatedTerm> displayed;
        for (std::size_t i = 0; i < topic.terms.size(); ++i) {
            auto& t = topic.terms[i];
            t.rank = static_cast<int>(i + 1);
            if (i < shown) {
                t.displayed = true;
                t.font_size = font_size(t.rank, shown, options);
                displayed.push_back({t.term, t.rating});
            }
        }
        topic.strata = stratify_terms(displayed, embeddings, options.strata);
        std::unordered_map<std::string, int> stratum_of;
        for (std::size_t s = 0; s < topic.strata.size(); ++s) {
            for (const auto& term : topic.strata[s].terms) {
                stratum_of[term] = static_cast<int>(s);
            }
        }
        for (std::size_t i = 0; i < shown; ++i) {
            topic.terms[i].stratum = stratum_of.at(topic.terms[i].term);
        }
        topics.push_back(std::move(topic));
    }
    return topics;
}

Eigen::VectorXd doc_topic_proportions(const DocumentTermRanking& ranking, const TermNetwork& net,
                                      const Partition& partition) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(partition.community_count());
    std::size_t count = 0;
    for (const auto& t : ranking.terms) {
        if (!t.retained) {
            continue;
        }
        p(partition.community(net.index_of(t.term.text))) += 1.0;
        ++count;
    }
    if (count > 0) {
        p /= static_cast<double>(count);
    }
    return p;
}

Eigen::MatrixXd topic_proportion_matrix(std::span<const DocumentTermRanking> rankings, const TermNetwork& net,
                                        const Partition& partition) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rankings.size()), partition.community_count());
    for (std::size_t d = 0; d < rankings.size(); ++d) {
        out.row(static_cast<Eigen::Index>(d)) = doc_topic_proportions(rankings[d], net, partition).transpose();
    }
    return out;
}

std::vector<std::pair<std::string, double>> topic_documents(int topic, const Eigen::MatrixXd& proportions,
                                                            std::span<const std::string> doc_ids) {
    if (topic < 0 || topic >= proportions.cols()) {
        throw LookupError("unknown topic " + std::to_string(topic));
    }
    std::vector<std::pair<std::string, double>> out;
    for (Eigen::Index d = 0; d < proportions.rows(); ++d) {
        const double p = proportions(d, topic);
        if (p > kTopicDocumentThreshold) {
            out.emplace_back(doc_ids[static_cast<std::size_t>(d)], p);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    if (out.size() > kTopicDocumentLimit) {
        out.resize(kTopicDocumentLimit);
    }
    return out;
}

std::vector<Highlight> document_highlights(const TermDocument& doc, const DocumentTermRanking& ranking,
                                           const TermNetwork& net, const Partition& partition,
                                           const Eigen::Ref<const Eigen::VectorXd>& proportions) {
    std::unordered_map<std::string, int> retained_topic;
    for (const auto& t : ranking.terms) {
        if (t.retained) {
            retained_topic.emplace(t.term.text, partition.community(net.index_of(t.term.text)));
        }
    }
    std::vector<Highlight> out;
    for (const auto& occ : doc.terms) {
        auto it = retained_topic.find(occ.term.text);
        if (it == retained_topic.end()) {
            continue;
        }
        if (proportions(it->second) >= kHighlightThreshold) {
            out.push_back({occ.position, occ.last_position, occ.term.text, it->second});
        }
    }
    return out;
}

} // namespace termtopics
