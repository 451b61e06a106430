#include "termtopics/rank.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_set>

#include "termtopics/log.hpp"

namespace termtopics {

void RankingParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ValidationError("alpha must lie in [0, 1]");
    }
    if (!std::isfinite(beta)) {
        throw ValidationError("beta must be finite");
    }
    if (window < 1 || window % 2 == 0) {
        throw ValidationError("window must be an odd integer >= 1");
    }
    if (!(thin_percent > 0.0 && thin_percent <= 100.0)) {
        throw ValidationError("thin percent must lie in (0, 100]");
    }
}

IdfTable::IdfTable(std::size_t doc_count, std::unordered_map<std::string, std::size_t> df)
    : doc_count_(doc_count), df_(std::move(df)) {}

std::size_t IdfTable::document_frequency(const std::string& term) const {
    auto it = df_.find(term);
    if (it == df_.end()) {
        throw LookupError("term '" + term + "' has no document frequency");
    }
    return it->second;
}

double IdfTable::idf(const std::string& term) const {
    return std::log(static_cast<double>(doc_count_) / static_cast<double>(document_frequency(term)));
}

IdfTable compute_idf(std::span<const TermDocument> docs) {
    if (docs.empty()) {
        throw ValidationError("idf needs at least one document");
    }
    std::unordered_map<std::string, std::size_t> df;
    std::unordered_set<std::string> seen;
    for (const auto& doc : docs) {
        seen.clear();
        for (const auto& occ : doc.terms) {
            if (seen.insert(occ.term.text).second) {
                ++df[occ.term.text];
            }
        }
    }
    return IdfTable(docs.size(), std::move(df));
}

DocumentTerms unique_terms(const TermDocument& doc) {
    DocumentTerms out;
    std::unordered_map<std::string, Eigen::Index> index;
    out.sequence.reserve(doc.terms.size());
    for (std::size_t p = 0; p < doc.terms.size(); ++p) {
        const auto& term = doc.terms[p].term;
        auto [it, inserted] = index.try_emplace(term.text, static_cast<Eigen::Index>(out.terms.size()));
        if (inserted) {
            out.terms.push_back(term);
            out.earliest.push_back(static_cast<Eigen::Index>(p));
        }
        out.sequence.push_back(it->second);
    }
    return out;
}

Eigen::MatrixXd window_cooccurrence(const std::vector<Eigen::Index>& sequence, Eigen::Index n, int window) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
    const std::size_t reach = static_cast<std::size_t>(std::max(window, 1) - 1) / 2;
    for (std::size_t p = 0; p < sequence.size(); ++p) {
        const std::size_t end = std::min(sequence.size(), p + reach + 1);
        for (std::size_t q = p + 1; q < end; ++q) {
            const auto a = sequence[p];
            const auto b = sequence[q];
            f(a, b) += 1.0;
            if (a != b) {
                f(b, a) += 1.0;
            }
        }
    }
    return f;
}

CooccurrenceCounts window_cooccurrence(const TermDocument& doc, int window) {
    DocumentTerms u = unique_terms(doc);
    const auto n = static_cast<Eigen::Index>(u.terms.size());
    return {std::move(u.terms), window_cooccurrence(u.sequence, n, window)};
}

std::size_t DocumentTermRanking::retained_count() const {
    return static_cast<std::size_t>(
        std::count_if(terms.begin(), terms.end(), [](const RankedTerm& t) { return t.retained; }));
}

const RankedTerm* DocumentTermRanking::find(const std::string& text) const {
    for (const auto& t : terms) {
        if (t.term.text == text) {
            return &t;
        }
    }
    return nullptr;
}

std::size_t thinned_size(std::size_t n, double thin_percent) {
    if (n == 0) {
        return 0;
    }
    // The epsilon absorbs representation error in P (e.g. 30 * 10 / 100).
    const double raw = std::floor(thin_percent * static_cast<double>(n) / 100.0 + 1e-9);
    const auto kept = static_cast<std::size_t>(std::max(raw, 1.0));
    return std::min(kept, n);
}

DocumentTermRanking rank_and_thin(std::string doc_id,
                                  const std::vector<Term>& terms,
                                  const std::vector<Eigen::Index>& earliest,
                                  const Eigen::VectorXd& scores,
                                  double thin_percent) {
    const std::size_t n = terms.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ia = static_cast<Eigen::Index>(a);
        const auto ib = static_cast<Eigen::Index>(b);
        if (scores(ia) != scores(ib)) {
            return scores(ia) > scores(ib);
        }
        if (earliest[a] != earliest[b]) {
            return earliest[a] < earliest[b];
        }
        return terms[a].text < terms[b].text;
    });

    DocumentTermRanking out;
    out.doc_id = std::move(doc_id);
    out.terms.reserve(n);
    const std::size_t keep = thinned_size(n, thin_percent);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t i = order[r];
        out.terms.push_back({terms[i], earliest[i], scores(static_cast<Eigen::Index>(i)),
                             static_cast<int>(r + 1), r < keep});
    }
    return out;
}

DocumentTermRanking rank_document(const TermDocument& doc, const IdfTable& idf, const RankingParams& params) {
    DocumentTerms u = unique_terms(doc);
    const auto n = static_cast<Eigen::Index>(u.terms.size());
    if (n == 0) {
        return DocumentTermRanking{doc.doc_id, {}};
    }
    const Eigen::MatrixXd f = window_cooccurrence(u.sequence, n, params.window);
    Eigen::VectorXd idf_values(n);
    Eigen::VectorXd positions(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        idf_values(i) = idf.idf(u.terms[static_cast<std::size_t>(i)].text);
        positions(i) = static_cast<double>(u.earliest[static_cast<std::size_t>(i)]);
    }

    Eigen::MatrixXd g;
    try {
        g = transition_matrix(f, idf_values, positions, params.alpha, params.beta);
    } catch (const DegenerateDocumentError&) {
        log_warning("document '" + doc.doc_id + "': all terms have zero idf, ranking with unit idf");
        g = transition_matrix(f, Eigen::VectorXd::Ones(n), positions, params.alpha, params.beta);
    }
    const Eigen::VectorXd scores = stationary_distribution(g);
    return rank_and_thin(doc.doc_id, u.terms, u.earliest, scores, params.thin_percent);
}

std::vector<DocumentTermRanking> rank_corpus(std::span<const TermDocument> docs,
                                             const IdfTable& idf,
                                             const RankingParams& params,
                                             unsigned threads) {
    params.validate();
    std::vector<DocumentTermRanking> out(docs.size());
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(docs.size(), 1)));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < docs.size(); i = next++) {
            try {
                out[i] = rank_document(docs[i], idf, params);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

} // namespace termtopics
