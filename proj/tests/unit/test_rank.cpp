#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "termtopics/errors.hpp"
#include "termtopics/rank.hpp"

using namespace termtopics;

namespace {

TermDocument term_doc(const std::vector<std::string>& words, std::string id = "d") {
    TermDocument d;
    d.doc_id = std::move(id);
    for (std::size_t i = 0; i < words.size(); ++i) {
        d.terms.push_back({Term{words[i]}, static_cast<std::int64_t>(i), static_cast<std::int64_t>(i)});
    }
    return d;
}

} // namespace

TEST_CASE("idf") {
    std::vector<TermDocument> docs = {term_doc({"a", "b"}), term_doc({"a"}), term_doc({"c", "c"}), term_doc({"d"})};
    const IdfTable idf = compute_idf(docs);
    CHECK(idf.doc_count() == 4);
    CHECK(idf.document_frequency("c") == 1);
    CHECK(idf.idf("a") == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(idf.idf("a") == doctest::Approx(0.6931).epsilon(1e-4));
    CHECK_THROWS_AS(idf.idf("zzz"), LookupError);

    const IdfTable all(3, {{"x", 3}});
    CHECK(all.idf("x") == 0.0);

    const IdfTable big(1463, {{"x", 100}});
    CHECK(big.idf("x") == doctest::Approx(2.683).epsilon(1e-3));
}

TEST_CASE("window co-occurrence") {
    SUBCASE("[a,b,a] with w=3") {
        const auto c = window_cooccurrence(term_doc({"a", "b", "a"}), 3);
        REQUIRE(c.terms.size() == 2);
        CHECK(c.counts(0, 1) == 2);
        CHECK(c.counts(1, 0) == 2);
        CHECK(c.counts(0, 0) == 0);
    }
    SUBCASE("single term") {
        const auto c = window_cooccurrence(term_doc({"a"}), 11);
        CHECK(c.counts.isZero());
    }
    SUBCASE("[a,b] with w=11") {
        const auto c = window_cooccurrence(term_doc({"a", "b"}), 11);
        CHECK(c.counts(0, 1) == 1);
    }
    SUBCASE("brute force over random sequences") {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<int> word(0, 5);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<std::string> words;
            for (int i = 0; i < 25; ++i) {
                words.push_back("w" + std::to_string(word(rng)));
            }
            const int w = 1 + 2 * (trial % 5);
            const auto c = window_cooccurrence(term_doc(words), w);
            Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(c.counts.rows(), c.counts.cols());
            auto index = [&](const std::string& s) {
                for (std::size_t i = 0; i < c.terms.size(); ++i) {
                    if (c.terms[i].text == s) {
                        return static_cast<Eigen::Index>(i);
                    }
                }
                return Eigen::Index(-1);
            };
            for (std::size_t p = 0; p < words.size(); ++p) {
                for (std::size_t q = p + 1; q < words.size() && static_cast<int>(q - p) <= (w - 1) / 2; ++q) {
                    const auto i = index(words[p]);
                    const auto j = index(words[q]);
                    expect(i, j) += 1;
                    if (i != j) {
                        expect(j, i) += 1;
                    }
                }
            }
            CHECK(c.counts == expect);
        }
    }
}

TEST_CASE("transition matrix") {
    SUBCASE("n=1") {
        const Eigen::MatrixXd g = transition_matrix(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1),
                                                    Eigen::VectorXd::Zero(1), 0.9, -0.9);
        CHECK(g(0, 0) == 1.0);
    }
    SUBCASE("symmetric two-term document") {
        Eigen::MatrixXd f(2, 2);
        f << 0, 3, 3, 0;
        Eigen::VectorXd pos(2);
        pos << 0, 0;
        const Eigen::MatrixXd g = transition_matrix(f, Eigen::VectorXd::Constant(2, 0.7), pos, 0.9, -0.9);
        CHECK(g(0, 1) == doctest::Approx(g(1, 0)));
        CHECK(g(0, 0) == doctest::Approx(g(1, 1)));
        CHECK(g.colwise().sum().isApprox(Eigen::RowVector2d::Ones(), 1e-12));
        const Eigen::VectorXd x = stationary_distribution(g);
        CHECK(x(0) == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(x(1) == doctest::Approx(0.5).epsilon(1e-10));
    }
    SUBCASE("three-term document built by hand") {
        Eigen::Matrix3d f;
        f << 0, 2, 1, 2, 0, 0, 1, 0, 1;
        Eigen::Vector3d idf(0.5, 1.5, 2.0);
        Eigen::Vector3d pos(0, 1, 4);
        const double alpha = 0.85;
        const double beta = -0.9;
        const Eigen::Matrix3d g = transition_matrix(f, idf, pos, alpha, beta);

        double t[3];
        double tsum = 0;
        for (int i = 0; i < 3; ++i) {
            t[i] = std::pow(1.0 + pos(i), beta) * idf(i);
            tsum += t[i];
        }
        for (int j = 0; j < 3; ++j) {
            double mass = 0;
            for (int k = 0; k < 3; ++k) {
                mass += idf(k) * f(k, j);
            }
            for (int i = 0; i < 3; ++i) {
                const double expect = alpha * idf(i) * f(i, j) / mass + (1 - alpha) * t[i] / tsum;
                CHECK(g(i, j) == doctest::Approx(expect).epsilon(1e-14));
            }
            CHECK(std::abs(g.col(j).sum() - 1.0) <= 1e-12);
        }
    }
    SUBCASE("isolated column teleports") {
        Eigen::Matrix3d f = Eigen::Matrix3d::Zero();
        f(0, 1) = f(1, 0) = 1;
        const Eigen::Matrix3d g = transition_matrix(f, Eigen::Vector3d(1, 1, 2), Eigen::Vector3d(0, 1, 2), 0.9, -0.9);
        const double t2 = std::pow(3.0, -0.9) * 2;
        const double t1 = std::pow(2.0, -0.9);
        CHECK(g(2, 2) == doctest::Approx(t2 / (1 + t1 + t2)).epsilon(1e-14));
    }
    SUBCASE("all idf zero is degenerate") {
        CHECK_THROWS_AS(transition_matrix(Eigen::Matrix2d::Ones(), Eigen::Vector2d::Zero(), Eigen::Vector2d(0, 1),
                                          0.9, -0.9),
                        DegenerateDocumentError);
    }
}

TEST_CASE("stationary distribution") {
    SUBCASE("1x1") {
        CHECK(stationary_distribution(Eigen::MatrixXd::Ones(1, 1))(0) == 1.0);
    }
    SUBCASE("random positive 5x5 against a linear solve") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.01, 1.0);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::MatrixXd g(5, 5);
            for (int i = 0; i < 25; ++i) {
                g.data()[i] = u(rng);
            }
            g = g.array().rowwise() / g.colwise().sum().array();
            const auto result = power_iteration(g);
            const Eigen::VectorXd expect = oracle::stationary_solve(g);
            CHECK((result.distribution - expect).lpNorm<1>() <= 1e-8);
            CHECK(std::abs(result.distribution.sum() - 1.0) <= 1e-9);
            CHECK(result.residual <= 1e-10);
        }
    }
}

TEST_CASE("power iteration reports non-convergence") {
    Eigen::Matrix2d g;
    g << 0.999, 0.002, 0.001, 0.998;
    try {
        power_iteration(g, 1e-10, 3);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.residual() > 1e-10);
    }
    const auto converged = power_iteration(g);
    CHECK(converged.distribution(0) == doctest::Approx(2.0 / 3).epsilon(1e-8));
}

TEST_CASE("thinned size") {
    CHECK(thinned_size(10, 30) == 3);
    CHECK(thinned_size(2, 10) == 1);
    CHECK(thinned_size(12, 33.3) == 3);
    CHECK(thinned_size(0, 50) == 0);
    CHECK(thinned_size(100, 100) == 100);
}

TEST_CASE("rank_and_thin ordering and retention") {
    const std::vector<Term> terms = {Term{"b"}, Term{"a"}, Term{"c"}, Term{"d"}};
    const std::vector<Eigen::Index> earliest = {0, 1, 2, 3};
    Eigen::VectorXd scores(4);
    scores << 0.2, 0.2, 0.5, 0.1;
    const auto r = rank_and_thin("x", terms, earliest, scores, 50);
    REQUIRE(r.size() == 4);
    CHECK(r.terms[0].term.text == "c");
    CHECK(r.terms[1].term.text == "b");  // tie broken by earlier position
    CHECK(r.terms[2].term.text == "a");
    CHECK(r.terms[0].rank == 1);
    CHECK(r.retained_count() == 2);
    CHECK(r.find("a")->retained == false);
    CHECK(r.find("zzz") == nullptr);
}

TEST_CASE("ranking invariants on random documents") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> word(0, 40);
    std::vector<TermDocument> docs;
    for (int d = 0; d < 30; ++d) {
        std::vector<std::string> words;
        for (int i = 0; i < 60; ++i) {
            words.push_back("w" + std::to_string(word(rng)));
        }
        docs.push_back(term_doc(words, "d" + std::to_string(d)));
    }
    const IdfTable idf = compute_idf(docs);
    RankingParams params;
    const auto serial = rank_corpus(docs, idf, params, 1);
    const auto parallel = rank_corpus(docs, idf, params, 4);
    REQUIRE(serial.size() == docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        CHECK(serial[d].doc_id == docs[d].doc_id);
        double sum = 0;
        for (std::size_t i = 0; i < serial[d].size(); ++i) {
            CHECK(serial[d].terms[i].score >= 0);
            CHECK(serial[d].terms[i].score == parallel[d].terms[i].score);
            CHECK(serial[d].terms[i].term == parallel[d].terms[i].term);
            sum += serial[d].terms[i].score;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
    }

    // Thinning monotonicity: the retained set grows with P.
    RankingParams low = params;
    low.thin_percent = 10;
    RankingParams high = params;
    high.thin_percent = 60;
    for (const auto& doc : docs) {
        const auto a = rank_document(doc, idf, low);
        const auto b = rank_document(doc, idf, high);
        for (const auto& t : a.terms) {
            if (t.retained) {
                CHECK(b.find(t.term.text)->retained);
            }
        }
    }
}

TEST_CASE("alpha = 0 gives the teleport distribution") {
    const TermDocument doc = term_doc({"a", "b", "c", "a", "d", "b"});
    std::vector<TermDocument> docs = {doc, term_doc({"a"}), term_doc({"b", "c"}), term_doc({"e"})};
    const IdfTable idf = compute_idf(docs);
    RankingParams params;
    params.alpha = 0;
    const auto r = rank_document(doc, idf, params);
    const std::map<std::string, int> earliest = {{"a", 0}, {"b", 1}, {"c", 2}, {"d", 4}};
    double total = 0;
    for (const auto& [t, p] : earliest) {
        total += std::pow(1.0 + p, params.beta) * idf.idf(t);
    }
    for (const auto& [t, p] : earliest) {
        CHECK(r.find(t)->score == doctest::Approx(std::pow(1.0 + p, params.beta) * idf.idf(t) / total).epsilon(1e-12));
    }
}

TEST_CASE("document whose terms all have zero idf falls back to unit idf") {
    std::vector<TermDocument> docs = {term_doc({"a", "b"}), term_doc({"b", "a"})};
    const IdfTable idf = compute_idf(docs);
    const auto r = rank_document(docs[0], idf, RankingParams{});
    CHECK(r.size() == 2);
    CHECK(r.terms[0].score + r.terms[1].score == doctest::Approx(1.0));
}

TEST_CASE("parameter validation") {
    RankingParams p;
    CHECK_NOTHROW(p.validate());
    p.window = 4;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.alpha = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.thin_percent = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}
