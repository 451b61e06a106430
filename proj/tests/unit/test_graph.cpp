#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "termtopics/errors.hpp"
#include "termtopics/graph.hpp"

using namespace termtopics;

namespace {

DocumentTermRanking retaining(std::vector<std::string> retained, std::vector<std::string> dropped = {}) {
    DocumentTermRanking r;
    int rank = 1;
    for (auto& t : retained) {
        r.terms.push_back({Term{t}, rank - 1, 1.0 / rank, rank, true});
        ++rank;
    }
    for (auto& t : dropped) {
        r.terms.push_back({Term{t}, rank - 1, 1.0 / rank, rank, false});
        ++rank;
    }
    return r;
}

double weight(const TermNetwork& net, const std::string& a, const std::string& b) {
    return net.weight(net.index_of(a), net.index_of(b));
}

} // namespace

TEST_CASE("two documents retaining the same pair") {
    std::vector<DocumentTermRanking> docs = {retaining({"ocean", "plastic"}), retaining({"plastic", "ocean"})};
    const auto net = build_network(docs);
    CHECK(weight(net, "ocean", "plastic") == 2);
    CHECK(net.edge_count() == 1);
    net.check_consistency();
}

TEST_CASE("isolated retained term is a vertex of degree 0") {
    std::vector<DocumentTermRanking> docs = {retaining({"ozone"}, {"layer"}), retaining({"a", "b"})};
    const auto net = build_network(docs);
    REQUIRE(net.contains("ozone"));
    CHECK_FALSE(net.contains("layer"));
    CHECK(net.degree()(net.index_of("ozone")) == 0);
    CHECK(net.terms() == std::vector<std::string>{"a", "b", "ozone"});
}

TEST_CASE("three documents counted by hand") {
    std::vector<DocumentTermRanking> docs = {retaining({"a", "b"}), retaining({"a", "b", "c"}), retaining({"b", "c"})};
    const auto net = build_network(docs);
    CHECK(weight(net, "a", "b") == 2);
    CHECK(weight(net, "b", "c") == 2);
    CHECK(weight(net, "a", "c") == 1);
    CHECK(weight(net, "a", "a") == 0);
    CHECK(net.degree()(net.index_of("b")) == 4);
    CHECK(net.total_weight() == 10);
    CHECK(net.document_frequency()[static_cast<std::size_t>(net.index_of("b"))] == 3);
    CHECK(net.degree().sum() == 2 * (2 + 2 + 1));
}

TEST_CASE("network build is order independent and covers retained pairs") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> word(0, 30);
    std::vector<DocumentTermRanking> docs;
    for (int d = 0; d < 40; ++d) {
        std::vector<std::string> terms;
        for (int i = 0; i < 6; ++i) {
            const std::string t = "w" + std::to_string(word(rng));
            if (std::find(terms.begin(), terms.end(), t) == terms.end()) {
                terms.push_back(t);
            }
        }
        docs.push_back(retaining(terms));
    }
    const auto net = build_network(docs);
    net.check_consistency();
    auto shuffled = docs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(build_network(shuffled) == net);
    for (const auto& doc : docs) {
        for (const auto& a : doc.terms) {
            for (const auto& b : doc.terms) {
                if (a.term.text != b.term.text) {
                    CHECK(weight(net, a.term.text, b.term.text) >= 1);
                }
            }
        }
    }
}

TEST_CASE("prune_rare_edges needs both endpoints rare") {
    std::vector<DocumentTermRanking> docs = {retaining({"rare1", "rare2"}), retaining({"lone", "common"}),
                                             retaining({"common", "x"}), retaining({"common", "y"}),
                                             retaining({"common", "z"}), retaining({"common", "w"})};
    const auto net = build_network(docs);
    CHECK(prune_rare_edges(net, 0) == net);
    const auto pruned = prune_rare_edges(net, 2);
    pruned.check_consistency();
    CHECK(weight(pruned, "rare1", "rare2") == 0);
    CHECK(weight(pruned, "lone", "common") == 1);
    CHECK(pruned.vertex_count() == net.vertex_count());
    CHECK(pruned.edge_count() == net.edge_count() - 1);
}

TEST_CASE("edge and vertex dumps") {
    std::vector<DocumentTermRanking> docs = {retaining({"b", "a"}), retaining({"a", "c"}), retaining({"a", "b"})};
    const auto net = build_network(docs);
    std::ostringstream edges;
    write_edge_list(edges, net);
    CHECK(edges.str() == "a\tb\t2\na\tc\t1\n");
    std::ostringstream vertices;
    write_vertex_list(vertices, net);
    CHECK(vertices.str() == "a\t3\nb\t2\nc\t1\n");

    const auto dir = std::filesystem::temp_directory_path() / "termtopics_graph_dump";
    std::filesystem::remove_all(dir);
    dump_network(dir, net);
    std::ifstream in(dir / "edges.tsv");
    std::stringstream read;
    read << in.rdbuf();
    CHECK(read.str() == edges.str());
    std::filesystem::remove_all(dir);
}

TEST_CASE("invalid construction") {
    Adjacency a(2, 2);
    a.insert(0, 1) = 1;
    a.makeCompressed();
    CHECK_THROWS(TermNetwork({"x", "y"}, {1, 1}, a));
    CHECK_THROWS(TermNetwork({"x", "x"}, {1, 1}, Adjacency(2, 2)));
    const TermNetwork ok({"x", "y"}, {1, 1}, Adjacency(2, 2));
    CHECK_THROWS_AS(ok.index_of("q"), LookupError);
}
