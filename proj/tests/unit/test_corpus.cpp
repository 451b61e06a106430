#include <doctest.h>

#include <sstream>

#include "termtopics/corpus.hpp"
#include "termtopics/errors.hpp"
#include "termtopics/preprocess.hpp"

using namespace termtopics;

namespace {

const char* kTwoDocs =
    R"({"doc_id":"a","title":"Rivers","date":"2021-03-04","tags":["Water"],"tokens":[)"
    R"({"surface":"Green","lemma":"green","pos":"ADJ","position":0},)"
    R"({"surface":"rivers","lemma":"river","pos":"NOUN","position":1}]})"
    "\n"
    R"({"doc_id":"b","title":"Air","date":"2021-04-01","tokens":[)"
    R"({"surface":"European","lemma":"European","pos":"PROPN","ner":"B-ORG","position":0},)"
    R"({"surface":"Commission","lemma":"Commission","pos":"PROPN","ner":"I-ORG","position":1}]})"
    "\n";

Corpus parse(const std::string& text, CorpusFormat format = CorpusFormat::AnnotatedJsonl) {
    std::istringstream in(text);
    return read_corpus(in, format, "test");
}

} // namespace

TEST_CASE("two well-formed annotated lines keep their order") {
    const Corpus c = parse(kTwoDocs);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[0].doc_id == "a");
    CHECK(c.documents[1].doc_id == "b");
    CHECK(c.documents[0].tokens[1].lemma == "river");
    CHECK(c.documents[0].date == Date{2021, 3, 4});
    CHECK(c.documents[1].tokens[0].ner == NerTag{BioPosition::Begin, "ORG"});
    CHECK(c.index_of("b") == 1);
    CHECK_THROWS_AS(c.index_of("zzz"), LookupError);
}

TEST_CASE("duplicate doc_id is rejected by name") {
    const std::string line = R"({"doc_id":"a","tokens":[{"lemma":"x","pos":"NOUN","position":0}]})";
    try {
        parse(line + "\n" + line + "\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
}

TEST_CASE("malformed line reports its line number") {
    std::string text = kTwoDocs;
    text += "{not json\n";
    try {
        parse(text);
        FAIL("expected IngestError");
    } catch (const IngestError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse(R"({"doc_id":"x","tokens":[{"lemma":"y","pos":"BOGUS","position":0}]})"), IngestError);
    CHECK_THROWS_AS(parse(""), ValidationError);
}

TEST_CASE("plain-jsonl runs the fallback tokenizer") {
    const Corpus c = parse(R"({"doc_id":"p","raw_text":"Rivers carry plastic."})", CorpusFormat::PlainJsonl);
    REQUIRE(c.documents[0].tokens.size() == 3);
    CHECK(c.documents[0].tokens[0].lemma == "rivers");
    CHECK(c.documents[0].tokens[2].lemma == "plastic");
    CHECK(c.documents[0].tokens[0].surface == "Rivers");
}

TEST_CASE("validate_corpus severities") {
    Corpus c = parse(kTwoDocs);
    CHECK(validate_corpus(c).warning_count() == 0);
    CHECK_FALSE(validate_corpus(c).has_fatal());

    c.documents[1].date.reset();
    auto report = validate_corpus(c);
    CHECK(report.warning_count() == 1);
    CHECK_FALSE(report.has_fatal());

    c.documents[0].tokens.clear();
    report = validate_corpus(c);
    CHECK(report.has_fatal());
    CHECK(report.fatal_count() == 1);
    bool flagged = false;
    for (const auto& issue : report.issues) {
        flagged |= issue.severity == ValidationIssue::Severity::Fatal && issue.doc_id == "a";
    }
    CHECK(flagged);
}

TEST_CASE("annotated-jsonl round trip") {
    Corpus c = parse(kTwoDocs);
    c.documents[0].raw_text = "Green rivers, \"quoted\"\nline";
    std::ostringstream out;
    write_corpus(out, c);
    const Corpus back = parse(out.str());
    CHECK(back.documents == c.documents);
    CHECK(parse(out.str()) == back);
}

TEST_CASE("dates") {
    CHECK(parse_date("2020-02-29") == Date{2020, 2, 29});
    CHECK_FALSE(parse_date("2021-02-29"));
    CHECK_FALSE(parse_date("2021-13-01"));
    CHECK(parse_date("2021-05-06T10:00:00Z") == Date{2021, 5, 6});
    CHECK(to_string(Date{2021, 5, 6}) == "2021-05-06");
}

TEST_CASE("tag parsing") {
    CHECK(parse_pos("PROPN") == PosTag::PROPN);
    CHECK_FALSE(parse_pos("propn"));
    CHECK(parse_ner("I-LOC") == NerTag{BioPosition::Inside, "LOC"});
    CHECK_FALSE(parse_ner("O"));
    CHECK(parse_corpus_format("plain-jsonl") == CorpusFormat::PlainJsonl);
    CHECK_FALSE(parse_corpus_format("csv"));
}
