#include "idearel/text.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace idearel;

namespace {

using L = std::vector<std::string>;

}  // namespace

TEST_SUITE("text") {

TEST_CASE("tokenize") {
    CHECK(tokenize("Illegal Aliens!") == L{"illegal", "aliens"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("U.S.-Mexico border") == L{"u.s", "mexico", "border"});
    CHECK(tokenize("don't stop, 1999 times") == L{"don't", "stop", "times"});
    CHECK(tokenize("'quoted' end.") == L{"quoted", "end"});
    CHECK(tokenize("caf\xc3\xa9 Na\xc3\xafve") == L{"caf\xc3\xa9", "na\xc3\xafve"});
    CHECK(tokenize("a..b") == L{"a", "b"});
}

TEST_CASE("lemmatize") {
    CHECK(lemmatize(L{"immigrants"}) == L{"immigrant"});
    CHECK(lemmatize(L{"ran"}) == L{"run"});
    CHECK(lemmatize(L{"policies", "classes", "churches", "boxes", "news", "bus", "crisis", "gas"}) ==
          L{"policy", "class", "church", "box", "news", "bus", "crisis", "gas"});
    CHECK(lemmatize(L{"obama's", "children", "women"}) == L{"obama", "child", "woman"});
    CHECK(lemmatize(L{}).empty());
}

TEST_CASE("lemmatize is idempotent") {
    L words = {"immigrants", "ran", "policies", "dies", "ties", "classes", "glasses", "churches", "wishes", "boxes",
               "buzzes", "news", "series", "analyses", "theses", "children", "studies", "cities", "is", "was",
               "this", "its", "us", "yes", "does", "goes", "parties", "carried", "married", "taxes", "buses",
               "votes", "states", "u.s", "don't", "women's", "people", "criteria", "data", "species"};
    const Lemmatizer lemmatizer;
    for (const auto& [form, lemma] : lemmatizer.exceptions()) {
        words.push_back(form);
        words.push_back(lemma);
    }
    const auto once = lemmatize(words);
    CHECK(lemmatize(once) == once);
    CHECK(once.size() == words.size());
}

TEST_CASE("phrase score on a constructed corpus") {
    // "same sex" always adjacent; neither word appears elsewhere.
    TokenDocs docs;
    std::size_t n_tok = 0;
    for (int d = 0; d < 100; ++d) {
        L doc = {"court", "ruling"};
        if (d % 4 == 0) doc = {"the", "same", "sex", "marriage", "case"};
        n_tok += doc.size();
        docs.push_back(doc);
    }
    const auto table = detect_phrases(docs, {0, 10.0, 1});
    const auto* entry = table.find("same", "sex");
    REQUIRE(entry != nullptr);
    CHECK(entry->count == 25);
    CHECK(entry->score == doctest::Approx(static_cast<double>(n_tok) / 25.0).epsilon(1e-15));

    // Discount dominates: count <= delta rejects the pair.
    const auto strict = detect_phrases(docs, {25, 0.0001, 1});
    CHECK(strict.find("same", "sex") == nullptr);
    // Never adjacent.
    CHECK(table.find("same", "court") == nullptr);
    for (const auto& [pair, e] : table.pairs) CHECK(e.score >= table.threshold);
}

TEST_CASE("phrase scores ignore document order") {
    TokenDocs docs;
    std::mt19937 rng(5);
    const L words = {"health", "care", "tax", "cut", "oil", "price", "new", "york"};
    for (int d = 0; d < 200; ++d) {
        L doc;
        for (int i = 0; i < 12; ++i) {
            const auto w = rng() % words.size();
            doc.push_back(words[w]);
            if (w % 2 == 0 && rng() % 3 != 0) doc.push_back(words[w + 1]);
        }
        docs.push_back(doc);
    }
    const auto a = detect_phrases(docs, {5, 1.0, 2});
    std::shuffle(docs.begin(), docs.end(), rng);
    const auto b = detect_phrases(docs, {5, 1.0, 2});
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (const auto& [pair, e] : a.pairs) {
        const auto* other = b.find(pair.first, pair.second);
        REQUIRE(other != nullptr);
        CHECK(other->score == e.score);
        CHECK(other->pass == e.pass);
    }
    CHECK_THROWS_AS(detect_phrases(docs, {5, 1.0, 0}), std::invalid_argument);
}

TEST_CASE("later passes build on earlier phrases") {
    TokenDocs docs(60, L{"new", "york", "times", "report", "x"});
    for (int i = 0; i < 60; ++i) docs.push_back(L{"filler", "words", "only"});
    const auto table = detect_phrases(docs, {0, 1.0, 2});
    REQUIRE(table.find("new", "york") != nullptr);
    CHECK(table.find("new", "york")->pass == 1);
    const auto merged = apply_phrases(docs[0], table);
    const bool has_phrase = std::find(merged.begin(), merged.end(), "new_york") != merged.end() ||
                            std::find(merged.begin(), merged.end(), "new_york_times") != merged.end() ||
                            std::find(merged.begin(), merged.end(), "new_york_times_report") != merged.end();
    CHECK(has_phrase);
}

TEST_CASE("apply_phrases") {
    PhraseTable table;
    table.pairs[{"same", "sex"}] = {20.0, 10, 1};
    CHECK(apply_phrases(L{"same", "sex", "marriage"}, table) == L{"same_sex", "marriage"});
    CHECK(apply_phrases(L{"same", "sex", "marriage"}, PhraseTable{}) == L{"same", "sex", "marriage"});

    PhraseTable overlap;
    overlap.pairs[{"a", "b"}] = {20.0, 10, 1};
    overlap.pairs[{"b", "c"}] = {20.0, 10, 1};
    CHECK(apply_phrases(L{"a", "b", "c"}, overlap) == L{"a_b", "c"});
    CHECK(apply_phrases(L{"b", "c", "a"}, overlap) == L{"b_c", "a"});

    std::mt19937 rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        L doc;
        for (int i = 0; i < 20; ++i) doc.push_back(std::string(1, static_cast<char>('a' + rng() % 4)));
        CHECK(apply_phrases(doc, overlap).size() <= doc.size());
    }
}

TEST_CASE("vocabulary") {
    const TokenDocs docs = {{"b", "a", "a", "the"}, {"a", "c"}, {"c", "the"}};
    const WordSet stop = {"the"};
    const auto v = build_vocabulary(docs, {1, &stop});
    CHECK(v.terms == L{"a", "b", "c"});
    CHECK(v.doc_freq == std::vector<std::size_t>{2, 1, 2});
    CHECK(v.find("c") == std::optional<std::size_t>(2));
    CHECK_FALSE(v.find("the"));
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(v.index.at(v.terms[i]) == i);
        CHECK(v.doc_freq[i] <= v.num_docs);
    }
    const auto frequent = build_vocabulary(docs, {2, &stop});
    CHECK(frequent.terms == L{"a", "c"});
}

TEST_CASE("embedded resources load") {
    CHECK(default_stopwords().contains("the"));
    CHECK_FALSE(default_stopwords().contains("same"));
    CHECK(default_lemma_exceptions().at("ran") == "run");
}

TEST_CASE("preprocess handles text and tokens") {
    Corpus c;
    Document a;
    a.id = "a";
    a.text = "Immigrants ran";
    Document b;
    b.id = "b";
    b.tokens = {"Policies", "children"};
    b.pretokenized = true;
    c.documents = {a, b};
    const auto out = preprocess(c, Lemmatizer());
    CHECK(out[0] == L{"immigrant", "run"});
    CHECK(out[1] == L{"Policy", "child"});
}

}
