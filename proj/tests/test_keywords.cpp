#include "idearel/error.hpp"
#include "idearel/keywords.hpp"
#include "idearel/log.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace idearel;

namespace {

const KeywordScore& score_of(const std::vector<KeywordScore>& scores, const std::string& term) {
    return *std::find_if(scores.begin(), scores.end(), [&](const auto& s) { return s.term == term; });
}

}  // namespace

TEST_SUITE("keywords") {

TEST_CASE("explicit prior matches direct evaluation") {
    // y1 = 10 of n1 = 100, y2 = 5 of n2 = 200, a_w = 1, a0 = |V| = 2.
    const TermCounts target = {{"w", 10}, {"other", 90}};
    const TermCounts background = {{"w", 5}, {"other", 195}};
    const auto scores = log_odds_scores(target, background, TermPrior{{"w", 1.0}, {"other", 1.0}});
    const auto& w = score_of(scores, "w");
    const double delta = std::log(11.0 / (100.0 + 2.0 - 10.0 - 1.0)) - std::log(6.0 / (200.0 + 2.0 - 5.0 - 1.0));
    const double var = 1.0 / 11.0 + 1.0 / 6.0;
    CHECK(std::fabs(w.delta - delta) < 1e-12);
    CHECK(std::fabs(w.variance - var) < 1e-12);
    CHECK(std::fabs(w.z - delta / std::sqrt(var)) < 1e-12);
    CHECK_THROWS_AS(log_odds_scores(target, background, TermPrior{{"w", 1.0}}), Error);
}

TEST_CASE("identical corpora score zero, swapping negates") {
    const TermCounts a = {{"x", 4}, {"y", 7}, {"z", 1}};
    for (const auto& s : log_odds_scores(a, a)) {
        CHECK(s.delta == 0.0);
        CHECK(s.z == 0.0);
    }
    const TermCounts b = {{"x", 1}, {"y", 9}, {"q", 3}};
    const auto ab = log_odds_scores(a, b);
    const auto ba = log_odds_scores(b, a);
    REQUIRE(ab.size() == 4);
    for (std::size_t i = 0; i < ab.size(); ++i) {
        CHECK(ab[i].term == ba[i].term);
        CHECK(ab[i].z == -ba[i].z);
        CHECK(ab[i].variance > 0);
        CHECK(std::isfinite(ab[i].z));
    }
}

TEST_CASE("default prior sums to prior_scale") {
    const TermCounts a = {{"x", 30}, {"y", 70}};
    const TermCounts b = {{"x", 50}, {"y", 50}};
    // pooled x = 80 of 200, so a_x = 200 and a0 = 500
    const auto s = score_of(log_odds_scores(a, b, 500.0), "x");
    const double expect =
        std::log((30.0 + 200.0) / (100.0 + 500.0 - 30.0 - 200.0)) - std::log((50.0 + 200.0) / (100.0 + 500.0 - 50.0 - 200.0));
    CHECK(std::fabs(s.delta - expect) < 1e-12);
    CHECK_THROWS_AS(log_odds_scores(TermCounts{{"x", 3}}, TermCounts{{"x", 4}}), Error);
}

TEST_CASE("delta increases with the target count") {
    // Realistic table: fixed prior, fixed n1, counts moved from other terms.
    std::mt19937 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const std::uint64_t n1 = 2000 + rng() % 5000;
        const std::uint64_t y2 = rng() % 200;
        const std::uint64_t n2 = 5000 + rng() % 5000;
        const TermPrior prior = {{"w", 0.5 + (rng() % 100) / 10.0}, {"rest", 400.0}};
        double last = -INFINITY;
        double last_delta = -INFINITY;
        for (std::uint64_t y1 = 0; y1 < 300; ++y1) {
            const TermCounts t = {{"w", y1}, {"rest", n1 - y1}};
            const TermCounts b = {{"w", y2}, {"rest", n2 - y2}};
            const auto s = score_of(log_odds_scores(t, b, prior), "w");
            CHECK(s.delta > last_delta);
            // the shrinking variance can push a negative z further down,
            // so z itself is only monotone once delta is non-negative
            if (s.delta >= 0.0) CHECK(s.z > last);
            last_delta = s.delta;
            last = s.z;
        }
    }
}

TEST_CASE("top_keywords") {
    const std::vector<KeywordScore> scores = {
        {"arab", 0, 1, 3.0}, {"zeta", 0, 1, 2.0}, {"beta", 0, 1, 2.0}, {"islam", 0, 1, 5.0}, {"low", 0, 1, -1.0}};
    const auto top = top_keywords(scores, 3);
    CHECK(top.terms == std::vector<std::string>{"islam", "arab", "beta"});
    CHECK(top.index.at("arab") == idea_at(1));

    auto shuffled = scores;
    std::reverse(shuffled.begin(), shuffled.end());
    CHECK(top_keywords(shuffled, 3).terms == top.terms);

    std::vector<std::string> warnings;
    auto previous = log::set_warning_sink([&](std::string_view w) { warnings.emplace_back(w); });
    CHECK(top_keywords(scores, 100).size() == 5);
    log::set_warning_sink(previous);
    CHECK(warnings.size() == 1);
}

TEST_CASE("doc_keyword_ideas is binary membership") {
    const std::vector<KeywordScore> scores = {{"islam", 0, 1, 2.0}, {"arab", 0, 1, 1.0}};
    const auto set = top_keywords(scores, 2);
    const std::vector<std::string> doc = {"islam", "arab", "islam"};
    CHECK(doc_keyword_ideas(doc, set) == std::vector<IdeaId>{idea_at(0), idea_at(1)});
    CHECK(doc_keyword_ideas(std::vector<std::string>{"border"}, set).empty());
    CHECK(doc_keyword_ideas(std::vector<std::string>{"arab", "border"}, set) == std::vector<IdeaId>{idea_at(1)});
}

TEST_CASE("count_terms and csv export") {
    const TokenDocs docs = {{"the", "tax", "tax"}, {"cut", "the"}};
    const WordSet stop = {"the"};
    const auto counts = count_terms(docs, &stop);
    CHECK(counts == TermCounts{{"cut", 1}, {"tax", 2}});

    std::ostringstream out;
    write_keyword_csv(out, std::vector<KeywordScore>{{"a", 0.5, 1, 0.5}, {"b,c", 1.0, 1, 1.0}});
    CHECK(out.str() == "term,delta,variance,z\n\"b,c\",1,1,1\na,0.5,1,0.5\n");
}

}
