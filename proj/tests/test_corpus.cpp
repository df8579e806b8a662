#include "support/support.hpp"

#include "idearel/corpus.hpp"
#include "idearel/error.hpp"
#include "idearel/matrix.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace idearel;

namespace {

Corpus parse(const std::string& text) {
    std::istringstream in(text);
    return read_jsonl(in, "test.jsonl");
}

Corpus yearly(const std::vector<int>& years) {
    std::string text;
    for (std::size_t i = 0; i < years.size(); ++i) {
        text += R"({"id":"d)" + std::to_string(i) + R"(","date":")" + std::to_string(years[i]) + R"(","text":"x"})" + "\n";
    }
    return bin_by_time(parse(text), {});
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("dates parse and compare with missing parts") {
    CHECK(parse_date("1980") == Date{1980, 0, 0});
    CHECK(parse_date("1980-03-09").to_string() == "1980-03-09");
    CHECK(parse_date("1980") == parse_date("1980-01-01"));
    CHECK(parse_date("1980-02") < parse_date("1980-02-02"));
    CHECK_THROWS_AS(parse_date("1980-13"), Error);
    CHECK_THROWS_AS(parse_date("1981-02-29"), Error);
    CHECK_NOTHROW(parse_date("1980-02-29"));
    CHECK_THROWS_AS(parse_date("80"), Error);
}

TEST_CASE("three jsonl records give N = 3, sorted by id") {
    const auto c = parse(R"({"id":"b","date":"1980","text":"one"}
{"id":"a","date":1981,"text":"two"}

{"id":"c","date":"1980-05-01","tokens":["x","y"]}
)");
    REQUIRE(c.size() == 3);
    CHECK(c.documents[0].id == "a");
    CHECK(c.documents[0].date.year == 1981);
    CHECK(c.documents[2].pretokenized);
    CHECK(c.documents[2].tokens == std::vector<std::string>{"x", "y"});
}

TEST_CASE("missing timestamp names the record") {
    try {
        parse(R"({"id":"ok","date":"1980","text":"a"}
{"id":"nodate","text":"a"})");
        FAIL("expected an error");
    } catch (const Error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("nodate") != std::string::npos);
        CHECK(msg.find("test.jsonl:2") != std::string::npos);
    }
}

TEST_CASE("malformed lines and duplicate ids are errors") {
    CHECK_THROWS_AS(parse("{not json}\n"), Error);
    CHECK_THROWS_AS(parse(R"({"id":"a","date":"1980"})"), Error);
    CHECK_THROWS_AS(parse(R"({"id":"a","date":"1980","text":"x"}
{"id":"a","date":"1981","text":"y"})"),
                    Error);
}

TEST_CASE("same file loaded twice is identical") {
    const auto dir = testsupport::temp_dir("corpus-twice");
    {
        std::ofstream out(dir / "c.jsonl");
        out << R"({"id":"x","date":"1990","text":"Alpha beta"})" << "\n" << R"({"id":"w","date":"1991","text":"gamma"})" << "\n";
    }
    const auto a = load_corpus(dir / "c.jsonl", CorpusFormat::jsonl);
    const auto b = load_corpus(dir / "c.jsonl", CorpusFormat::jsonl);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.documents[i].id == b.documents[i].id);
        CHECK(a.documents[i].date == b.documents[i].date);
        CHECK(a.documents[i].text == b.documents[i].text);
    }
}

TEST_CASE("directory corpus layout") {
    const auto dir = testsupport::temp_dir("corpus-dir");
    std::filesystem::create_directories(dir / "1990-04");
    std::filesystem::create_directories(dir / "1991");
    std::ofstream(dir / "1990-04" / "a.txt") << "first text";
    std::ofstream(dir / "1991" / "b.txt") << "second text";
    const auto c = bin_by_time(load_corpus(dir, CorpusFormat::directory), {});
    REQUIRE(c.size() == 2);
    CHECK(c.documents[0].id == "a");
    CHECK(c.documents[0].date == Date{1990, 4, 0});
    CHECK(c.documents[1].text == "second text");
    CHECK(c.num_timesteps() == 2);
    CHECK_THROWS_AS(load_corpus(dir / "missing", CorpusFormat::directory), Error);
}

TEST_CASE("yearly binning") {
    const auto c = yearly({1980, 1980, 1981});
    CHECK(c.num_timesteps() == 2);
    CHECK(c.docs_per_timestep == std::vector<std::size_t>{2, 1});
    CHECK(c.timestep_labels == std::vector<std::string>{"1980", "1981"});

    const auto single = yearly({2001});
    CHECK(single.num_timesteps() == 1);
    CHECK(single.docs_per_timestep[0] == 1);

    const auto wide = yearly({1980, 2016, 1995});
    CHECK(wide.num_timesteps() == 37);
    CHECK(wide.empty_timesteps().size() == 34);
    std::size_t total = 0;
    for (auto n : wide.docs_per_timestep) total += n;
    CHECK(total == wide.size());
}

TEST_CASE("declared range keeps empty edge bins and rejects offenders") {
    TimeBinning b;
    b.first = parse_date("1979");
    b.last = parse_date("1982");
    const auto c = bin_by_time(yearly({1980, 1981}), b);
    CHECK(c.num_timesteps() == 4);
    CHECK(c.empty_timesteps() == std::vector<std::size_t>{0, 3});

    b.first = parse_date("1981");
    try {
        bin_by_time(yearly({1980, 1981}), b);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("d0") != std::string::npos);
    }
}

TEST_CASE("monthly and custom bins") {
    const auto raw = parse(R"({"id":"a","date":"1980-01-15","text":"x"}
{"id":"b","date":"1980-03-02","text":"x"}
{"id":"c","date":"1981-06-30","text":"x"})");
    TimeBinning m;
    m.granularity = Granularity::month;
    const auto monthly = bin_by_time(raw, m);
    CHECK(monthly.num_timesteps() == 18);
    CHECK(monthly.timestep_labels[2] == "1980-03");

    TimeBinning custom;
    custom.granularity = Granularity::custom;
    custom.edges = {parse_date("1980-01-01"), parse_date("1980-03-02"), parse_date("1981-06-30")};
    const auto binned = bin_by_time(raw, custom);
    CHECK(binned.num_timesteps() == 2);
    CHECK(binned.timestep_of == std::vector<std::size_t>{0, 1, 1});

    custom.edges = {parse_date("1980-02-01"), parse_date("1981-01-01")};
    CHECK_THROWS_AS(bin_by_time(raw, custom), Error);
}

TEST_CASE("filter_ideas") {
    DocumentIdeaMatrix m({0, 0, 1}, {"t0", "t1"}, {"a", "b", "c"});
    m.set_present(0, idea_at(0));
    m.set_present(1, idea_at(0));
    m.set_present(2, idea_at(1));
    m.set_present(0, idea_at(2));
    m.set_present(2, idea_at(2));

    const auto same = filter_ideas(m, 0, {});
    CHECK(same.labels() == m.labels());
    for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t i = 0; i < 3; ++i) CHECK(same.present(d, idea_at(i)) == m.present(d, idea_at(i)));
    }

    const auto rare = filter_ideas(m, 2, {});
    CHECK(rare.labels() == std::vector<std::string>{"a", "c"});
    CHECK(rare.num_docs() == 3);
    CHECK(rare.docs_per_timestep() == m.docs_per_timestep());
    CHECK(rare.present(2, idea_at(1)));

    const IdeaId drop[] = {idea_at(0)};
    const auto excluded = filter_ideas(m, 0, drop);
    CHECK(excluded.labels() == std::vector<std::string>{"b", "c"});

    const IdeaId unknown[] = {idea_at(7)};
    CHECK_THROWS_AS(filter_ideas(m, 0, unknown), Error);
}

TEST_CASE("build_matrix tabulates extractor output") {
    const auto c = yearly({1980, 1981});
    const auto m = build_matrix(
        c,
        [](std::size_t d, const Document&) {
            return d == 0 ? std::vector<IdeaId>{idea_at(0)} : std::vector<IdeaId>{idea_at(0), idea_at(1)};
        },
        {"A", "B", "C"});
    CHECK(m.doc_freq(idea_at(0)) == 2);
    CHECK(m.doc_freq(idea_at(1)) == 1);
    CHECK(m.doc_freq(idea_at(2)) == 0);
    CHECK(m.docs_per_timestep() == std::vector<std::size_t>{1, 1});
    CHECK_THROWS_AS(build_matrix(c, [](std::size_t, const Document&) { return std::vector<IdeaId>{idea_at(5)}; },
                                 {"A"}),
                    Error);
}

TEST_CASE("matrix json round trip") {
    const auto m = testsupport::planted_matrix(testsupport::quadrant_spec(3));
    const auto back = matrix_from_json(to_json(m));
    CHECK(back.labels() == m.labels());
    CHECK(back.timesteps() == m.timesteps());
    CHECK(back.timestep_labels() == m.timestep_labels());
    for (std::size_t i = 0; i < m.num_ideas(); ++i) CHECK(back.column(idea_at(i)) == m.column(idea_at(i)));
}

}
