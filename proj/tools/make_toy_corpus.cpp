// Writes the synthetic toy corpus: themed documents over 20 years whose theme
// mix drifts with time, so every relation type shows up.

#include "idearel/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace {

struct Theme {
    const char* name;
    std::vector<std::string> words;
    double start;  // weight in the first year
    double end;    // weight in the last year
};

const std::vector<Theme>& themes() {
    static const std::vector<Theme> t = {
        {"economy", {"market", "inflation", "rates", "bank", "growth", "unemployment", "budget", "deficit", "tax cuts",
                     "interest", "investors", "recession"}, 3.0, 1.5},
        {"health", {"health care", "insurance", "hospital", "patients", "doctors", "medicare", "coverage",
                    "premiums", "clinics", "prescription"}, 1.0, 3.0},
        {"foreign", {"treaty", "embassy", "diplomats", "sanctions", "troops", "allies", "summit", "border",
                     "ceasefire", "foreign policy"}, 2.5, 2.5},
        {"energy", {"oil", "gasoline", "pipeline", "drilling", "barrels", "refinery", "prices", "crude", "fuel"},
         2.5, 0.8},
        {"climate", {"emissions", "carbon", "climate change", "warming", "solar", "wind", "renewable", "glaciers"},
         0.5, 2.8},
        {"rights", {"same sex", "marriage", "court", "equality", "ruling", "couples", "civil rights", "justices"},
         0.6, 2.6},
        {"religion", {"church", "clergy", "faith", "congregation", "bishops", "prayer", "worship", "doctrine"},
         2.2, 0.7},
        {"crime", {"police", "arrest", "prison", "sentencing", "prosecutors", "officers", "charges", "jury"},
         2.0, 2.0},
        {"technology", {"software", "internet", "machine translation", "computers", "startup", "data", "privacy",
                        "smartphone", "algorithm"}, 0.7, 3.2},
        {"sports", {"league", "season", "coach", "playoffs", "stadium", "championship", "players", "score"}, 2.0,
         1.9},
        {"education", {"schools", "teachers", "students", "tuition", "classroom", "curriculum", "college",
                       "testing"}, 1.8, 1.6},
        {"agriculture", {"farmers", "crops", "harvest", "drought", "cattle", "wheat", "subsidies", "livestock"}, 2.0,
         0.9},
    };
    return t;
}

// Themes that like to appear together.
const std::array<std::pair<int, int>, 5> kAffinities = {{{3, 0}, {4, 1}, {5, 6}, {8, 10}, {11, 3}}};

const std::vector<std::string> kFiller = {"the", "a", "of", "and", "in", "to", "for", "on", "with",
                                          "was", "is", "that", "this", "by", "it", "at", "from", "as"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the synthetic toy corpus"};
    std::string out_path = "data/toy_corpus.jsonl";
    std::size_t docs_per_year = 50;
    std::uint64_t seed = 2016;
    app.add_option("-o,--out", out_path, "Output JSONL path")->capture_default_str();
    app.add_option("--docs-per-year", docs_per_year, "Documents per year")->capture_default_str();
    app.add_option("--seed", seed, "Random seed")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    constexpr int kFirstYear = 2000;
    constexpr int kYears = 20;
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << '\n';
        return 1;
    }

    auto rng = idearel::make_stream(seed, 0);
    const auto& t = themes();
    std::size_t serial = 0;
    for (int y = 0; y < kYears; ++y) {
        const double f = static_cast<double>(y) / (kYears - 1);
        std::vector<double> weights;
        for (const auto& theme : t) weights.push_back(theme.start + (theme.end - theme.start) * f);
        std::discrete_distribution<int> pick(weights.begin(), weights.end());

        for (std::size_t d = 0; d < docs_per_year; ++d) {
            std::vector<int> chosen{pick(rng)};
            for (const auto& [a, b] : kAffinities) {
                if (chosen[0] == a && idearel::uniform01(rng) < 0.6) chosen.push_back(b);
            }
            const int extra = static_cast<int>(idearel::uniform01(rng) * 3.0);
            for (int i = 0; i < extra; ++i) {
                const int c = pick(rng);
                if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) chosen.push_back(c);
            }

            std::string text;
            const std::size_t sentences = 12 + static_cast<std::size_t>(idearel::uniform01(rng) * 10.0);
            for (std::size_t s = 0; s < sentences; ++s) {
                // The first theme dominates the document.
                const int theme = idearel::uniform01(rng) < 0.55 ? chosen[0]
                                  : chosen[static_cast<std::size_t>(idearel::uniform01(rng) * chosen.size())];
                const auto& words = t[static_cast<std::size_t>(theme)].words;
                const std::size_t len = 8 + static_cast<std::size_t>(idearel::uniform01(rng) * 8.0);
                std::string sentence;
                for (std::size_t w = 0; w < len; ++w) {
                    const bool content = idearel::uniform01(rng) < 0.65;
                    const auto& pool = content ? words : kFiller;
                    const auto& word = pool[static_cast<std::size_t>(idearel::uniform01(rng) * pool.size())];
                    if (!sentence.empty()) sentence += ' ';
                    sentence += word;
                }
                sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
                if (!text.empty()) text += ' ';
                text += sentence + '.';
            }

            const int month = 1 + static_cast<int>(idearel::uniform01(rng) * 12.0);
            const int day = 1 + static_cast<int>(idearel::uniform01(rng) * 28.0);
            char date[32];
            std::snprintf(date, sizeof date, "%04d-%02d-%02d", kFirstYear + y, month, day);
            char id[32];
            std::snprintf(id, sizeof id, "doc%05zu", serial++);
            nlohmann::json line = {{"id", id}, {"date", date}, {"text", text}};
            out << line.dump() << '\n';
        }
    }
    return 0;
}
