#pragma once

#include "idearel/corpus.hpp"
#include "idearel/matrix.hpp"
#include "idearel/relations.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

// Linear prevalence trend from `start` at t = 0 to `end` at t = T - 1.
struct Trend {
    double start = 0.1;
    double end = 0.1;
    double at(std::size_t t, std::size_t T) const;
};

// Two ideas drawn jointly per document. P(x and y) = lift * P(x) * P(y),
// capped by the marginals; lift 0 makes them mutually exclusive.
struct PairSpec {
    Trend x;
    Trend y;
    double lift = 1.0;
};

struct PlantedSpec {
    std::vector<PairSpec> pairs;
    std::vector<Trend> singles;
    std::size_t timesteps = 20;
    std::size_t docs_per_timestep = 100;
    std::uint64_t seed = 1;
};

// Ideas 2i and 2i+1 form pair i; singles follow.
idearel::DocumentIdeaMatrix planted_matrix(const PlantedSpec& plan);

// One extreme pair per relation type (friendship, tryst, arms race,
// head-to-head) plus 12 independent background ideas with random trends.
PlantedSpec quadrant_spec(std::uint64_t seed);

// At least 26 planted pairs per type with lifts chosen so the collective
// strengths order as friendship > head-to-head > arms race > tryst.
PlantedSpec ordered_groups_spec(std::uint64_t seed);

// Direct document loop, independent of the bitset code.
double brute_force_pmi(const std::vector<std::vector<bool>>& presence, std::size_t x, std::size_t y);

// Small random corpus plus its presence table, for PMI cross-checks.
struct RandomCorpus {
    idearel::Corpus corpus;
    std::vector<std::vector<bool>> presence;  // [doc][idea]
    std::size_t num_ideas = 0;
};
RandomCorpus random_corpus(std::uint64_t seed, std::size_t max_docs, std::size_t max_ideas);

std::vector<std::string> idea_labels(std::size_t n);

// Minimal JSON Schema validator covering the keywords used in schemas/.
// Returns the list of violations (empty when valid).
std::vector<std::string> validate(const nlohmann::json& instance, const nlohmann::json& schema);

nlohmann::json load_json(const std::filesystem::path& path);

// relations.csv rows as JSON objects (empty fields null, numbers parsed).
nlohmann::json relations_csv_as_json(const std::filesystem::path& path);

// Validates every bundle file in `dir` against the schemas in `schema_dir`.
std::vector<std::string> validate_bundle(const std::filesystem::path& dir, const std::filesystem::path& schema_dir);

std::string read_file(const std::filesystem::path& path);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

}  // namespace testsupport
