#pragma once

#include "idearel/matrix.hpp"
#include "idearel/stats.hpp"
#include "idearel/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace idearel {

// Add-one smoothed PMI pooled over all timesteps, with the additive constant
// fixed to log N:
//
//   PMI(x, y) = log N + log((1 + c_xy) / ((1 + c_x)(1 + c_y)))
//
// where c_x, c_y, c_xy count documents. Natural log.
double pmi_from_counts(std::size_t n_docs, std::size_t c_x, std::size_t c_y, std::size_t c_xy);
double pmi(const DocumentIdeaMatrix& matrix, IdeaId x, IdeaId y);

// Fraction of documents at each timestep that contain the idea. Timesteps
// without documents are undefined.
struct PrevalenceSeries {
    std::vector<double> values;
    std::vector<bool> defined;

    std::size_t size() const noexcept { return values.size(); }
};

PrevalenceSeries prevalence_series(const DocumentIdeaMatrix& matrix, IdeaId idea);

// Pearson r over the raw vectors; nullopt when either is constant or there
// are fewer than 2 points.
std::optional<double> pearson_r(std::span<const double> x, std::span<const double> y);

// Pearson r over the timesteps defined in both series. Undefined when fewer
// than 3 timesteps qualify or either series is constant on them.
std::optional<double> prevalence_correlation(const PrevalenceSeries& x, const PrevalenceSeries& y);

// |pmi * r|; zero when r is undefined.
double strength(double pmi, std::optional<double> r);

RelationType classify(double pmi, std::optional<double> r);

struct RelationRecord {
    IdeaId x{};
    IdeaId y{};
    double pmi = 0.0;
    std::optional<double> r;
    double strength = 0.0;
    RelationType type = RelationType::degenerate;
};

// One record per unordered pair x < y, in lexicographic (x, y) order.
std::vector<RelationRecord> all_pair_relations(const DocumentIdeaMatrix& matrix);

// Top-k records of one type by descending strength, ties by (x, y).
// Degenerate records are never ranked.
std::vector<RelationRecord> rank_by_type(std::span<const RelationRecord> records, RelationType type,
                                         std::size_t k);

// 1-based rank of every record within its type; 0 for degenerate records.
std::vector<std::size_t> ranks_in_type(std::span<const RelationRecord> records);

struct CollectiveStrength {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
    bool empty = true;
};

// Mean and standard error of the top-min(m, population) strengths of a type.
CollectiveStrength collective_strength(std::span<const RelationRecord> records, RelationType type,
                                       std::size_t m = 25);

// Pearson correlation between the pmi and r fields over non-degenerate
// records.
stats::PearsonResult joint_distribution_stats(std::span<const RelationRecord> records);

}  // namespace idearel
