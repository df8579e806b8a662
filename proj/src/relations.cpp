#include "idearel/relations.hpp"

#include "idearel/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace idearel {
namespace {

bool stronger(const RelationRecord& a, const RelationRecord& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

}  // namespace

std::string_view to_string(RelationType type) noexcept {
    switch (type) {
    case RelationType::friendship: return "friendship";
    case RelationType::tryst: return "tryst";
    case RelationType::arms_race: return "arms_race";
    case RelationType::head_to_head: return "head_to_head";
    case RelationType::degenerate: return "degenerate";
    }
    return "degenerate";
}

std::optional<RelationType> parse_relation_type(std::string_view name) noexcept {
    for (auto type : {RelationType::friendship, RelationType::tryst, RelationType::arms_race,
                      RelationType::head_to_head, RelationType::degenerate}) {
        if (to_string(type) == name) return type;
    }
    return std::nullopt;
}

double pmi_from_counts(std::size_t n_docs, std::size_t c_x, std::size_t c_y, std::size_t c_xy) {
    const double n = static_cast<double>(n_docs);
    return std::log(n) + std::log1p(static_cast<double>(c_xy)) - std::log1p(static_cast<double>(c_x)) -
           std::log1p(static_cast<double>(c_y));
}

double pmi(const DocumentIdeaMatrix& matrix, IdeaId x, IdeaId y) {
    if (x == y) throw std::invalid_argument("pmi: ideas must differ");
    if (to_index(x) >= matrix.num_ideas() || to_index(y) >= matrix.num_ideas()) {
        throw std::out_of_range("pmi: idea not in matrix");
    }
    return pmi_from_counts(matrix.num_docs(), matrix.doc_freq(x), matrix.doc_freq(y), matrix.cooccurrence(x, y));
}

PrevalenceSeries prevalence_series(const DocumentIdeaMatrix& matrix, IdeaId idea) {
    const auto totals = matrix.docs_per_timestep();
    const auto counts = matrix.counts_by_timestep(idea);
    PrevalenceSeries series;
    series.values.assign(totals.size(), 0.0);
    series.defined.assign(totals.size(), false);
    for (std::size_t t = 0; t < totals.size(); ++t) {
        if (totals[t] == 0) continue;
        series.values[t] = static_cast<double>(counts[t]) / static_cast<double>(totals[t]);
        series.defined[t] = true;
    }
    return series;
}

std::optional<double> pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson_r: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) return std::nullopt;
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; }) ||
        std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) {
        return std::nullopt;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> prevalence_correlation(const PrevalenceSeries& x, const PrevalenceSeries& y) {
    if (x.size() != y.size() || x.defined.size() != x.size() || y.defined.size() != y.size()) {
        throw std::invalid_argument("prevalence_correlation: series lengths differ");
    }
    std::vector<double> a, b;
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (x.defined[t] && y.defined[t]) {
            a.push_back(x.values[t]);
            b.push_back(y.values[t]);
        }
    }
    if (a.size() < 3) return std::nullopt;
    return pearson_r(a, b);
}

double strength(double pmi, std::optional<double> r) {
    if (!r) return 0.0;
    return std::fabs(pmi * *r);
}

RelationType classify(double pmi, std::optional<double> r) {
    if (!r || *r == 0.0 || pmi == 0.0 || std::isnan(pmi) || std::isnan(*r)) return RelationType::degenerate;
    if (pmi > 0.0) return *r > 0.0 ? RelationType::friendship : RelationType::tryst;
    return *r > 0.0 ? RelationType::arms_race : RelationType::head_to_head;
}

std::vector<RelationRecord> all_pair_relations(const DocumentIdeaMatrix& matrix) {
    const std::size_t m = matrix.num_ideas();
    std::vector<PrevalenceSeries> series;
    std::vector<std::size_t> freq;
    series.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        series.push_back(prevalence_series(matrix, idea_at(i)));
        freq.push_back(matrix.doc_freq(idea_at(i)));
    }
    std::vector<RelationRecord> records;
    records.reserve(m > 1 ? m * (m - 1) / 2 : 0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            RelationRecord rec;
            rec.x = idea_at(i);
            rec.y = idea_at(j);
            rec.pmi = pmi_from_counts(matrix.num_docs(), freq[i], freq[j], matrix.cooccurrence(rec.x, rec.y));
            rec.r = prevalence_correlation(series[i], series[j]);
            rec.strength = strength(rec.pmi, rec.r);
            rec.type = classify(rec.pmi, rec.r);
            records.push_back(rec);
        }
    }
    return records;
}

std::vector<RelationRecord> rank_by_type(std::span<const RelationRecord> records, RelationType type,
                                         std::size_t k) {
    if (k < 1) throw std::invalid_argument("rank_by_type: k must be >= 1");
    std::vector<RelationRecord> of_type;
    if (type == RelationType::degenerate) return of_type;
    for (const auto& rec : records) {
        if (rec.type == type) of_type.push_back(rec);
    }
    std::sort(of_type.begin(), of_type.end(), stronger);
    if (of_type.size() > k) of_type.resize(k);
    return of_type;
}

std::vector<std::size_t> ranks_in_type(std::span<const RelationRecord> records) {
    std::vector<std::size_t> ranks(records.size(), 0);
    for (auto type : kRelationTypes) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].type == type) idx.push_back(i);
        }
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return stronger(records[a], records[b]); });
        for (std::size_t r = 0; r < idx.size(); ++r) ranks[idx[r]] = r + 1;
    }
    return ranks;
}

CollectiveStrength collective_strength(std::span<const RelationRecord> records, RelationType type,
                                       std::size_t m) {
    if (m < 1) throw std::invalid_argument("collective_strength: m must be >= 1");
    CollectiveStrength out;
    const auto top = rank_by_type(records, type, m);
    if (top.empty()) return out;
    out.empty = false;
    out.count = top.size();
    double sum = 0.0;
    for (const auto& rec : top) sum += rec.strength;
    out.mean = sum / static_cast<double>(top.size());
    if (top.size() > 1) {
        double ss = 0.0;
        for (const auto& rec : top) ss += (rec.strength - out.mean) * (rec.strength - out.mean);
        const double sd = std::sqrt(ss / static_cast<double>(top.size() - 1));
        out.std_error = sd / std::sqrt(static_cast<double>(top.size()));
    }
    return out;
}

stats::PearsonResult joint_distribution_stats(std::span<const RelationRecord> records) {
    std::vector<double> pmis, rs;
    for (const auto& rec : records) {
        if (rec.type == RelationType::degenerate) continue;
        pmis.push_back(rec.pmi);
        rs.push_back(*rec.r);
    }
    if (pmis.size() < 3) throw Error("joint_distribution_stats: need at least 3 non-degenerate pairs");
    return stats::pearson_log_p(pmis, rs);
}

}  // namespace idearel
