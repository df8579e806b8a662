#include "idearel/keywords.hpp"

#include "idearel/error.hpp"
#include "idearel/format.hpp"
#include "idearel/log.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace idearel {
namespace {

bool ranks_before(const KeywordScore& a, const KeywordScore& b) {
    if (a.z != b.z) return a.z > b.z;
    return a.term < b.term;
}

std::uint64_t count_of(const TermCounts& counts, const std::string& term) {
    auto it = counts.find(term);
    return it == counts.end() ? 0 : it->second;
}

}  // namespace

TermCounts count_terms(const TokenDocs& docs, const WordSet* stopwords) {
    TermCounts counts;
    for (const auto& doc : docs) {
        for (const auto& tok : doc) {
            if (stopwords && stopwords->contains(tok)) continue;
            ++counts[tok];
        }
    }
    return counts;
}

std::vector<KeywordScore> log_odds_scores(const TermCounts& target, const TermCounts& background,
                                          double prior_scale) {
    if (!(prior_scale > 0.0)) throw std::invalid_argument("log_odds_scores: prior_scale must be positive");
    TermCounts pooled = target;
    for (const auto& [term, count] : background) pooled[term] += count;
    std::uint64_t pooled_total = 0;
    for (const auto& [term, count] : pooled) pooled_total += count;

    TermPrior prior;
    for (const auto& [term, count] : pooled) {
        if (count == 0) continue;
        prior.emplace(term, prior_scale * static_cast<double>(count) / static_cast<double>(pooled_total));
    }
    return log_odds_scores(target, background, prior);
}

std::vector<KeywordScore> log_odds_scores(const TermCounts& target, const TermCounts& background,
                                          const TermPrior& prior) {
    std::uint64_t n1 = 0, n2 = 0;
    for (const auto& [term, count] : target) n1 += count;
    for (const auto& [term, count] : background) n2 += count;
    if (n1 == 0 || n2 == 0) throw Error("log_odds_scores: both corpora need at least one token");

    std::vector<std::string> vocab;
    for (const auto& [term, count] : target) {
        if (count > 0) vocab.push_back(term);
    }
    for (const auto& [term, count] : background) {
        if (count > 0 && count_of(target, term) == 0) vocab.push_back(term);
    }
    std::sort(vocab.begin(), vocab.end());

    double a0 = 0.0;
    for (const auto& term : vocab) {
        auto it = prior.find(term);
        if (it == prior.end()) throw Error("log_odds_scores: no prior for term '" + term + "'");
        if (!(it->second > 0.0)) throw Error("log_odds_scores: prior for '" + term + "' must be positive");
        a0 += it->second;
    }

    std::vector<KeywordScore> scores;
    scores.reserve(vocab.size());
    for (const auto& term : vocab) {
        const double a = prior.find(term)->second;
        const double y1 = static_cast<double>(count_of(target, term));
        const double y2 = static_cast<double>(count_of(background, term));
        const double rest1 = static_cast<double>(n1) + a0 - y1 - a;
        const double rest2 = static_cast<double>(n2) + a0 - y2 - a;
        if (!(rest1 > 0.0 && rest2 > 0.0)) {
            throw Error("log_odds_scores: pooled vocabulary needs at least two terms");
        }
        KeywordScore s;
        s.term = term;
        s.delta = std::log((y1 + a) / rest1) - std::log((y2 + a) / rest2);
        s.variance = 1.0 / (y1 + a) + 1.0 / (y2 + a);
        s.z = s.delta / std::sqrt(s.variance);
        scores.push_back(std::move(s));
    }
    return scores;
}

KeywordIdeaSet top_keywords(std::span<const KeywordScore> scores, std::size_t n) {
    if (n < 1) throw std::invalid_argument("top_keywords: n must be >= 1");
    std::vector<const KeywordScore*> order;
    order.reserve(scores.size());
    for (const auto& s : scores) order.push_back(&s);
    if (n > order.size()) {
        log::warn("top_keywords: asked for " + std::to_string(n) + " keywords but only " +
                  std::to_string(order.size()) + " terms are scored");
        n = order.size();
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                      [](const KeywordScore* a, const KeywordScore* b) { return ranks_before(*a, *b); });
    KeywordIdeaSet ideas;
    for (std::size_t i = 0; i < n; ++i) {
        ideas.index.emplace(order[i]->term, idea_at(i));
        ideas.terms.push_back(order[i]->term);
    }
    return ideas;
}

std::vector<IdeaId> doc_keyword_ideas(std::span<const std::string> tokens, const KeywordIdeaSet& ideas) {
    std::vector<IdeaId> found;
    for (const auto& tok : tokens) {
        if (auto it = ideas.index.find(tok); it != ideas.index.end()) found.push_back(it->second);
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

void write_keyword_csv(std::ostream& out, std::span<const KeywordScore> scores) {
    std::vector<const KeywordScore*> order;
    for (const auto& s : scores) order.push_back(&s);
    std::sort(order.begin(), order.end(),
              [](const KeywordScore* a, const KeywordScore* b) { return ranks_before(*a, *b); });
    out << "term,delta,variance,z\n";
    for (const auto* s : order) {
        out << csv_field(s->term) << ',' << format_double(s->delta) << ',' << format_double(s->variance) << ','
            << format_double(s->z) << '\n';
    }
}

}  // namespace idearel
