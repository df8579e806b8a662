#pragma once

#include "idearel/text.hpp"
#include "idearel/types.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace idearel {

using TermCounts = std::map<std::string, std::uint64_t, std::less<>>;
using TermPrior = std::map<std::string, double, std::less<>>;

// Token counts over a set of documents, skipping stopwords when given.
TermCounts count_terms(const TokenDocs& docs, const WordSet* stopwords = nullptr);

struct KeywordScore {
    std::string term;
    double delta = 0.0;
    double variance = 0.0;
    double z = 0.0;
};

// Log-odds ratio with an informative Dirichlet prior (Monroe et al.'s
// "fightin' words"). For each term w of the pooled vocabulary:
//
//   delta_w = log((y1 + a_w) / (n1 + a0 - y1 - a_w)) - log((y2 + a_w) / (n2 + a0 - y2 - a_w))
//   var_w   = 1 / (y1 + a_w) + 1 / (y2 + a_w)
//   z_w     = delta_w / sqrt(var_w)
//
// with a0 the sum of a_w over the pooled vocabulary. Here a_w is proportional
// to the pooled count of w and a0 == prior_scale. Terms with a zero pooled
// count never appear. Output is ordered by term.
std::vector<KeywordScore> log_odds_scores(const TermCounts& target, const TermCounts& background,
                                          double prior_scale = 500.0);

// Same statistic with explicit per-term prior counts a_w; every pooled term
// needs an entry.
std::vector<KeywordScore> log_odds_scores(const TermCounts& target, const TermCounts& background,
                                          const TermPrior& prior);

struct KeywordIdeaSet {
    std::vector<std::string> terms;
    std::unordered_map<std::string, IdeaId> index;

    std::size_t size() const noexcept { return terms.size(); }
};

// The n highest z-scores; equal scores go to the lexicographically smaller
// term. Idea ids follow rank order.
KeywordIdeaSet top_keywords(std::span<const KeywordScore> scores, std::size_t n);

// Binary presence: each keyword found in the tokens once, sorted by id.
std::vector<IdeaId> doc_keyword_ideas(std::span<const std::string> tokens, const KeywordIdeaSet& ideas);

// Ranked CSV: term,delta,variance,z (highest z first).
void write_keyword_csv(std::ostream& out, std::span<const KeywordScore> scores);

}  // namespace idearel
