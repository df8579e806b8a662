#pragma once

#include "idearel/corpus.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace idearel {

using TokenList = std::vector<std::string>;
using TokenDocs = std::vector<TokenList>;
using WordSet = std::unordered_set<std::string>;
using LemmaTable = std::map<std::string, std::string, std::less<>>;

// Splits on anything that is not a letter. ASCII letters are lowercased;
// bytes >= 0x80 count as letters so UTF-8 words survive intact. A '.' or
// '\'' is kept only when it sits between two letters ("u.s", "don't").
TokenList tokenize(std::string_view text);

// Rule-based lemmatizer: exception table first, then possessive and plural
// suffix rules, then the exception table again on the stripped form. Every
// output is a fixed point.
class Lemmatizer {
public:
    Lemmatizer();
    explicit Lemmatizer(LemmaTable exceptions);

    std::string lemma(std::string_view token) const;
    TokenList operator()(std::span<const std::string> tokens) const;

    const LemmaTable& exceptions() const noexcept { return exceptions_; }

private:
    std::optional<std::string> lookup(std::string_view word) const;

    LemmaTable exceptions_;
};

TokenList lemmatize(std::span<const std::string> tokens);

const LemmaTable& default_lemma_exceptions();
const WordSet& default_stopwords();

// Plain-text resources: one entry per line, '#' starts a comment. Lemma
// lines are "<form> <lemma>".
WordSet read_word_list(const std::filesystem::path& path);
LemmaTable read_lemma_exceptions(const std::filesystem::path& path);

struct PhraseParams {
    std::size_t delta = 5;
    double threshold = 10.0;
    std::size_t passes = 1;
    // Pairs touching one of these words are never candidates.
    const WordSet* skip = nullptr;
};

struct PhraseEntry {
    double score = 0.0;
    std::size_t count = 0;
    std::size_t pass = 1;
};

// Adjacent pairs scored as (count(ab) - delta) * N_tok / (count(a) * count(b)),
// where N_tok is the token count of the pass that found them.
struct PhraseTable {
    std::map<std::pair<std::string, std::string>, PhraseEntry> pairs;
    std::size_t delta = 0;
    double threshold = 0.0;
    std::size_t passes = 0;

    bool empty() const noexcept { return pairs.empty(); }
    const PhraseEntry* find(const std::string& a, const std::string& b) const;
};

// Later passes see the merged units of earlier passes as single tokens.
PhraseTable detect_phrases(const TokenDocs& docs, const PhraseParams& params);

// Greedy left-to-right merge into "a_b" units, one sweep per pass recorded in
// the table.
TokenList apply_phrases(std::span<const std::string> tokens, const PhraseTable& table);

struct Vocabulary {
    std::vector<std::string> terms;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::size_t> doc_freq;
    std::size_t num_docs = 0;

    std::size_t size() const noexcept { return terms.size(); }
    std::optional<std::size_t> find(const std::string& term) const;
};

struct VocabularyOptions {
    std::size_t min_doc_freq = 1;
    const WordSet* stopwords = nullptr;
};

// Terms sorted lexicographically; ids are positions in that order.
Vocabulary build_vocabulary(const TokenDocs& docs, const VocabularyOptions& options = {});

// Tokenizes (or takes pre-supplied tokens) and lemmatizes every document.
TokenDocs preprocess(const Corpus& corpus, const Lemmatizer& lemmatizer);

}  // namespace idearel
