#include "idearel/text.hpp"

#include "idearel/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace idearel {

// Defined in the generated resources.cpp (contents of data/*.txt).
extern const char* const kStopwordsText;
extern const char* const kLemmaExceptionsText;

namespace {

bool is_letter(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80; }

char lower(unsigned char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c); }

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string_view strip_comment(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    auto last = line.find_last_not_of(" \t\r");
    return line.substr(first, last - first + 1);
}

WordSet parse_word_list(std::istream& in) {
    WordSet words;
    std::string line;
    while (std::getline(in, line)) {
        auto entry = strip_comment(line);
        if (!entry.empty()) words.emplace(entry);
    }
    return words;
}

LemmaTable parse_lemma_table(std::istream& in, std::string_view source) {
    LemmaTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto entry = strip_comment(line);
        if (entry.empty()) continue;
        std::istringstream fields{std::string(entry)};
        std::string form, lemma, extra;
        if (!(fields >> form >> lemma) || (fields >> extra)) {
            throw Error(std::string(source) + ":" + std::to_string(line_no) + ": expected '<form> <lemma>'");
        }
        table[form] = lemma;
    }
    return table;
}

// Sweep of greedy merges for the pairs found in one pass.
TokenList merge_pass(std::span<const std::string> tokens, const PhraseTable& table, std::size_t pass) {
    TokenList out;
    out.reserve(tokens.size());
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (i + 1 < tokens.size()) {
            const auto* entry = table.find(tokens[i], tokens[i + 1]);
            if (entry && entry->pass == pass) {
                out.push_back(tokens[i] + "_" + tokens[i + 1]);
                i += 2;
                continue;
            }
        }
        out.push_back(tokens[i]);
        ++i;
    }
    return out;
}

}  // namespace

TokenList tokenize(std::string_view text) {
    TokenList tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (is_letter(c)) {
            current.push_back(lower(c));
        } else if ((c == '.' || c == '\'') && !current.empty() && i + 1 < text.size() &&
                   is_letter(static_cast<unsigned char>(text[i + 1]))) {
            current.push_back(static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

Lemmatizer::Lemmatizer() : exceptions_(default_lemma_exceptions()) {}

Lemmatizer::Lemmatizer(LemmaTable exceptions) : exceptions_(std::move(exceptions)) {}

std::optional<std::string> Lemmatizer::lookup(std::string_view word) const {
    if (auto it = exceptions_.find(word); it != exceptions_.end()) return it->second;
    return std::nullopt;
}

std::string Lemmatizer::lemma(std::string_view token) const {
    if (auto hit = lookup(token)) return *hit;
    std::string word(token);
    if (ends_with(word, "'s")) {
        word.resize(word.size() - 2);
        if (auto hit = lookup(word)) return *hit;
    }

    const std::size_t n = word.size();
    if (n > 4 && (ends_with(word, "ies") || ends_with(word, "ied"))) {
        word.replace(n - 3, 3, "y");
    } else if (ends_with(word, "sses")) {
        word.resize(n - 2);
    } else if (n > 4 && (ends_with(word, "shes") || ends_with(word, "ches") || ends_with(word, "xes") ||
                         ends_with(word, "zzes"))) {
        word.resize(n - 2);
    } else if (n > 3 && ends_with(word, "s") && !ends_with(word, "ss") && !ends_with(word, "us") &&
               !ends_with(word, "is")) {
        word.resize(n - 1);
    }

    if (auto hit = lookup(word)) return *hit;
    return word;
}

TokenList Lemmatizer::operator()(std::span<const std::string> tokens) const {
    TokenList out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(lemma(t));
    return out;
}

TokenList lemmatize(std::span<const std::string> tokens) {
    static const Lemmatizer lemmatizer;
    return lemmatizer(tokens);
}

const LemmaTable& default_lemma_exceptions() {
    static const LemmaTable table = [] {
        std::istringstream in(kLemmaExceptionsText);
        return parse_lemma_table(in, "builtin lemma table");
    }();
    return table;
}

const WordSet& default_stopwords() {
    static const WordSet words = [] {
        std::istringstream in(kStopwordsText);
        return parse_word_list(in);
    }();
    return words;
}

WordSet read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open word list " + path.string());
    return parse_word_list(in);
}

LemmaTable read_lemma_exceptions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lemma table " + path.string());
    return parse_lemma_table(in, path.string());
}

const PhraseEntry* PhraseTable::find(const std::string& a, const std::string& b) const {
    // Avoid building a key pair for the common miss.
    auto it = pairs.lower_bound({a, std::string{}});
    for (; it != pairs.end() && it->first.first == a; ++it) {
        if (it->first.second == b) return &it->second;
        if (it->first.second > b) break;
    }
    return nullptr;
}

PhraseTable detect_phrases(const TokenDocs& docs, const PhraseParams& params) {
    if (params.passes < 1) throw std::invalid_argument("detect_phrases: passes must be >= 1");

    PhraseTable table;
    table.delta = params.delta;
    table.threshold = params.threshold;
    table.passes = params.passes;

    TokenDocs current = docs;
    for (std::size_t pass = 1; pass <= params.passes; ++pass) {
        std::unordered_map<std::string, std::size_t> unigram;
        std::map<std::pair<std::string, std::string>, std::size_t> bigram;
        std::size_t total = 0;
        for (const auto& doc : current) {
            total += doc.size();
            for (std::size_t i = 0; i < doc.size(); ++i) {
                ++unigram[doc[i]];
                if (i + 1 < doc.size()) ++bigram[{doc[i], doc[i + 1]}];
            }
        }

        bool found = false;
        for (const auto& [pair, count] : bigram) {
            if (count <= params.delta) continue;
            if (params.skip && (params.skip->contains(pair.first) || params.skip->contains(pair.second))) continue;
            const double score = (static_cast<double>(count) - static_cast<double>(params.delta)) *
                                 static_cast<double>(total) /
                                 (static_cast<double>(unigram[pair.first]) * static_cast<double>(unigram[pair.second]));
            if (score >= params.threshold && !table.pairs.contains(pair)) {
                table.pairs.emplace(pair, PhraseEntry{score, count, pass});
                found = true;
            }
        }
        if (!found || pass == params.passes) break;
        for (auto& doc : current) doc = merge_pass(doc, table, pass);
    }
    return table;
}

TokenList apply_phrases(std::span<const std::string> tokens, const PhraseTable& table) {
    TokenList out(tokens.begin(), tokens.end());
    if (table.empty()) return out;
    std::size_t last_pass = 0;
    for (const auto& [pair, entry] : table.pairs) last_pass = std::max(last_pass, entry.pass);
    for (std::size_t pass = 1; pass <= last_pass; ++pass) out = merge_pass(out, table, pass);
    return out;
}

std::optional<std::size_t> Vocabulary::find(const std::string& term) const {
    if (auto it = index.find(term); it != index.end()) return it->second;
    return std::nullopt;
}

Vocabulary build_vocabulary(const TokenDocs& docs, const VocabularyOptions& options) {
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        TokenList unique(doc.begin(), doc.end());
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        for (auto& term : unique) {
            if (options.stopwords && options.stopwords->contains(term)) continue;
            ++df[std::move(term)];
        }
    }
    Vocabulary vocab;
    vocab.num_docs = docs.size();
    for (auto& [term, count] : df) {
        if (count < options.min_doc_freq) continue;
        vocab.index.emplace(term, vocab.terms.size());
        vocab.terms.push_back(term);
        vocab.doc_freq.push_back(count);
    }
    return vocab;
}

TokenDocs preprocess(const Corpus& corpus, const Lemmatizer& lemmatizer) {
    TokenDocs out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus.documents) {
        if (doc.pretokenized) {
            out.push_back(lemmatizer(doc.tokens));
        } else {
            out.push_back(lemmatizer(tokenize(doc.text)));
        }
    }
    return out;
}

}  // namespace idearel
