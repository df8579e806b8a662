#pragma once

#include "idearel/text.hpp"
#include "idearel/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace idearel {

struct LdaParams {
    std::size_t num_topics = 50;
    std::optional<double> alpha;  // 50 / num_topics when unset
    double beta = 0.01;
    std::size_t iterations = 1000;
    std::uint64_t seed = 1;
    std::size_t likelihood_every = 50;
};

// Training documents as vocabulary ids.
struct LdaInput {
    std::vector<std::string> vocabulary;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<std::uint32_t>> docs;
};

// Out-of-vocabulary tokens are dropped.
LdaInput make_lda_input(const Corpus& corpus, const TokenDocs& tokens, const Vocabulary& vocab);

// State of a collapsed Gibbs chain. Count tables are row-major:
// doc_topic is docs x topics, topic_word is topics x vocabulary.
struct LdaModel {
    std::size_t num_topics = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;
    std::size_t iterations = 0;

    std::vector<std::string> vocabulary;
    std::vector<std::string> doc_ids;
    std::vector<std::vector<std::uint32_t>> docs;
    std::vector<std::vector<std::uint32_t>> assignments;

    std::vector<std::uint32_t> doc_topic;
    std::vector<std::uint32_t> topic_word;
    std::vector<std::uint32_t> topic_totals;

    // (sweep, log p(w, z)) sampled every `likelihood_every` sweeps plus the
    // initial and final states.
    std::vector<std::pair<std::size_t, double>> likelihood_trace;

    std::size_t num_docs() const noexcept { return docs.size(); }
    std::size_t vocab_size() const noexcept { return vocabulary.size(); }

    std::uint32_t doc_topic_count(std::size_t d, std::size_t k) const { return doc_topic[d * num_topics + k]; }
    std::uint32_t topic_word_count(std::size_t k, std::size_t v) const { return topic_word[k * vocabulary.size() + v]; }

    std::optional<std::size_t> doc_index(const std::string& id) const;

    // Row sums match document lengths, and per-topic totals agree between
    // the two tables and the assignment vector.
    bool counts_consistent() const;

    double log_likelihood() const;
};

using SweepObserver = std::function<void(const LdaModel&, std::size_t sweep)>;

LdaModel train_lda(LdaInput input, const LdaParams& params, const SweepObserver& observer = {});

std::vector<double> doc_topic_distribution(const LdaModel& model, std::size_t doc);
std::vector<double> doc_topic_distribution(const LdaModel& model, const std::string& doc_id);

struct TopicIdeaConfig {
    double threshold = 0.01;
    std::size_t label_words = 2;
};

// Topics with probability strictly above the threshold.
std::vector<IdeaId> doc_topic_ideas(const LdaModel& model, std::size_t doc, const TopicIdeaConfig& config);

// Top-n words by topic-word probability; ties go to the lexicographically
// smaller word.
std::vector<std::string> topic_label(const LdaModel& model, std::size_t topic, std::size_t n);

nlohmann::json to_json(const LdaModel& model);
LdaModel lda_model_from_json(const nlohmann::json& j);
void save_lda_model(const LdaModel& model, const std::filesystem::path& path);
LdaModel load_lda_model(const std::filesystem::path& path);

}  // namespace idearel
