#include "idearel/topic_model.hpp"

#include "idearel/error.hpp"
#include "idearel/log.hpp"
#include "idearel/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace idearel {
namespace {

void check_model_index(const LdaModel& model, std::size_t doc) {
    if (doc >= model.num_docs()) {
        throw Error("document index " + std::to_string(doc) + " is not in the model");
    }
}

}  // namespace

LdaInput make_lda_input(const Corpus& corpus, const TokenDocs& tokens, const Vocabulary& vocab) {
    if (tokens.size() != corpus.size()) throw Error("token streams do not match the corpus");
    LdaInput input;
    input.vocabulary = vocab.terms;
    input.doc_ids.reserve(corpus.size());
    input.docs.reserve(corpus.size());
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        input.doc_ids.push_back(corpus.documents[d].id);
        std::vector<std::uint32_t> ids;
        for (const auto& tok : tokens[d]) {
            if (auto v = vocab.find(tok)) ids.push_back(static_cast<std::uint32_t>(*v));
        }
        input.docs.push_back(std::move(ids));
    }
    return input;
}

std::optional<std::size_t> LdaModel::doc_index(const std::string& id) const {
    auto it = std::lower_bound(doc_ids.begin(), doc_ids.end(), id);
    if (it != doc_ids.end() && *it == id) return static_cast<std::size_t>(it - doc_ids.begin());
    // Ids are not required to be sorted for hand-built models.
    it = std::find(doc_ids.begin(), doc_ids.end(), id);
    if (it != doc_ids.end()) return static_cast<std::size_t>(it - doc_ids.begin());
    return std::nullopt;
}

bool LdaModel::counts_consistent() const {
    const std::size_t K = num_topics;
    const std::size_t V = vocabulary.size();
    if (doc_topic.size() != docs.size() * K || topic_word.size() != K * V || topic_totals.size() != K) return false;
    if (assignments.size() != docs.size()) return false;

    std::vector<std::uint64_t> from_docs(K, 0), from_words(K, 0), from_z(K, 0);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (assignments[d].size() != docs[d].size()) return false;
        std::uint64_t row = 0;
        for (std::size_t k = 0; k < K; ++k) {
            row += doc_topic_count(d, k);
            from_docs[k] += doc_topic_count(d, k);
        }
        if (row != docs[d].size()) return false;
        for (auto z : assignments[d]) ++from_z[z];
    }
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t v = 0; v < V; ++v) from_words[k] += topic_word_count(k, v);
        if (from_docs[k] != from_words[k] || from_words[k] != topic_totals[k] || from_z[k] != topic_totals[k]) {
            return false;
        }
    }
    return true;
}

double LdaModel::log_likelihood() const {
    const double K = static_cast<double>(num_topics);
    const double V = static_cast<double>(vocabulary.size());
    double ll = K * (std::lgamma(V * beta) - V * std::lgamma(beta));
    for (std::size_t k = 0; k < num_topics; ++k) {
        for (std::size_t v = 0; v < vocabulary.size(); ++v) ll += std::lgamma(topic_word_count(k, v) + beta);
        ll -= std::lgamma(topic_totals[k] + V * beta);
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
        if (docs[d].empty()) continue;
        ll += std::lgamma(K * alpha) - K * std::lgamma(alpha);
        for (std::size_t k = 0; k < num_topics; ++k) ll += std::lgamma(doc_topic_count(d, k) + alpha);
        ll -= std::lgamma(static_cast<double>(docs[d].size()) + K * alpha);
    }
    return ll;
}

LdaModel train_lda(LdaInput input, const LdaParams& params, const SweepObserver& observer) {
    if (params.num_topics < 2) throw std::invalid_argument("train_lda: need at least 2 topics");
    if (params.iterations < 1) throw std::invalid_argument("train_lda: need at least 1 iteration");
    if (params.beta <= 0.0) throw std::invalid_argument("train_lda: beta must be positive");
    if (input.docs.empty()) throw Error("train_lda: corpus is empty");
    if (input.vocabulary.empty()) throw Error("train_lda: vocabulary is empty");
    if (input.doc_ids.size() != input.docs.size()) throw Error("train_lda: doc ids do not match documents");

    LdaModel m;
    m.num_topics = params.num_topics;
    m.alpha = params.alpha.value_or(50.0 / static_cast<double>(params.num_topics));
    if (m.alpha <= 0.0) throw std::invalid_argument("train_lda: alpha must be positive");
    m.beta = params.beta;
    m.seed = params.seed;
    m.iterations = params.iterations;
    m.vocabulary = std::move(input.vocabulary);
    m.doc_ids = std::move(input.doc_ids);
    m.docs = std::move(input.docs);

    const std::size_t K = m.num_topics;
    const std::size_t V = m.vocabulary.size();
    m.doc_topic.assign(m.docs.size() * K, 0);
    m.topic_word.assign(K * V, 0);
    m.topic_totals.assign(K, 0);
    m.assignments.resize(m.docs.size());

    std::size_t empty_docs = 0;
    for (const auto& doc : m.docs) {
        for (auto v : doc) {
            if (v >= V) throw Error("train_lda: word id out of range");
        }
        if (doc.empty()) ++empty_docs;
    }
    if (empty_docs == m.docs.size()) throw Error("train_lda: every document is empty");
    if (empty_docs > 0) {
        log::warn("train_lda: skipping " + std::to_string(empty_docs) + " document(s) with no vocabulary tokens");
    }

    auto rng = make_stream(params.seed);
    for (std::size_t d = 0; d < m.docs.size(); ++d) {
        auto& z = m.assignments[d];
        z.resize(m.docs[d].size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            const auto k = static_cast<std::uint32_t>(rng() % K);
            z[i] = k;
            ++m.doc_topic[d * K + k];
            ++m.topic_word[k * V + m.docs[d][i]];
            ++m.topic_totals[k];
        }
    }
    m.likelihood_trace.emplace_back(0, m.log_likelihood());

    const double v_beta = static_cast<double>(V) * m.beta;
    std::vector<double> cumulative(K);
    for (std::size_t sweep = 1; sweep <= params.iterations; ++sweep) {
        for (std::size_t d = 0; d < m.docs.size(); ++d) {
            auto* dt = &m.doc_topic[d * K];
            const auto& words = m.docs[d];
            auto& z = m.assignments[d];
            for (std::size_t i = 0; i < words.size(); ++i) {
                const std::uint32_t w = words[i];
                const std::uint32_t old = z[i];
                --dt[old];
                --m.topic_word[old * V + w];
                --m.topic_totals[old];

                double total = 0.0;
                for (std::size_t k = 0; k < K; ++k) {
                    total += (dt[k] + m.alpha) * (m.topic_word[k * V + w] + m.beta) / (m.topic_totals[k] + v_beta);
                    cumulative[k] = total;
                }
                const double u = uniform01(rng) * total;
                auto chosen = static_cast<std::uint32_t>(
                    std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
                if (chosen >= K) chosen = static_cast<std::uint32_t>(K - 1);

                z[i] = chosen;
                ++dt[chosen];
                ++m.topic_word[chosen * V + w];
                ++m.topic_totals[chosen];
            }
        }
        if (params.likelihood_every > 0 && (sweep % params.likelihood_every == 0 || sweep == params.iterations)) {
            m.likelihood_trace.emplace_back(sweep, m.log_likelihood());
        }
        if (observer) observer(m, sweep);
    }
    return m;
}

std::vector<double> doc_topic_distribution(const LdaModel& model, std::size_t doc) {
    check_model_index(model, doc);
    const std::size_t K = model.num_topics;
    const double len = static_cast<double>(model.docs[doc].size());
    const double denom = len + static_cast<double>(K) * model.alpha;
    std::vector<double> theta(K);
    if (denom <= 0.0) {
        std::fill(theta.begin(), theta.end(), 1.0 / static_cast<double>(K));
        return theta;
    }
    for (std::size_t k = 0; k < K; ++k) theta[k] = (model.doc_topic_count(doc, k) + model.alpha) / denom;
    return theta;
}

std::vector<double> doc_topic_distribution(const LdaModel& model, const std::string& doc_id) {
    auto d = model.doc_index(doc_id);
    if (!d) throw Error("document '" + doc_id + "' is not in the model");
    return doc_topic_distribution(model, *d);
}

std::vector<IdeaId> doc_topic_ideas(const LdaModel& model, std::size_t doc, const TopicIdeaConfig& config) {
    if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
        throw std::invalid_argument("doc_topic_ideas: threshold must lie in (0, 1)");
    }
    const auto theta = doc_topic_distribution(model, doc);
    std::vector<IdeaId> ideas;
    for (std::size_t k = 0; k < theta.size(); ++k) {
        if (theta[k] > config.threshold) ideas.push_back(idea_at(k));
    }
    return ideas;
}

std::vector<std::string> topic_label(const LdaModel& model, std::size_t topic, std::size_t n) {
    if (topic >= model.num_topics) throw std::invalid_argument("topic_label: topic out of range");
    // The topic-word probability is monotone in the count within a topic.
    std::vector<std::size_t> order(model.vocab_size());
    std::iota(order.begin(), order.end(), 0);
    auto better = [&](std::size_t a, std::size_t b) {
        const auto ca = model.topic_word_count(topic, a);
        const auto cb = model.topic_word_count(topic, b);
        if (ca != cb) return ca > cb;
        return model.vocabulary[a] < model.vocabulary[b];
    };
    n = std::min(n, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), better);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) words.push_back(model.vocabulary[order[i]]);
    return words;
}

nlohmann::json to_json(const LdaModel& model) {
    nlohmann::json j;
    j["schema"] = "v1";
    j["kind"] = "lda_model";
    j["num_topics"] = model.num_topics;
    j["alpha"] = model.alpha;
    j["beta"] = model.beta;
    j["seed"] = model.seed;
    j["iterations"] = model.iterations;
    j["vocabulary"] = model.vocabulary;
    j["doc_ids"] = model.doc_ids;
    j["docs"] = model.docs;
    j["assignments"] = model.assignments;
    j["doc_topic_counts"] = model.doc_topic;
    j["topic_word_counts"] = model.topic_word;
    auto trace = nlohmann::json::array();
    for (const auto& [sweep, ll] : model.likelihood_trace) trace.push_back({{"sweep", sweep}, {"log_likelihood", ll}});
    j["likelihood_trace"] = trace;
    return j;
}

LdaModel lda_model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema") != "v1" || j.at("kind") != "lda_model") throw Error("not a v1 lda_model document");
        LdaModel m;
        m.num_topics = j.at("num_topics").get<std::size_t>();
        m.alpha = j.at("alpha").get<double>();
        m.beta = j.at("beta").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.iterations = j.at("iterations").get<std::size_t>();
        m.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
        m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
        m.docs = j.at("docs").get<std::vector<std::vector<std::uint32_t>>>();
        m.assignments = j.at("assignments").get<std::vector<std::vector<std::uint32_t>>>();
        for (const auto& entry : j.at("likelihood_trace")) {
            m.likelihood_trace.emplace_back(entry.at("sweep").get<std::size_t>(), entry.at("log_likelihood").get<double>());
        }
        if (m.num_topics < 1 || m.docs.size() != m.doc_ids.size() || m.assignments.size() != m.docs.size()) {
            throw Error("inconsistent lda_model shape");
        }

        // Count tables are derived from the assignments.
        const std::size_t K = m.num_topics;
        const std::size_t V = m.vocabulary.size();
        m.doc_topic.assign(m.docs.size() * K, 0);
        m.topic_word.assign(K * V, 0);
        m.topic_totals.assign(K, 0);
        for (std::size_t d = 0; d < m.docs.size(); ++d) {
            if (m.assignments[d].size() != m.docs[d].size()) throw Error("assignment length mismatch");
            for (std::size_t i = 0; i < m.docs[d].size(); ++i) {
                const auto z = m.assignments[d][i];
                const auto w = m.docs[d][i];
                if (z >= K || w >= V) throw Error("topic or word id out of range");
                ++m.doc_topic[d * K + z];
                ++m.topic_word[z * V + w];
                ++m.topic_totals[z];
            }
        }
        if (j.contains("doc_topic_counts") &&
            (j.at("doc_topic_counts").get<std::vector<std::uint32_t>>() != m.doc_topic ||
             j.at("topic_word_counts").get<std::vector<std::uint32_t>>() != m.topic_word)) {
            throw Error("count tables disagree with assignments");
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed lda_model: ") + e.what());
    }
}

void save_lda_model(const LdaModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_json(model).dump() << '\n';
}

LdaModel load_lda_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return lda_model_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error&) {
        throw Error("malformed JSON in " + path.string());
    }
}

}  // namespace idearel
