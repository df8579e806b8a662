#include "idearel/matrix.hpp"

#include "idearel/error.hpp"

#include <algorithm>
#include <bit>
#include <fstream>

namespace idearel {
namespace {

constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

}  // namespace

DocumentIdeaMatrix::DocumentIdeaMatrix(std::vector<std::size_t> timestep, std::vector<std::string> timestep_labels,
                                       std::vector<std::string> idea_labels)
    : timestep_(std::move(timestep)),
      timestep_labels_(std::move(timestep_labels)),
      labels_(std::move(idea_labels)),
      columns_(labels_.size(), std::vector<std::uint64_t>(words_for(timestep_.size()), 0)) {
    for (auto t : timestep_) {
        if (t >= timestep_labels_.size()) throw Error("document timestep outside the time axis");
    }
}

bool DocumentIdeaMatrix::present(std::size_t doc, IdeaId idea) const {
    return (column(idea)[doc / 64] >> (doc % 64)) & 1U;
}

void DocumentIdeaMatrix::set_present(std::size_t doc, IdeaId idea) {
    if (doc >= num_docs()) throw std::out_of_range("document index out of range");
    columns_.at(to_index(idea))[doc / 64] |= std::uint64_t{1} << (doc % 64);
}

std::vector<std::size_t> DocumentIdeaMatrix::docs_per_timestep() const {
    std::vector<std::size_t> counts(num_timesteps(), 0);
    for (auto t : timestep_) ++counts[t];
    return counts;
}

std::optional<IdeaId> DocumentIdeaMatrix::find(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return idea_at(static_cast<std::size_t>(it - labels_.begin()));
}

std::size_t DocumentIdeaMatrix::doc_freq(IdeaId idea) const {
    std::size_t n = 0;
    for (auto word : column(idea)) n += static_cast<std::size_t>(std::popcount(word));
    return n;
}

std::size_t DocumentIdeaMatrix::cooccurrence(IdeaId x, IdeaId y) const {
    const auto& a = column(x);
    const auto& b = column(y);
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
    return n;
}

std::vector<std::size_t> DocumentIdeaMatrix::counts_by_timestep(IdeaId idea) const {
    std::vector<std::size_t> counts(num_timesteps(), 0);
    const auto& col = column(idea);
    for (std::size_t w = 0; w < col.size(); ++w) {
        for (auto bits = col[w]; bits != 0; bits &= bits - 1) {
            const std::size_t doc = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
            ++counts[timestep_[doc]];
        }
    }
    return counts;
}

std::size_t DocumentIdeaMatrix::ideas_in_doc(std::size_t doc) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < num_ideas(); ++i) n += present(doc, idea_at(i)) ? 1 : 0;
    return n;
}

DocumentIdeaMatrix build_matrix(const Corpus& corpus, const IdeaExtractor& extractor,
                                std::vector<std::string> idea_labels) {
    if (!corpus.is_binned()) throw Error("build_matrix: corpus has not been binned by time");
    DocumentIdeaMatrix matrix(corpus.timestep_of, corpus.timestep_labels, std::move(idea_labels));
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        for (IdeaId idea : extractor(d, corpus.documents[d])) {
            if (to_index(idea) >= matrix.num_ideas()) {
                throw Error("build_matrix: document '" + corpus.documents[d].id + "' maps to unknown idea " +
                            std::to_string(to_index(idea)));
            }
            matrix.set_present(d, idea);
        }
    }
    return matrix;
}

DocumentIdeaMatrix filter_ideas(const DocumentIdeaMatrix& matrix, std::size_t min_doc_freq,
                                std::span<const IdeaId> exclude) {
    std::vector<bool> dropped(matrix.num_ideas(), false);
    for (IdeaId id : exclude) {
        if (to_index(id) >= matrix.num_ideas()) {
            throw Error("filter_ideas: unknown idea " + std::to_string(to_index(id)));
        }
        dropped[to_index(id)] = true;
    }
    std::vector<IdeaId> kept;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < matrix.num_ideas(); ++i) {
        if (dropped[i] || matrix.doc_freq(idea_at(i)) < min_doc_freq) continue;
        kept.push_back(idea_at(i));
        labels.push_back(matrix.label(idea_at(i)));
    }
    DocumentIdeaMatrix out(matrix.timesteps(), matrix.timestep_labels(), std::move(labels));
    for (std::size_t j = 0; j < kept.size(); ++j) {
        for (std::size_t d = 0; d < matrix.num_docs(); ++d) {
            if (matrix.present(d, kept[j])) out.set_present(d, idea_at(j));
        }
    }
    return out;
}

nlohmann::json to_json(const DocumentIdeaMatrix& matrix) {
    nlohmann::json j;
    j["schema"] = "v1";
    j["kind"] = "document_idea_matrix";
    j["ideas"] = matrix.labels();
    j["timesteps"] = matrix.timestep_labels();
    auto docs = nlohmann::json::array();
    for (std::size_t d = 0; d < matrix.num_docs(); ++d) {
        auto ideas = nlohmann::json::array();
        for (std::size_t i = 0; i < matrix.num_ideas(); ++i) {
            if (matrix.present(d, idea_at(i))) ideas.push_back(i);
        }
        docs.push_back({{"t", matrix.timestep(d)}, {"ideas", std::move(ideas)}});
    }
    j["documents"] = std::move(docs);
    return j;
}

DocumentIdeaMatrix matrix_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema") != "v1" || j.at("kind") != "document_idea_matrix") {
            throw Error("not a v1 document_idea_matrix");
        }
        std::vector<std::size_t> timestep;
        for (const auto& doc : j.at("documents")) timestep.push_back(doc.at("t").get<std::size_t>());
        DocumentIdeaMatrix matrix(std::move(timestep), j.at("timesteps").get<std::vector<std::string>>(),
                                  j.at("ideas").get<std::vector<std::string>>());
        std::size_t d = 0;
        for (const auto& doc : j.at("documents")) {
            for (const auto& idea : doc.at("ideas")) {
                const auto i = idea.get<std::size_t>();
                if (i >= matrix.num_ideas()) throw Error("matrix document refers to unknown idea");
                matrix.set_present(d, idea_at(i));
            }
            ++d;
        }
        return matrix;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed document_idea_matrix: ") + e.what());
    }
}

void save_matrix(const DocumentIdeaMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_json(matrix).dump() << '\n';
}

DocumentIdeaMatrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return matrix_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error&) {
        throw Error("malformed JSON in " + path.string());
    }
}

}  // namespace idearel
