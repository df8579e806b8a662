#pragma once

#include "idearel/corpus.hpp"
#include "idearel/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace idearel {

// Binary document x idea presence, stored one bitset column per idea, plus
// the timestep of every document.
class DocumentIdeaMatrix {
public:
    DocumentIdeaMatrix() = default;
    DocumentIdeaMatrix(std::vector<std::size_t> timestep, std::vector<std::string> timestep_labels,
                       std::vector<std::string> idea_labels);

    std::size_t num_docs() const noexcept { return timestep_.size(); }
    std::size_t num_ideas() const noexcept { return labels_.size(); }
    std::size_t num_timesteps() const noexcept { return timestep_labels_.size(); }

    bool present(std::size_t doc, IdeaId idea) const;
    void set_present(std::size_t doc, IdeaId idea);

    std::size_t timestep(std::size_t doc) const { return timestep_[doc]; }
    const std::vector<std::size_t>& timesteps() const noexcept { return timestep_; }
    const std::vector<std::string>& timestep_labels() const noexcept { return timestep_labels_; }
    std::vector<std::size_t> docs_per_timestep() const;

    const std::string& label(IdeaId idea) const { return labels_.at(to_index(idea)); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::optional<IdeaId> find(std::string_view label) const;

    // Documents containing the idea.
    std::size_t doc_freq(IdeaId idea) const;
    // Documents containing both ideas.
    std::size_t cooccurrence(IdeaId x, IdeaId y) const;
    // Per-timestep document counts containing the idea.
    std::vector<std::size_t> counts_by_timestep(IdeaId idea) const;
    std::size_t ideas_in_doc(std::size_t doc) const;

    const std::vector<std::uint64_t>& column(IdeaId idea) const { return columns_.at(to_index(idea)); }

private:
    std::vector<std::size_t> timestep_;
    std::vector<std::string> timestep_labels_;
    std::vector<std::string> labels_;
    std::vector<std::vector<std::uint64_t>> columns_;
};

using IdeaExtractor = std::function<std::vector<IdeaId>(std::size_t doc_index, const Document& doc)>;

// presence[d, i] = 1 iff i is in extractor(d). The corpus must be binned.
DocumentIdeaMatrix build_matrix(const Corpus& corpus, const IdeaExtractor& extractor,
                                std::vector<std::string> idea_labels);

// Drops excluded ideas and ideas found in fewer than min_doc_freq documents.
// Rows, timesteps and surviving presence bits are untouched; surviving
// ideas are renumbered in their original order.
DocumentIdeaMatrix filter_ideas(const DocumentIdeaMatrix& matrix, std::size_t min_doc_freq,
                                std::span<const IdeaId> exclude);

nlohmann::json to_json(const DocumentIdeaMatrix& matrix);
DocumentIdeaMatrix matrix_from_json(const nlohmann::json& j);
void save_matrix(const DocumentIdeaMatrix& matrix, const std::filesystem::path& path);
DocumentIdeaMatrix load_matrix(const std::filesystem::path& path);

}  // namespace idearel
