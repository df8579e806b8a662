#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace idearel {

// Calendar date with optional month/day (0 = not given). Missing parts
// compare as the start of the enclosing period.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    std::strong_ordering operator<=>(const Date& other) const noexcept;
    bool operator==(const Date& other) const noexcept { return (*this <=> other) == 0; }

    std::string to_string() const;
};

// Accepts "YYYY", "YYYY-MM" and "YYYY-MM-DD". Throws Error otherwise.
Date parse_date(std::string_view text);

struct Document {
    std::string id;
    Date date;
    std::string text;
    std::vector<std::string> tokens;
    bool pretokenized = false;
};

enum class CorpusFormat { jsonl, directory };

enum class Granularity { year, month, custom };

struct TimeBinning {
    Granularity granularity = Granularity::year;
    // Declared corpus range. Defaults to the span of the data.
    std::optional<Date> first;
    std::optional<Date> last;
    // Custom bins are [edges[i], edges[i+1]); the final bin also includes
    // its upper edge.
    std::vector<Date> edges;
};

// Documents sorted by id. Timestep indices are 0-based internally and
// contiguous; empty timesteps keep their slot.
struct Corpus {
    std::vector<Document> documents;
    std::vector<std::size_t> timestep_of;
    std::vector<std::string> timestep_labels;
    std::vector<std::size_t> docs_per_timestep;

    std::size_t size() const noexcept { return documents.size(); }
    std::size_t num_timesteps() const noexcept { return timestep_labels.size(); }
    bool is_binned() const noexcept { return !timestep_labels.empty(); }
    std::vector<std::size_t> empty_timesteps() const;
};

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

// JSON Lines records: {"id", "date", "text"} or {"id", "date", "tokens"}.
// `source` names the stream in error messages.
Corpus read_jsonl(std::istream& in, std::string_view source);

Corpus bin_by_time(Corpus corpus, const TimeBinning& binning);

}  // namespace idearel
