#pragma once

#include "idearel/corpus.hpp"
#include "idearel/keywords.hpp"
#include "idearel/matrix.hpp"
#include "idearel/relations.hpp"
#include "idearel/text.hpp"
#include "idearel/topic_model.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace idearel {

enum class IdeaMode { topics, keywords };

struct RunConfig {
    std::filesystem::path corpus_path;
    CorpusFormat format = CorpusFormat::jsonl;
    IdeaMode idea_mode = IdeaMode::topics;
    std::optional<std::filesystem::path> background_path;

    // time axis
    Granularity granularity = Granularity::year;
    std::optional<Date> range_first;
    std::optional<Date> range_last;
    std::vector<Date> edges;

    // preprocessing
    bool detect_phrases = true;
    PhraseParams phrases;
    std::size_t vocab_min_doc_freq = 5;

    // topics
    std::size_t num_topics = 50;
    std::optional<double> alpha;
    double beta = 0.01;
    std::size_t iterations = 1000;
    double threshold = 0.01;
    std::size_t label_words = 2;

    // keywords
    std::size_t n_keywords = 100;
    double prior_scale = 500.0;

    // idea filtering, by label or numeric id
    std::size_t min_doc_freq = 0;
    std::vector<std::string> exclude_ideas;

    // reporting
    std::size_t top_m = 25;
    std::size_t top_k = 10;
    std::optional<std::string> focus;
    std::size_t graph_k = 3;
    std::size_t kde_grid = 64;
    std::size_t hist_bins = 30;
    std::size_t dip_boot = 2000;

    std::uint64_t seed = 1;
    std::filesystem::path output_dir;

    // Throws Error naming the offending field.
    void validate() const;
};

// Everything but paths, for provenance in diagnostics.json.
nlohmann::json config_summary(const RunConfig& config);

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

Corpus ingest(const RunConfig& config, const std::filesystem::path& path);

struct IdeaExtraction {
    DocumentIdeaMatrix matrix;
    std::optional<LdaModel> model;
    std::vector<KeywordScore> keyword_scores;
    std::vector<std::string> warnings;
};

// Text pipeline plus topic or keyword idea extraction on a binned corpus,
// followed by idea filtering.
IdeaExtraction extract_ideas(const RunConfig& config, const Corpus& corpus);

// Labels for LDA topics: the top words joined by spaces, made unique.
std::vector<std::string> topic_labels(const LdaModel& model, std::size_t words);

// Resolves labels or numeric ids against the matrix.
std::vector<IdeaId> resolve_ideas(const DocumentIdeaMatrix& matrix, std::span<const std::string> names);

// ---------------------------------------------------------------------------
// Emitters
// ---------------------------------------------------------------------------

struct RankedRelation {
    RelationRecord record;
    std::size_t rank = 0;
};

// Top-k of every type with their ranks, friendship first.
std::vector<RankedRelation> top_ranked(std::span<const RelationRecord> records, std::size_t k);

// Columns: x_label,y_label,pmi,r,strength,type,rank_in_type. Undefined r and
// the rank of degenerate pairs are empty fields.
void write_relations_csv(std::ostream& out, const DocumentIdeaMatrix& matrix, std::span<const RelationRecord> records);

struct RelationRow {
    std::string x_label;
    std::string y_label;
    double pmi = 0.0;
    std::optional<double> r;
    double strength = 0.0;
    RelationType type = RelationType::degenerate;
    std::size_t rank = 0;
};

std::vector<RelationRow> read_relations_csv(std::istream& in);

// Dip and K2 tests for a marginal; fields are null when the sample is too
// small or constant for a test.
nlohmann::json marginal_tests(std::span<const double> values, std::size_t n_boot, std::uint64_t seed);

// log10 p as a JSON number, or the string "< -300" for -infinity.
nlohmann::json log10_p_json(double log10_p);

struct JointPlotOptions {
    std::size_t grid_size = 64;
    std::size_t bins = 30;
    std::size_t n_boot = 2000;
    std::uint64_t seed = 1;
};

nlohmann::json emit_joint_plot(std::span<const RelationRecord> records, const JointPlotOptions& options);
nlohmann::json emit_trend(const DocumentIdeaMatrix& matrix, std::span<const RankedRelation> pairs);
nlohmann::json emit_strength_bars(std::span<const RelationRecord> records, std::size_t m);
nlohmann::json emit_relation_graph(const DocumentIdeaMatrix& matrix, std::span<const RelationRecord> records,
                                   IdeaId focus, std::size_t k_per_type);
nlohmann::json emit_diagnostics(const DocumentIdeaMatrix& matrix, std::span<const RelationRecord> records);

// The idea with the single strongest non-degenerate relation (ties by id).
std::optional<IdeaId> default_focus(std::span<const RelationRecord> records);

// ---------------------------------------------------------------------------
// Bundles
// ---------------------------------------------------------------------------

inline constexpr const char* kBundleFiles[] = {"relations.csv", "joint_plot.json", "trend.json",
                                               "strength_bars.json", "graph.json", "diagnostics.json"};

struct ReportBundle {
    std::filesystem::path output_dir;
    std::vector<std::filesystem::path> files;
};

// Analyses a matrix and writes the six bundle files. Files are staged and
// moved into place only when all of them were written.
ReportBundle write_report(const DocumentIdeaMatrix& matrix, const RunConfig& config,
                          const nlohmann::json& extra_diagnostics = nlohmann::json::object());

// ingest -> text pipeline -> ideas -> relations -> statistics -> emit.
// Errors are rethrown as StageError.
ReportBundle run_pipeline(const RunConfig& config);

}  // namespace idearel
