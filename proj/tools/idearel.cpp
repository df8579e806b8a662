// idearel command-line tool.

#include "idearel/error.hpp"
#include "idearel/format.hpp"
#include "idearel/log.hpp"
#include "idearel/report.hpp"
#include "idearel/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>

namespace {

namespace fs = std::filesystem;
using idearel::RunConfig;
using nlohmann::json;

// String-valued options that need parsing after CLI11 is done.
struct RawOptions {
    std::string range_first;
    std::string range_last;
    std::vector<std::string> edges;
    double alpha = 0.0;
    std::string focus;
};

void add_corpus_options(CLI::App& app, RunConfig& cfg, RawOptions& raw) {
    const std::map<std::string, idearel::CorpusFormat> formats{{"jsonl", idearel::CorpusFormat::jsonl},
                                                                {"directory", idearel::CorpusFormat::directory}};
    const std::map<std::string, idearel::Granularity> grains{{"year", idearel::Granularity::year},
                                                             {"month", idearel::Granularity::month},
                                                             {"custom", idearel::Granularity::custom}};
    app.add_option("--corpus", cfg.corpus_path, "Corpus file (jsonl) or root directory")->required();
    app.add_option("--format", cfg.format, "Corpus format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--granularity", cfg.granularity, "Time bins")
        ->transform(CLI::CheckedTransformer(grains, CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--from", raw.range_first, "First date of the corpus range (YYYY[-MM[-DD]])");
    app.add_option("--to", raw.range_last, "Last date of the corpus range");
    app.add_option("--edges", raw.edges, "Bin edges for custom granularity")->delimiter(',');
}

void add_text_options(CLI::App& app, RunConfig& cfg) {
    app.add_flag("!--no-phrases", cfg.detect_phrases, "Skip bigram phrase detection");
    app.add_option("--phrase-delta", cfg.phrases.delta, "Phrase discount")->capture_default_str();
    app.add_option("--phrase-threshold", cfg.phrases.threshold, "Phrase score threshold")->capture_default_str();
    app.add_option("--phrase-passes", cfg.phrases.passes, "Phrase passes")->capture_default_str();
    app.add_option("--vocab-min-df", cfg.vocab_min_doc_freq, "Minimum document frequency of LDA terms")
        ->capture_default_str();
}

void add_topic_options(CLI::App& app, RunConfig& cfg, RawOptions& raw) {
    app.add_option("-K,--topics", cfg.num_topics, "Number of topics")->capture_default_str();
    app.add_option("--alpha", raw.alpha, "Document-topic prior (default 50/K)");
    app.add_option("--beta", cfg.beta, "Topic-word prior")->capture_default_str();
    app.add_option("--iterations", cfg.iterations, "Gibbs sweeps")->capture_default_str();
    app.add_option("--threshold", cfg.threshold, "Topic share needed for a document to contain a topic")
        ->capture_default_str();
    app.add_option("--label-words", cfg.label_words, "Words per topic label")->capture_default_str();
}

void add_keyword_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--background", cfg.background_path, "Background corpus for keyword scoring");
    app.add_option("--keywords", cfg.n_keywords, "Number of keywords")->capture_default_str();
    app.add_option("--prior-scale", cfg.prior_scale, "Total prior pseudo-count")->capture_default_str();
}

void add_idea_options(CLI::App& app, RunConfig& cfg) {
    const std::map<std::string, idearel::IdeaMode> modes{{"topics", idearel::IdeaMode::topics},
                                                         {"keywords", idearel::IdeaMode::keywords}};
    app.add_option("--ideas", cfg.idea_mode, "Idea source")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
        ->capture_default_str();
    app.add_option("--min-doc-freq", cfg.min_doc_freq, "Drop ideas in fewer documents")->capture_default_str();
    app.add_option("--exclude", cfg.exclude_ideas, "Ideas to drop, by label or id")->delimiter(',');
}

void add_report_options(CLI::App& app, RunConfig& cfg, RawOptions& raw) {
    app.add_option("--top-m", cfg.top_m, "Pairs per type in the collective strength")->capture_default_str();
    app.add_option("--top-k", cfg.top_k, "Pairs per type in trend.json")->capture_default_str();
    app.add_option("--focus", raw.focus, "Focus idea of graph.json (label or id)");
    app.add_option("--graph-k", cfg.graph_k, "Partners per type in graph.json")->capture_default_str();
    app.add_option("--kde-grid", cfg.kde_grid, "KDE grid points per axis")->capture_default_str();
    app.add_option("--bins", cfg.hist_bins, "Marginal histogram bins")->capture_default_str();
    app.add_option("--n-boot", cfg.dip_boot, "Dip test bootstrap replicates")->capture_default_str();
    app.add_option("-o,--output-dir", cfg.output_dir, "Output directory (created if missing)")->required();
}

void finish(const CLI::App& app, RunConfig& cfg, const RawOptions& raw) {
    if (!raw.range_first.empty()) cfg.range_first = idearel::parse_date(raw.range_first);
    if (!raw.range_last.empty()) cfg.range_last = idearel::parse_date(raw.range_last);
    cfg.edges.clear();
    for (const auto& e : raw.edges) cfg.edges.push_back(idearel::parse_date(e));
    if (const auto* alpha = app.get_option_no_throw("--alpha"); alpha && alpha->count() > 0) cfg.alpha = raw.alpha;
    if (!raw.focus.empty()) cfg.focus = raw.focus;
}

// Lenient variant for commands that do not write a bundle.
void check(RunConfig cfg) {
    if (cfg.output_dir.empty()) cfg.output_dir = ".";
    cfg.validate();
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    file.open(path, std::ios::binary);
    if (!file) throw idearel::Error("cannot write " + path);
    return file;
}

json corpus_summary(const idearel::Corpus& corpus) {
    json j;
    j["schema"] = "v1";
    j["num_docs"] = corpus.size();
    j["timesteps"] = corpus.timestep_labels;
    j["docs_per_timestep"] = corpus.docs_per_timestep;
    json empty = json::array();
    for (auto t : corpus.empty_timesteps()) empty.push_back(corpus.timestep_labels[t]);
    j["empty_timesteps"] = empty;
    return j;
}

void print_top(const idearel::DocumentIdeaMatrix& matrix, std::span<const idearel::RelationRecord> records,
               std::size_t k) {
    for (const auto& p : idearel::top_ranked(records, k)) {
        std::cout << idearel::to_string(p.record.type) << " #" << p.rank << '\t' << matrix.label(p.record.x) << '\t'
                  << matrix.label(p.record.y) << "\tpmi=" << idearel::format_double(p.record.pmi)
                  << "\tr=" << idearel::format_double(*p.record.r)
                  << "\tstrength=" << idearel::format_double(p.record.strength) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relations between ideas in a timestamped corpus"};
    app.set_config("--config", "", "TOML config file; command-line flags take precedence");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    RunConfig cfg;
    RawOptions raw;

    auto* ingest = app.add_subcommand("ingest", "Validate and bin a corpus; prints a JSON summary");
    std::string ingest_out;
    add_corpus_options(*ingest, cfg, raw);
    ingest->add_option("--out", ingest_out, "Write the summary here instead of stdout");

    auto* topics = app.add_subcommand("topics", "Train an LDA model and export it");
    std::string model_out;
    std::size_t show_words = 10;
    add_corpus_options(*topics, cfg, raw);
    add_text_options(*topics, cfg);
    add_topic_options(*topics, cfg, raw);
    topics->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    topics->add_option("--out", model_out, "Model JSON path");
    topics->add_option("--show-words", show_words, "Words printed per topic")->capture_default_str();

    auto* keywords = app.add_subcommand("keywords", "Score keywords against a background corpus");
    std::string keywords_out;
    add_corpus_options(*keywords, cfg, raw);
    add_text_options(*keywords, cfg);
    add_keyword_options(*keywords, cfg);
    keywords->add_option("--out", keywords_out, "CSV path (default stdout)");

    auto* relations = app.add_subcommand("relations", "Score every idea pair");
    std::string matrix_in, relations_out, matrix_out;
    std::size_t top = 0;
    relations->add_option("--matrix", matrix_in, "Use a saved document-idea matrix instead of a corpus");
    add_corpus_options(*relations, cfg, raw);
    relations->get_option("--corpus")->required(false);
    add_text_options(*relations, cfg);
    add_topic_options(*relations, cfg, raw);
    add_keyword_options(*relations, cfg);
    add_idea_options(*relations, cfg);
    relations->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    relations->add_option("--out", relations_out, "relations.csv path");
    relations->add_option("--matrix-out", matrix_out, "Save the document-idea matrix");
    relations->add_option("--top", top, "Print the top pairs of each type");

    auto* stats = app.add_subcommand("stats", "Distribution tests on a relations CSV");
    std::string stats_in, stats_out;
    stats->add_option("--relations", stats_in, "relations.csv")->required()->check(CLI::ExistingFile);
    stats->add_option("--n-boot", cfg.dip_boot, "Dip test bootstrap replicates")->capture_default_str();
    stats->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    stats->add_option("--out", stats_out, "JSON path (default stdout)");

    auto* report = app.add_subcommand("report", "Write the report bundle from a saved matrix");
    std::string report_matrix;
    report->add_option("--matrix", report_matrix, "Document-idea matrix JSON")->required()->check(CLI::ExistingFile);
    add_report_options(*report, cfg, raw);
    report->add_option("--exclude", cfg.exclude_ideas, "Ideas to drop, by label or id")->delimiter(',');
    report->add_option("--min-doc-freq", cfg.min_doc_freq, "Drop ideas in fewer documents")->capture_default_str();
    report->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

    auto* run = app.add_subcommand("run", "Full pipeline from corpus to report bundle");
    add_corpus_options(*run, cfg, raw);
    add_text_options(*run, cfg);
    add_topic_options(*run, cfg, raw);
    add_keyword_options(*run, cfg);
    add_idea_options(*run, cfg);
    add_report_options(*run, cfg, raw);
    run->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            finish(*ingest, cfg, raw);
            check(cfg);
            std::ofstream file;
            open_output(ingest_out, file) << corpus_summary(idearel::ingest(cfg, cfg.corpus_path)).dump(1) << '\n';
        } else if (*topics) {
            finish(*topics, cfg, raw);
            check(cfg);
            const auto corpus = idearel::ingest(cfg, cfg.corpus_path);
            const auto ideas = idearel::extract_ideas(cfg, corpus);
            const auto& model = *ideas.model;
            for (std::size_t k = 0; k < model.num_topics; ++k) {
                std::cout << k;
                for (const auto& w : idearel::topic_label(model, k, show_words)) std::cout << ' ' << w;
                std::cout << '\n';
            }
            if (!model_out.empty()) idearel::save_lda_model(model, model_out);
        } else if (*keywords) {
            finish(*keywords, cfg, raw);
            cfg.idea_mode = idearel::IdeaMode::keywords;
            check(cfg);
            const auto corpus = idearel::ingest(cfg, cfg.corpus_path);
            const auto ideas = idearel::extract_ideas(cfg, corpus);
            std::ofstream file;
            idearel::write_keyword_csv(open_output(keywords_out, file), ideas.keyword_scores);
        } else if (*relations) {
            finish(*relations, cfg, raw);
            idearel::DocumentIdeaMatrix matrix;
            if (!matrix_in.empty()) {
                const auto loaded = idearel::load_matrix(matrix_in);
                matrix = idearel::filter_ideas(loaded, cfg.min_doc_freq,
                                               idearel::resolve_ideas(loaded, cfg.exclude_ideas));
            } else {
                if (cfg.corpus_path.empty()) throw idearel::Error("relations needs --corpus or --matrix");
                check(cfg);
                matrix = idearel::extract_ideas(cfg, idearel::ingest(cfg, cfg.corpus_path)).matrix;
            }
            if (!matrix_out.empty()) idearel::save_matrix(matrix, matrix_out);
            const auto records = idearel::all_pair_relations(matrix);
            if (!relations_out.empty()) {
                std::ofstream file;
                idearel::write_relations_csv(open_output(relations_out, file), matrix, records);
            }
            if (top > 0) {
                print_top(matrix, records, top);
            } else if (relations_out.empty()) {
                idearel::write_relations_csv(std::cout, matrix, records);
            }
        } else if (*stats) {
            std::ifstream in(stats_in, std::ios::binary);
            const auto rows = idearel::read_relations_csv(in);
            std::vector<double> pmis, rs;
            for (const auto& row : rows) {
                if (row.type == idearel::RelationType::degenerate || !row.r) continue;
                pmis.push_back(row.pmi);
                rs.push_back(*row.r);
            }
            json out;
            out["schema"] = "v1";
            out["n"] = pmis.size();
            out["pmi"] = idearel::marginal_tests(pmis, cfg.dip_boot, cfg.seed);
            out["r"] = idearel::marginal_tests(rs, cfg.dip_boot, cfg.seed + 1);
            json joint = nullptr;
            if (pmis.size() >= 3) {
                try {
                    const auto p = idearel::stats::pearson_log_p(pmis, rs);
                    joint = {{"r", p.r}, {"log10_p", idearel::log10_p_json(p.log10_p)}, {"n", p.n}};
                } catch (const idearel::Error& e) {
                    idearel::log::warn(std::string("joint test skipped: ") + e.what());
                }
            }
            out["pearson"] = joint;
            std::ofstream file;
            open_output(stats_out, file) << out.dump(1) << '\n';
        } else if (*report) {
            finish(*report, cfg, raw);
            const auto loaded = idearel::load_matrix(report_matrix);
            const auto matrix =
                idearel::filter_ideas(loaded, cfg.min_doc_freq, idearel::resolve_ideas(loaded, cfg.exclude_ideas));
            const auto bundle = idearel::write_report(matrix, cfg);
            for (const auto& f : bundle.files) std::cout << f.string() << '\n';
        } else if (*run) {
            finish(*run, cfg, raw);
            const auto bundle = idearel::run_pipeline(cfg);
            for (const auto& f : bundle.files) std::cout << f.string() << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
