#include "idearel/report.hpp"

#include "idearel/error.hpp"
#include "idearel/format.hpp"
#include "idearel/log.hpp"
#include "idearel/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

namespace idearel {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Granularity g) {
    switch (g) {
    case Granularity::year: return "year";
    case Granularity::month: return "month";
    case Granularity::custom: return "custom";
    }
    return "year";
}

json optional_number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

json finite_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

std::vector<std::size_t> order_by_strength(std::span<const RelationRecord> records, RelationType type) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].type == type) idx.push_back(i);
    }
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& ra = records[a];
        const auto& rb = records[b];
        if (ra.strength != rb.strength) return ra.strength > rb.strength;
        if (ra.x != rb.x) return ra.x < rb.x;
        return ra.y < rb.y;
    });
    return idx;
}

double parse_number(const std::string& field, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error("relations csv line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    return v;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(1) << '\n';
    if (!out) throw Error("write failed for " + path.string());
}

// Collects warnings issued while a pipeline runs, still forwarding them.
class WarningCapture {
public:
    WarningCapture() {
        previous_ = log::set_warning_sink([this](std::string_view msg) {
            {
                std::lock_guard lock(mutex_);
                messages_.emplace_back(msg);
            }
            if (previous_) previous_(msg);
        });
    }
    ~WarningCapture() { log::set_warning_sink(previous_); }
    WarningCapture(const WarningCapture&) = delete;
    WarningCapture& operator=(const WarningCapture&) = delete;

    std::vector<std::string> messages() const {
        std::lock_guard lock(mutex_);
        return messages_;
    }

private:
    log::Sink previous_;
    mutable std::mutex mutex_;
    std::vector<std::string> messages_;
};

template <class F>
auto in_stage(const char* stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(stage, e.what());
    }
}

}  // namespace

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(msg); };
    if (corpus_path.empty()) fail("corpus path is required");
    if (idea_mode == IdeaMode::keywords && !background_path) fail("keywords mode needs a background corpus");
    if (granularity == Granularity::custom && edges.size() < 2) fail("custom granularity needs at least 2 edges");
    if (granularity != Granularity::custom && !edges.empty()) fail("edges are only valid with custom granularity");
    if (range_first && range_last && *range_last < *range_first) fail("range end precedes range start");
    if (phrases.passes < 1) fail("phrase passes must be >= 1");
    if (!(phrases.threshold > 0.0)) fail("phrase threshold must be > 0");
    if (num_topics < 2) fail("num_topics must be >= 2");
    if (alpha && !(*alpha > 0.0)) fail("alpha must be > 0");
    if (!(beta > 0.0)) fail("beta must be > 0");
    if (iterations < 1) fail("iterations must be >= 1");
    if (!(threshold >= 0.0 && threshold < 1.0)) fail("threshold must be in [0, 1)");
    if (label_words < 1) fail("label_words must be >= 1");
    if (n_keywords < 1) fail("n_keywords must be >= 1");
    if (!(prior_scale > 0.0)) fail("prior_scale must be > 0");
    if (top_m < 1) fail("top_m must be >= 1");
    if (top_k < 1) fail("top_k must be >= 1");
    if (kde_grid < 2) fail("kde_grid must be >= 2");
    if (hist_bins < 1) fail("hist_bins must be >= 1");
    if (dip_boot < 100) fail("dip_boot must be >= 100");
    if (output_dir.empty()) fail("output directory is required");
}

json config_summary(const RunConfig& c) {
    json j;
    j["idea_mode"] = c.idea_mode == IdeaMode::topics ? "topics" : "keywords";
    j["format"] = c.format == CorpusFormat::jsonl ? "jsonl" : "directory";
    j["granularity"] = to_string(c.granularity);
    j["range_first"] = c.range_first ? json(c.range_first->to_string()) : json(nullptr);
    j["range_last"] = c.range_last ? json(c.range_last->to_string()) : json(nullptr);
    json edges = json::array();
    for (const auto& e : c.edges) edges.push_back(e.to_string());
    j["edges"] = edges;
    j["phrases"] = {{"enabled", c.detect_phrases},
                    {"delta", c.phrases.delta},
                    {"threshold", c.phrases.threshold},
                    {"passes", c.phrases.passes}};
    j["vocab_min_doc_freq"] = c.vocab_min_doc_freq;
    j["num_topics"] = c.num_topics;
    j["alpha"] = c.alpha ? json(*c.alpha) : json(50.0 / static_cast<double>(c.num_topics));
    j["beta"] = c.beta;
    j["iterations"] = c.iterations;
    j["threshold"] = c.threshold;
    j["label_words"] = c.label_words;
    j["n_keywords"] = c.n_keywords;
    j["prior_scale"] = c.prior_scale;
    j["min_doc_freq"] = c.min_doc_freq;
    j["exclude_ideas"] = c.exclude_ideas;
    j["top_m"] = c.top_m;
    j["top_k"] = c.top_k;
    j["focus"] = c.focus ? json(*c.focus) : json(nullptr);
    j["graph_k"] = c.graph_k;
    j["kde_grid"] = c.kde_grid;
    j["hist_bins"] = c.hist_bins;
    j["dip_boot"] = c.dip_boot;
    j["seed"] = c.seed;
    return j;
}

Corpus ingest(const RunConfig& config, const fs::path& path) {
    TimeBinning binning;
    binning.granularity = config.granularity;
    binning.first = config.range_first;
    binning.last = config.range_last;
    binning.edges = config.edges;
    return bin_by_time(load_corpus(path, config.format), binning);
}

std::vector<std::string> topic_labels(const LdaModel& model, std::size_t words) {
    std::vector<std::string> labels;
    std::map<std::string, std::size_t> seen;
    for (std::size_t k = 0; k < model.num_topics; ++k) {
        std::string label;
        for (const auto& w : topic_label(model, k, words)) {
            if (!label.empty()) label += ' ';
            label += w;
        }
        if (label.empty()) label = "topic";
        if (seen[label]++ > 0) label += " (" + std::to_string(k) + ")";
        labels.push_back(std::move(label));
    }
    return labels;
}

std::vector<IdeaId> resolve_ideas(const DocumentIdeaMatrix& matrix, std::span<const std::string> names) {
    std::vector<IdeaId> ids;
    for (const auto& name : names) {
        if (auto id = matrix.find(name)) {
            ids.push_back(*id);
            continue;
        }
        std::size_t index = 0;
        auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), index);
        if (ec == std::errc{} && ptr == name.data() + name.size() && index < matrix.num_ideas()) {
            ids.push_back(idea_at(index));
            continue;
        }
        throw Error("unknown idea '" + name + "'");
    }
    return ids;
}

IdeaExtraction extract_ideas(const RunConfig& config, const Corpus& corpus) {
    IdeaExtraction out;
    const Lemmatizer lemmatizer;
    const WordSet& stopwords = default_stopwords();
    TokenDocs tokens = preprocess(corpus, lemmatizer);

    PhraseParams phrase_params = config.phrases;
    phrase_params.skip = &stopwords;

    DocumentIdeaMatrix raw;
    if (config.idea_mode == IdeaMode::topics) {
        if (config.detect_phrases) {
            const auto table = detect_phrases(tokens, phrase_params);
            for (auto& doc : tokens) doc = apply_phrases(doc, table);
        }
        VocabularyOptions vopts;
        vopts.min_doc_freq = config.vocab_min_doc_freq;
        vopts.stopwords = &stopwords;
        const Vocabulary vocab = build_vocabulary(tokens, vopts);
        LdaParams params;
        params.num_topics = config.num_topics;
        params.alpha = config.alpha;
        params.beta = config.beta;
        params.iterations = config.iterations;
        params.seed = config.seed;
        LdaInput input = make_lda_input(corpus, tokens, vocab);
        // theta never drops below alpha / (len + K alpha), so short documents
        // can contain every topic.
        const double a = config.alpha.value_or(50.0 / static_cast<double>(config.num_topics));
        const auto k = static_cast<double>(config.num_topics);
        const auto flooded = std::count_if(input.docs.begin(), input.docs.end(), [&](const auto& doc) {
            return a / (static_cast<double>(doc.size()) + k * a) > config.threshold;
        });
        if (2 * static_cast<std::size_t>(flooded) > input.docs.size()) {
            log::warn(std::to_string(flooded) + " of " + std::to_string(input.docs.size()) +
                      " documents are too short for the threshold: every topic counts as present; lower alpha");
        }
        LdaModel model = train_lda(std::move(input), params);
        const TopicIdeaConfig tcfg{config.threshold, config.label_words};
        raw = build_matrix(
            corpus, [&](std::size_t d, const Document&) { return doc_topic_ideas(model, d, tcfg); },
            topic_labels(model, config.label_words));
        out.model = std::move(model);
    } else {
        const Corpus background = ingest(config, *config.background_path);
        TokenDocs bg_tokens = preprocess(background, lemmatizer);
        if (config.detect_phrases) {
            TokenDocs pooled = tokens;
            pooled.insert(pooled.end(), bg_tokens.begin(), bg_tokens.end());
            const auto table = detect_phrases(pooled, phrase_params);
            for (auto& doc : tokens) doc = apply_phrases(doc, table);
            for (auto& doc : bg_tokens) doc = apply_phrases(doc, table);
        }
        out.keyword_scores =
            log_odds_scores(count_terms(tokens, &stopwords), count_terms(bg_tokens, &stopwords), config.prior_scale);
        const KeywordIdeaSet ideas = top_keywords(out.keyword_scores, config.n_keywords);
        raw = build_matrix(
            corpus, [&](std::size_t d, const Document&) { return doc_keyword_ideas(tokens[d], ideas); }, ideas.terms);
    }

    const auto exclude = resolve_ideas(raw, config.exclude_ideas);
    out.matrix = filter_ideas(raw, config.min_doc_freq, exclude);
    if (out.matrix.num_ideas() < 2) throw Error("fewer than 2 ideas left after filtering");
    return out;
}

std::vector<RankedRelation> top_ranked(std::span<const RelationRecord> records, std::size_t k) {
    std::vector<RankedRelation> out;
    for (auto type : kRelationTypes) {
        const auto idx = order_by_strength(records, type);
        for (std::size_t r = 0; r < idx.size() && r < k; ++r) out.push_back({records[idx[r]], r + 1});
    }
    return out;
}

void write_relations_csv(std::ostream& out, const DocumentIdeaMatrix& matrix, std::span<const RelationRecord> records) {
    const auto ranks = ranks_in_type(records);
    out << "x_label,y_label,pmi,r,strength,type,rank_in_type\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        out << csv_field(matrix.label(rec.x)) << ',' << csv_field(matrix.label(rec.y)) << ','
            << format_double(rec.pmi) << ',' << (rec.r ? format_double(*rec.r) : std::string()) << ','
            << format_double(rec.strength) << ',' << to_string(rec.type) << ','
            << (ranks[i] ? std::to_string(ranks[i]) : std::string()) << '\n';
    }
}

std::vector<RelationRow> read_relations_csv(std::istream& in) {
    std::vector<RelationRow> rows;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw Error("relations csv is empty");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x_label,y_label,pmi,r,strength,type,rank_in_type") {
        throw Error("relations csv has an unexpected header: " + line);
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) {
            throw Error("relations csv line " + std::to_string(line_no) + ": expected 7 fields, got " +
                        std::to_string(f.size()));
        }
        RelationRow row;
        row.x_label = f[0];
        row.y_label = f[1];
        row.pmi = parse_number(f[2], line_no);
        if (!f[3].empty()) row.r = parse_number(f[3], line_no);
        row.strength = parse_number(f[4], line_no);
        auto type = parse_relation_type(f[5]);
        if (!type) throw Error("relations csv line " + std::to_string(line_no) + ": unknown type '" + f[5] + "'");
        row.type = *type;
        if (!f[6].empty()) row.rank = static_cast<std::size_t>(parse_number(f[6], line_no));
        rows.push_back(std::move(row));
    }
    return rows;
}

json log10_p_json(double log10_p) {
    if (std::isinf(log10_p) && log10_p < 0) return "< -300";
    return finite_or_null(log10_p);
}

json marginal_tests(std::span<const double> values, std::size_t n_boot, std::uint64_t seed) {
    json j;
    j["n"] = values.size();
    const bool constant =
        values.empty() || std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; });
    json dip = nullptr;
    if (values.size() >= 4 && !constant) {
        const auto d = stats::dip_test(values, n_boot, seed);
        dip = {{"dip", d.dip}, {"p_value", d.p_value}, {"n_boot", d.n_boot}, {"seed", d.seed}};
    }
    j["dip"] = dip;
    json k2 = nullptr;
    if (values.size() >= 20 && !constant) {
        const auto t = stats::dagostino_k2(values);
        k2 = {{"skew_z", finite_or_null(t.skew_z)},
              {"kurt_z", finite_or_null(t.kurt_z)},
              {"k2", finite_or_null(t.k2)},
              {"p_value", finite_or_null(t.p_value)}};
    }
    j["k2"] = k2;
    return j;
}

json emit_joint_plot(std::span<const RelationRecord> records, const JointPlotOptions& options) {
    std::vector<double> pmis, rs;
    json points = json::array();
    for (const auto& rec : records) {
        if (rec.type == RelationType::degenerate) continue;
        pmis.push_back(rec.pmi);
        rs.push_back(*rec.r);
        points.push_back({rec.pmi, *rec.r});
    }
    const auto distinct = [](const std::vector<double>& v) {
        return !v.empty() && std::any_of(v.begin(), v.end(), [&](double x) { return x != v[0]; });
    };

    json j;
    j["schema"] = "v1";
    j["n"] = pmis.size();
    j["points"] = points;

    json pearson = nullptr;
    if (pmis.size() >= 3 && distinct(pmis) && distinct(rs)) {
        const auto p = stats::pearson_log_p(pmis, rs);
        pearson = {{"r", p.r}, {"log10_p", log10_p_json(p.log10_p)}, {"n", p.n}};
    }
    j["pearson"] = pearson;

    json kde = nullptr;
    if (pmis.size() >= 2 && distinct(pmis) && distinct(rs)) {
        const auto grid = stats::kde_2d(pmis, rs, options.grid_size);
        json density = json::array();
        for (std::size_t i = 0; i < grid.x_grid.size(); ++i) {
            json row = json::array();
            for (std::size_t jj = 0; jj < grid.y_grid.size(); ++jj) row.push_back(grid.at(i, jj));
            density.push_back(std::move(row));
        }
        kde = {{"x_grid", grid.x_grid},
               {"y_grid", grid.y_grid},
               {"bandwidth", {grid.bandwidth[0], grid.bandwidth[1]}},
               {"density", std::move(density)},
               {"integral", stats::integrate(grid)}};
    }
    j["kde"] = kde;

    const auto hist = [&](const std::vector<double>& v) {
        const auto h = stats::marginal_histogram(v, options.bins);
        return json{{"edges", h.edges}, {"counts", h.counts}};
    };
    j["marginals"] = {{"pmi", hist(pmis)}, {"r", hist(rs)}};
    j["tests"] = {{"pmi", marginal_tests(pmis, options.n_boot, options.seed)},
                  {"r", marginal_tests(rs, options.n_boot, options.seed + 1)}};
    return j;
}

json emit_trend(const DocumentIdeaMatrix& matrix, std::span<const RankedRelation> pairs) {
    json j;
    j["schema"] = "v1";
    j["timesteps"] = matrix.timestep_labels();
    j["docs_per_timestep"] = matrix.docs_per_timestep();

    std::vector<IdeaId> ideas;
    for (const auto& p : pairs) {
        ideas.push_back(p.record.x);
        ideas.push_back(p.record.y);
    }
    std::sort(ideas.begin(), ideas.end());
    ideas.erase(std::unique(ideas.begin(), ideas.end()), ideas.end());

    json series = json::array();
    for (auto id : ideas) {
        const auto s = prevalence_series(matrix, id);
        json values = json::array();
        for (std::size_t t = 0; t < s.size(); ++t) values.push_back(s.defined[t] ? json(s.values[t]) : json(nullptr));
        series.push_back({{"idea", to_index(id)}, {"label", matrix.label(id)}, {"prevalence", std::move(values)}});
    }
    j["series"] = std::move(series);

    json out_pairs = json::array();
    for (const auto& p : pairs) {
        out_pairs.push_back({{"x", to_index(p.record.x)},
                             {"y", to_index(p.record.y)},
                             {"x_label", matrix.label(p.record.x)},
                             {"y_label", matrix.label(p.record.y)},
                             {"type", to_string(p.record.type)},
                             {"rank", p.rank},
                             {"pmi", p.record.pmi},
                             {"r", optional_number(p.record.r)},
                             {"strength", p.record.strength}});
    }
    j["pairs"] = std::move(out_pairs);
    return j;
}

json emit_strength_bars(std::span<const RelationRecord> records, std::size_t m) {
    json j;
    j["schema"] = "v1";
    j["m"] = m;
    json bars = json::array();
    for (auto type : kRelationTypes) {
        const auto cs = collective_strength(records, type, m);
        bars.push_back({{"type", to_string(type)},
                        {"mean", cs.mean},
                        {"std_error", cs.std_error},
                        {"count", cs.count},
                        {"empty", cs.empty}});
    }
    j["bars"] = std::move(bars);
    return j;
}

std::optional<IdeaId> default_focus(std::span<const RelationRecord> records) {
    const RelationRecord* best = nullptr;
    for (const auto& rec : records) {
        if (rec.type == RelationType::degenerate) continue;
        if (!best || rec.strength > best->strength ||
            (rec.strength == best->strength && std::pair(rec.x, rec.y) < std::pair(best->x, best->y))) {
            best = &rec;
        }
    }
    if (!best) return std::nullopt;
    return best->x;
}

json emit_relation_graph(const DocumentIdeaMatrix& matrix, std::span<const RelationRecord> records, IdeaId focus,
                         std::size_t k_per_type) {
    if (to_index(focus) >= matrix.num_ideas()) throw Error("graph focus is not an idea in the matrix");
    json j;
    j["schema"] = "v1";
    j["focus"] = {{"id", to_index(focus)}, {"label", matrix.label(focus)}};
    j["k_per_type"] = k_per_type;

    json nodes = json::array();
    nodes.push_back({{"id", to_index(focus)}, {"label", matrix.label(focus)}});
    std::vector<IdeaId> seen{focus};
    json edges = json::array();
    for (auto type : kRelationTypes) {
        const auto idx = order_by_strength(records, type);
        std::size_t taken = 0;
        for (std::size_t r = 0; r < idx.size() && taken < k_per_type; ++r) {
            const auto& rec = records[idx[r]];
            if (rec.x != focus && rec.y != focus) continue;
            const IdeaId other = rec.x == focus ? rec.y : rec.x;
            if (std::find(seen.begin(), seen.end(), other) == seen.end()) {
                seen.push_back(other);
                nodes.push_back({{"id", to_index(other)}, {"label", matrix.label(other)}});
            }
            edges.push_back({{"source", to_index(focus)},
                             {"target", to_index(other)},
                             {"type", to_string(type)},
                             {"rank", r + 1},
                             {"strength", rec.strength},
                             {"pmi", rec.pmi},
                             {"r", optional_number(rec.r)}});
            ++taken;
        }
    }
    j["nodes"] = std::move(nodes);
    j["edges"] = std::move(edges);
    return j;
}

json emit_diagnostics(const DocumentIdeaMatrix& matrix, std::span<const RelationRecord> records) {
    json j;
    j["schema"] = "v1";
    j["num_docs"] = matrix.num_docs();
    j["num_timesteps"] = matrix.num_timesteps();
    j["num_ideas"] = matrix.num_ideas();
    j["num_pairs"] = records.size();

    const auto per_t = matrix.docs_per_timestep();
    json empty = json::array();
    for (std::size_t t = 0; t < per_t.size(); ++t) {
        if (per_t[t] == 0) empty.push_back(matrix.timestep_labels()[t]);
    }
    j["empty_timesteps"] = std::move(empty);

    std::vector<double> per_doc;
    per_doc.reserve(matrix.num_docs());
    for (std::size_t d = 0; d < matrix.num_docs(); ++d) per_doc.push_back(static_cast<double>(matrix.ideas_in_doc(d)));
    std::sort(per_doc.begin(), per_doc.end());
    // Linear interpolation between order statistics.
    const auto quantile = [&](double q) -> json {
        if (per_doc.empty()) return nullptr;
        const double pos = q * static_cast<double>(per_doc.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, per_doc.size() - 1);
        return per_doc[lo] + (pos - static_cast<double>(lo)) * (per_doc[hi] - per_doc[lo]);
    };
    double mean = 0.0;
    for (double v : per_doc) mean += v;
    j["ideas_per_doc"] = {{"p5", quantile(0.05)},
                          {"median", quantile(0.5)},
                          {"p95", quantile(0.95)},
                          {"mean", per_doc.empty() ? json(nullptr) : json(mean / static_cast<double>(per_doc.size()))}};

    json counts = json::object();
    for (auto type : {RelationType::friendship, RelationType::tryst, RelationType::arms_race,
                      RelationType::head_to_head, RelationType::degenerate}) {
        counts[std::string(to_string(type))] =
            std::count_if(records.begin(), records.end(), [&](const auto& r) { return r.type == type; });
    }
    j["type_counts"] = std::move(counts);

    json degenerate = json::array();
    for (const auto& rec : records) {
        if (rec.type != RelationType::degenerate) continue;
        degenerate.push_back({{"x_label", matrix.label(rec.x)},
                              {"y_label", matrix.label(rec.y)},
                              {"reason", rec.r ? (*rec.r == 0.0 ? "zero_r" : "zero_pmi") : "undefined_r"}});
    }
    j["degenerate_pairs"] = std::move(degenerate);
    j["warnings"] = json::array();
    return j;
}

ReportBundle write_report(const DocumentIdeaMatrix& matrix, const RunConfig& config, const json& extra_diagnostics) {
    WarningCapture capture;
    const auto records = in_stage("relations", [&] {
        if (matrix.num_ideas() < 2) throw Error("need at least 2 ideas");
        return all_pair_relations(matrix);
    });

    struct Outputs {
        std::string csv;
        json joint, trend, bars, graph, diag;
    };
    Outputs o = in_stage("emit", [&] {
        Outputs out;
        std::ostringstream csv;
        write_relations_csv(csv, matrix, records);
        out.csv = csv.str();
        out.joint = emit_joint_plot(records, {config.kde_grid, config.hist_bins, config.dip_boot, config.seed});
        out.trend = emit_trend(matrix, top_ranked(records, config.top_k));
        out.bars = emit_strength_bars(records, config.top_m);

        std::optional<IdeaId> focus;
        if (config.focus) {
            const std::string names[] = {*config.focus};
            focus = resolve_ideas(matrix, names).front();
        } else {
            focus = default_focus(records);
        }
        if (focus) {
            out.graph = emit_relation_graph(matrix, records, *focus, config.graph_k);
        } else {
            log::warn("no non-degenerate relations; graph has no focus");
            out.graph = {{"schema", "v1"}, {"focus", nullptr}, {"k_per_type", config.graph_k},
                         {"nodes", json::array()}, {"edges", json::array()}};
        }

        out.diag = emit_diagnostics(matrix, records);
        out.diag["config"] = config_summary(config);
        for (const auto& [key, value] : extra_diagnostics.items()) {
            if (key == "warnings") continue;
            out.diag[key] = value;
        }
        json warnings = extra_diagnostics.contains("warnings") ? extra_diagnostics["warnings"] : json::array();
        for (const auto& w : capture.messages()) warnings.push_back(w);
        out.diag["warnings"] = std::move(warnings);
        return out;
    });

    return in_stage("emit", [&] {
        fs::create_directories(config.output_dir);
        const fs::path staging = config.output_dir / ".idearel-staging";
        fs::remove_all(staging);
        fs::create_directories(staging);
        ReportBundle bundle;
        bundle.output_dir = config.output_dir;
        try {
            {
                std::ofstream csv(staging / "relations.csv", std::ios::binary);
                if (!csv) throw Error("cannot write relations.csv");
                csv << o.csv;
                if (!csv) throw Error("write failed for relations.csv");
            }
            write_json(staging / "joint_plot.json", o.joint);
            write_json(staging / "trend.json", o.trend);
            write_json(staging / "strength_bars.json", o.bars);
            write_json(staging / "graph.json", o.graph);
            write_json(staging / "diagnostics.json", o.diag);
            for (const char* name : kBundleFiles) {
                fs::rename(staging / name, config.output_dir / name);
                bundle.files.push_back(config.output_dir / name);
            }
        } catch (...) {
            std::error_code ec;
            fs::remove_all(staging, ec);
            for (const auto& f : bundle.files) fs::remove(f, ec);
            throw;
        }
        fs::remove_all(staging);
        return bundle;
    });
}

ReportBundle run_pipeline(const RunConfig& config) {
    in_stage("config", [&] { config.validate(); });
    WarningCapture capture;
    const Corpus corpus = in_stage("ingest", [&] { return ingest(config, config.corpus_path); });
    IdeaExtraction ideas = in_stage("ideas", [&] { return extract_ideas(config, corpus); });

    json extra = json::object();
    if (ideas.model) {
        extra["likelihood_trace"] = json::array();
        for (const auto& [sweep, ll] : ideas.model->likelihood_trace) extra["likelihood_trace"].push_back({sweep, ll});
    }
    extra["warnings"] = capture.messages();
    return write_report(ideas.matrix, config, extra);
}

}  // namespace idearel
