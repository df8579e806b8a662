#include "support.hpp"

#include "idearel/error.hpp"
#include "idearel/format.hpp"
#include "idearel/report.hpp"
#include "idearel/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace testsupport {

using nlohmann::json;
namespace fs = std::filesystem;

double Trend::at(std::size_t t, std::size_t T) const {
    if (T <= 1) return start;
    return start + (end - start) * static_cast<double>(t) / static_cast<double>(T - 1);
}

idearel::DocumentIdeaMatrix planted_matrix(const PlantedSpec& plan) {
    const std::size_t n_ideas = 2 * plan.pairs.size() + plan.singles.size();
    std::vector<std::size_t> timestep;
    std::vector<std::string> labels;
    for (std::size_t t = 0; t < plan.timesteps; ++t) {
        labels.push_back(std::to_string(2000 + t));
        for (std::size_t d = 0; d < plan.docs_per_timestep; ++d) timestep.push_back(t);
    }
    idearel::DocumentIdeaMatrix m(timestep, labels, idea_labels(n_ideas));

    auto rng = idearel::make_stream(plan.seed, 0);
    std::size_t doc = 0;
    for (std::size_t t = 0; t < plan.timesteps; ++t) {
        for (std::size_t d = 0; d < plan.docs_per_timestep; ++d, ++doc) {
            for (std::size_t p = 0; p < plan.pairs.size(); ++p) {
                const auto& pair = plan.pairs[p];
                const double px = pair.x.at(t, plan.timesteps);
                const double py = pair.y.at(t, plan.timesteps);
                const double p11 = std::min({pair.lift * px * py, px, py});
                const double p10 = px - p11;
                const double p01 = py - p11;
                const double u = idearel::uniform01(rng);
                const bool x = u < p11 + p10;
                const bool y = u < p11 || (u >= p11 + p10 && u < p11 + p10 + p01);
                if (x) m.set_present(doc, idearel::idea_at(2 * p));
                if (y) m.set_present(doc, idearel::idea_at(2 * p + 1));
            }
            for (std::size_t s = 0; s < plan.singles.size(); ++s) {
                if (idearel::uniform01(rng) < plan.singles[s].at(t, plan.timesteps)) {
                    m.set_present(doc, idearel::idea_at(2 * plan.pairs.size() + s));
                }
            }
        }
    }
    return m;
}

PlantedSpec quadrant_spec(std::uint64_t seed) {
    PlantedSpec plan;
    plan.seed = seed;
    const Trend up{0.05, 0.2};
    const Trend down{0.2, 0.05};
    plan.pairs = {
        {up, up, 4.0},             // friendship
        {up, down, 3.0},           // tryst
        {{0.05, 0.25}, {0.05, 0.25}, 0.0},  // arms race
        {{0.05, 0.25}, {0.25, 0.05}, 0.0},  // head-to-head
    };
    auto rng = idearel::make_stream(seed, 1);
    for (int i = 0; i < 12; ++i) {
        const double a = 0.05 + 0.25 * idearel::uniform01(rng);
        const double b = 0.05 + 0.25 * idearel::uniform01(rng);
        plan.singles.push_back({a, b});
    }
    return plan;
}

PlantedSpec ordered_groups_spec(std::uint64_t seed) {
    PlantedSpec plan;
    plan.seed = seed;
    plan.docs_per_timestep = 500;
    const Trend up{0.02, 0.1};
    const Trend down{0.1, 0.02};
    for (int i = 0; i < 30; ++i) {
        plan.pairs.push_back({up, up, std::exp(2.0)});      // friendship
        plan.pairs.push_back({up, down, std::exp(-1.5)});   // head-to-head
        plan.pairs.push_back({up, up, std::exp(-1.0)});     // arms race
        plan.pairs.push_back({up, down, std::exp(0.5)});    // tryst
    }
    return plan;
}

double brute_force_pmi(const std::vector<std::vector<bool>>& presence, std::size_t x, std::size_t y) {
    double cx = 0, cy = 0, cxy = 0;
    for (const auto& row : presence) {
        if (row[x]) cx += 1;
        if (row[y]) cy += 1;
        if (row[x] && row[y]) cxy += 1;
    }
    const double n = static_cast<double>(presence.size());
    return std::log(n * (1.0 + cxy) / ((1.0 + cx) * (1.0 + cy)));
}

RandomCorpus random_corpus(std::uint64_t seed, std::size_t max_docs, std::size_t max_ideas) {
    auto rng = idearel::make_stream(seed, 0);
    RandomCorpus out;
    const std::size_t n_docs = 1 + static_cast<std::size_t>(idearel::uniform01(rng) * static_cast<double>(max_docs));
    out.num_ideas = 2 + static_cast<std::size_t>(idearel::uniform01(rng) * static_cast<double>(max_ideas - 1));
    const double density = 0.05 + 0.9 * idearel::uniform01(rng);
    for (std::size_t d = 0; d < n_docs; ++d) {
        idearel::Document doc;
        char id[32];
        std::snprintf(id, sizeof id, "d%04zu", d);
        doc.id = id;
        doc.date = {2000 + static_cast<int>(idearel::uniform01(rng) * 5.0), 0, 0};
        doc.pretokenized = true;
        out.corpus.documents.push_back(doc);
        std::vector<bool> row(out.num_ideas);
        for (std::size_t i = 0; i < out.num_ideas; ++i) row[i] = idearel::uniform01(rng) < density;
        out.presence.push_back(row);
    }
    out.corpus = idearel::bin_by_time(std::move(out.corpus), {});
    return out;
}

std::vector<std::string> idea_labels(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("idea" + std::to_string(i));
    return labels;
}

namespace {

const json& resolve(const json& schema, const json& root) {
    if (!schema.is_object() || !schema.contains("$ref")) return schema;
    const std::string ref = schema["$ref"];
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref " + ref);
    return root.at("$defs").at(ref.substr(prefix.size()));
}

bool has_type(const json& v, const std::string& type) {
    if (type == "null") return v.is_null();
    if (type == "boolean") return v.is_boolean();
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "number") return v.is_number();
    if (type == "integer") {
        if (v.is_number_integer()) return true;
        return v.is_number_float() && std::floor(v.get<double>()) == v.get<double>();
    }
    return false;
}

void check(const json& v, const json& schema, const json& root, const std::string& path,
           std::vector<std::string>& errors) {
    if (schema.is_object() && schema.contains("$ref")) check(v, resolve(schema, root), root, path, errors);
    if (!schema.is_object()) return;
    auto fail = [&](const std::string& msg) { errors.push_back(path + ": " + msg); };

    if (auto it = schema.find("type"); it != schema.end()) {
        bool ok = false;
        if (it->is_string()) {
            ok = has_type(v, *it);
        } else {
            for (const auto& t : *it) ok = ok || has_type(v, t);
        }
        if (!ok) {
            fail("type " + std::string(v.type_name()) + " not allowed by " + it->dump());
            return;
        }
    }
    if (auto it = schema.find("const"); it != schema.end() && v != *it) fail("expected " + it->dump());
    if (auto it = schema.find("enum"); it != schema.end()) {
        if (std::find(it->begin(), it->end(), v) == it->end()) fail(v.dump() + " not in enum");
    }
    if (auto it = schema.find("anyOf"); it != schema.end()) {
        bool any = false;
        for (const auto& alt : *it) {
            std::vector<std::string> sub;
            check(v, alt, root, path, sub);
            any = any || sub.empty();
        }
        if (!any) fail("no anyOf alternative matches " + v.dump());
    }
    if (v.is_number()) {
        const double x = v.get<double>();
        if (schema.contains("minimum") && x < schema["minimum"].get<double>()) fail("below minimum");
        if (schema.contains("maximum") && x > schema["maximum"].get<double>()) fail("above maximum");
        if (schema.contains("exclusiveMinimum") && x <= schema["exclusiveMinimum"].get<double>()) {
            fail("not above exclusiveMinimum");
        }
    }
    if (v.is_string() && schema.contains("minLength") &&
        v.get<std::string>().size() < schema["minLength"].get<std::size_t>()) {
        fail("string too short");
    }
    if (v.is_array()) {
        if (schema.contains("minItems") && v.size() < schema["minItems"].get<std::size_t>()) fail("too few items");
        if (schema.contains("maxItems") && v.size() > schema["maxItems"].get<std::size_t>()) fail("too many items");
        if (auto it = schema.find("items"); it != schema.end()) {
            for (std::size_t i = 0; i < v.size(); ++i) check(v[i], *it, root, path + "/" + std::to_string(i), errors);
        }
    }
    if (v.is_object()) {
        if (auto it = schema.find("required"); it != schema.end()) {
            for (const auto& key : *it) {
                if (!v.contains(key.get<std::string>())) fail("missing " + key.get<std::string>());
            }
        }
        const json empty = json::object();
        const json& props = schema.contains("properties") ? schema["properties"] : empty;
        for (const auto& [key, value] : v.items()) {
            if (props.contains(key)) {
                check(value, props[key], root, path + "/" + key, errors);
            } else if (schema.value("additionalProperties", true) == false) {
                fail("unexpected property " + key);
            }
        }
    }
}

}  // namespace

std::vector<std::string> validate(const json& instance, const json& schema) {
    std::vector<std::string> errors;
    check(instance, schema, schema, "", errors);
    return errors;
}

json load_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return json::parse(in);
}

json relations_csv_as_json(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    const auto header = idearel::split_csv_line(line);
    json rows = json::array();
    while (std::getline(in, line)) {
        const auto fields = idearel::split_csv_line(line);
        json row = json::object();
        for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) {
            const auto& key = header[i];
            const auto& f = fields[i];
            if (f.empty()) {
                row[key] = nullptr;
            } else if (key == "pmi" || key == "r" || key == "strength") {
                row[key] = std::stod(f);
            } else if (key == "rank_in_type") {
                row[key] = std::stoull(f);
            } else {
                row[key] = f;
            }
        }
        if (fields.size() != header.size()) row["_field_count"] = fields.size();
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::string> validate_bundle(const fs::path& dir, const fs::path& schema_dir) {
    std::vector<std::string> errors;
    for (const char* name : idearel::kBundleFiles) {
        const fs::path file = dir / name;
        if (!fs::exists(file)) {
            errors.push_back(std::string(name) + ": missing");
            continue;
        }
        const std::string stem = fs::path(name).stem().string();
        const json schema = load_json(schema_dir / (stem + ".schema.json"));
        if (stem == "relations") {
            for (const auto& row : relations_csv_as_json(file)) {
                for (auto& e : validate(row, schema)) errors.push_back(std::string(name) + e);
            }
        } else {
            for (auto& e : validate(load_json(file), schema)) errors.push_back(std::string(name) + e);
        }
    }
    return errors;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("idearel-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace testsupport
