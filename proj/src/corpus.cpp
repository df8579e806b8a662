#include "idearel/corpus.hpp"

#include "idearel/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace idearel {
namespace {

using nlohmann::json;

int parse_int(std::string_view s, std::string_view whole) {
    int value = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc{} || ptr != end) {
        throw Error("unparseable date '" + std::string(whole) + "'");
    }
    return value;
}

bool is_leap(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(int year, int month) {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return month == 2 && is_leap(year) ? 29 : days[month - 1];
}

Date date_from_json(const json& value, std::string_view id) {
    if (value.is_number_integer()) return Date{value.get<int>(), 0, 0};
    if (value.is_string()) {
        try {
            return parse_date(value.get<std::string>());
        } catch (const Error& e) {
            throw Error("document '" + std::string(id) + "': " + e.what());
        }
    }
    throw Error("document '" + std::string(id) + "': date must be a string or integer year");
}

void sort_and_check_ids(std::vector<Document>& docs) {
    std::sort(docs.begin(), docs.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    auto dup = std::adjacent_find(docs.begin(), docs.end(),
                                  [](const Document& a, const Document& b) { return a.id == b.id; });
    if (dup != docs.end()) throw Error("duplicate document id '" + dup->id + "'");
}

std::string month_label(int year, int month) {
    std::ostringstream out;
    out << year << '-' << (month < 10 ? "0" : "") << month;
    return out.str();
}

}  // namespace

std::strong_ordering Date::operator<=>(const Date& other) const noexcept {
    auto norm = [](int v) { return v == 0 ? 1 : v; };
    if (auto c = year <=> other.year; c != 0) return c;
    if (auto c = norm(month) <=> norm(other.month); c != 0) return c;
    return norm(day) <=> norm(other.day);
}

std::string Date::to_string() const {
    std::string out = std::to_string(year);
    if (month > 0) {
        out = month_label(year, month);
        if (day > 0) out += (day < 10 ? "-0" : "-") + std::to_string(day);
    }
    return out;
}

Date parse_date(std::string_view text) {
    Date date;
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto dash = text.find('-', start);
        parts.push_back(text.substr(start, dash == std::string_view::npos ? dash : dash - start));
        if (dash == std::string_view::npos) break;
        start = dash + 1;
    }
    if (parts.size() > 3 || parts[0].size() != 4) {
        throw Error("unparseable date '" + std::string(text) + "'");
    }
    date.year = parse_int(parts[0], text);
    if (parts.size() >= 2) {
        date.month = parse_int(parts[1], text);
        if (parts[1].size() != 2 || date.month < 1 || date.month > 12) {
            throw Error("invalid month in date '" + std::string(text) + "'");
        }
    }
    if (parts.size() == 3) {
        date.day = parse_int(parts[2], text);
        if (parts[2].size() != 2 || date.day < 1 || date.day > days_in_month(date.year, date.month)) {
            throw Error("invalid day in date '" + std::string(text) + "'");
        }
    }
    return date;
}

std::vector<std::size_t> Corpus::empty_timesteps() const {
    std::vector<std::size_t> out;
    for (std::size_t t = 0; t < docs_per_timestep.size(); ++t) {
        if (docs_per_timestep[t] == 0) out.push_back(t);
    }
    return out;
}

Corpus read_jsonl(std::istream& in, std::string_view source) {
    Corpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = std::string(source) + ":" + std::to_string(line_no);

        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(where + ": malformed JSON record");
        }
        if (!record.is_object()) throw Error(where + ": record is not an object");

        Document doc;
        auto id = record.find("id");
        if (id == record.end()) throw Error(where + ": record has no id");
        if (id->is_string()) {
            doc.id = id->get<std::string>();
        } else if (id->is_number_integer()) {
            doc.id = std::to_string(id->get<long long>());
        } else {
            throw Error(where + ": id must be a string");
        }

        auto date = record.find("date");
        if (date == record.end()) {
            throw Error(where + ": document '" + doc.id + "' has no date");
        }
        try {
            doc.date = date_from_json(*date, doc.id);
        } catch (const Error& e) {
            throw Error(where + ": " + e.what());
        }

        auto text = record.find("text");
        auto tokens = record.find("tokens");
        if (tokens != record.end()) {
            if (!tokens->is_array()) throw Error(where + ": tokens must be an array");
            for (const auto& tok : *tokens) {
                if (!tok.is_string()) throw Error(where + ": tokens must be strings");
                doc.tokens.push_back(tok.get<std::string>());
            }
            doc.pretokenized = true;
        }
        if (text != record.end()) {
            if (!text->is_string()) throw Error(where + ": text must be a string");
            doc.text = text->get<std::string>();
        } else if (tokens == record.end()) {
            throw Error(where + ": document '" + doc.id + "' has neither text nor tokens");
        }
        corpus.documents.push_back(std::move(doc));
    }
    sort_and_check_ids(corpus.documents);
    return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw Error("corpus path does not exist: " + path.string());

    if (format == CorpusFormat::jsonl) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot open " + path.string());
        return read_jsonl(in, path.string());
    }

    // <root>/<date>/<id>.txt
    if (!fs::is_directory(path)) throw Error("not a directory: " + path.string());
    Corpus corpus;
    std::vector<fs::path> date_dirs;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_directory()) date_dirs.push_back(entry.path());
    }
    std::sort(date_dirs.begin(), date_dirs.end());
    for (const auto& dir : date_dirs) {
        Date date;
        try {
            date = parse_date(dir.filename().string());
        } catch (const Error& e) {
            throw Error(dir.string() + ": " + e.what());
        }
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            std::ifstream in(file, std::ios::binary);
            if (!in) throw Error("cannot open " + file.string());
            std::ostringstream text;
            text << in.rdbuf();
            corpus.documents.push_back(Document{file.stem().string(), date, text.str(), {}, false});
        }
    }
    sort_and_check_ids(corpus.documents);
    return corpus;
}

Corpus bin_by_time(Corpus corpus, const TimeBinning& binning) {
    const auto& docs = corpus.documents;
    corpus.timestep_of.assign(docs.size(), 0);
    corpus.timestep_labels.clear();
    corpus.docs_per_timestep.clear();
    if (docs.empty()) return corpus;

    std::vector<std::string> offenders;
    auto report_offenders = [&](const std::string& what) {
        if (offenders.empty()) return;
        std::string msg = what + ":";
        for (std::size_t i = 0; i < offenders.size() && i < 20; ++i) msg += " " + offenders[i];
        if (offenders.size() > 20) msg += " ... (" + std::to_string(offenders.size()) + " total)";
        throw Error(msg);
    };

    switch (binning.granularity) {
    case Granularity::year: {
        auto [lo_it, hi_it] = std::minmax_element(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.date.year < b.date.year; });
        const int first = binning.first ? binning.first->year : lo_it->date.year;
        const int last = binning.last ? binning.last->year : hi_it->date.year;
        if (last < first) throw Error("declared range is empty");
        for (const auto& d : docs) {
            if (d.date.year < first || d.date.year > last) offenders.push_back(d.id + "@" + d.date.to_string());
        }
        report_offenders("timestamps outside " + std::to_string(first) + ".." + std::to_string(last));
        for (int y = first; y <= last; ++y) corpus.timestep_labels.push_back(std::to_string(y));
        for (std::size_t i = 0; i < docs.size(); ++i) {
            corpus.timestep_of[i] = static_cast<std::size_t>(docs[i].date.year - first);
        }
        break;
    }
    case Granularity::month: {
        for (const auto& d : docs) {
            if (d.date.month == 0) offenders.push_back(d.id);
        }
        report_offenders("monthly binning needs a month on every document; missing on");
        auto key = [](const Date& d) { return d.year * 12 + (d.month == 0 ? 1 : d.month) - 1; };
        auto [lo_it, hi_it] = std::minmax_element(docs.begin(), docs.end(),
            [&](const Document& a, const Document& b) { return key(a.date) < key(b.date); });
        const int first = binning.first ? key(*binning.first) : key(lo_it->date);
        const int last = binning.last ? key(*binning.last) : key(hi_it->date);
        if (last < first) throw Error("declared range is empty");
        for (const auto& d : docs) {
            if (key(d.date) < first || key(d.date) > last) offenders.push_back(d.id + "@" + d.date.to_string());
        }
        report_offenders("timestamps outside declared range");
        for (int m = first; m <= last; ++m) corpus.timestep_labels.push_back(month_label(m / 12, m % 12 + 1));
        for (std::size_t i = 0; i < docs.size(); ++i) {
            corpus.timestep_of[i] = static_cast<std::size_t>(key(docs[i].date) - first);
        }
        break;
    }
    case Granularity::custom: {
        const auto& edges = binning.edges;
        if (edges.size() < 2) throw Error("custom binning needs at least two edges");
        if (std::adjacent_find(edges.begin(), edges.end(), std::greater_equal<>{}) != edges.end()) {
            throw Error("custom bin edges must be strictly increasing");
        }
        for (std::size_t i = 0; i < docs.size(); ++i) {
            const Date& d = docs[i].date;
            if (d < edges.front() || d > edges.back()) {
                offenders.push_back(docs[i].id + "@" + d.to_string());
                continue;
            }
            auto it = std::upper_bound(edges.begin(), edges.end(), d);
            std::size_t bin = static_cast<std::size_t>(it - edges.begin()) - 1;
            corpus.timestep_of[i] = std::min(bin, edges.size() - 2);
        }
        report_offenders("timestamps outside custom edges");
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) corpus.timestep_labels.push_back(edges[i].to_string());
        break;
    }
    }

    corpus.docs_per_timestep.assign(corpus.timestep_labels.size(), 0);
    for (auto t : corpus.timestep_of) ++corpus.docs_per_timestep[t];
    return corpus;
}

}  // namespace idearel
