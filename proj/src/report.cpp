#include "cvrank/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "cvrank/error.hpp"
#include "json.hpp"

namespace cvrank {

namespace {

using json = nlohmann::ordered_json;

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// Left-aligned first column, right-aligned rest.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    std::ostringstream os;
    for (const auto& row : rows) {
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const std::string pad(widths[i] - row[i].size(), ' ');
            if (i > 0) line += "  ";
            line += i == 0 ? row[i] + pad : pad + row[i];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
    }
    return os.str();
}

std::string header_line(std::string_view header) {
    return header.empty() ? std::string{} : "# " + std::string(header) + "\n";
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "table") return Format::table;
    if (name == "json") return Format::json;
    if (name == "csv") return Format::csv;
    throw UsageError("unknown format '" + std::string(name) + "' (expected table, json or csv)");
}

std::string format_display(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", value);
    return buf;
}

std::string format_exact(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string render_scores(const std::vector<ScoreBreakdown>& scores, std::string_view job_id, Format format,
                          std::string_view header) {
    switch (format) {
        case Format::table: {
            std::vector<std::vector<std::string>> rows{{"resume", "total", "words", "phrases"}};
            for (const auto& s : scores) {
                rows.push_back({s.resume_id, format_display(s.total), format_display(s.word_component),
                                format_display(s.phrase_component)});
            }
            return header_line(header) + render_table(rows);
        }
        case Format::csv: {
            std::string out = "resume_id,job_id,total,word_component,phrase_component\n";
            for (const auto& s : scores) {
                out += csv_field(s.resume_id) + ',' + csv_field(job_id) + ',' + format_exact(s.total) + ',' +
                       format_exact(s.word_component) + ',' + format_exact(s.phrase_component) + '\n';
            }
            return out;
        }
        case Format::json: {
            json doc;
            doc["job_id"] = job_id;
            doc["resumes"] = json::array();
            for (const auto& s : scores) {
                json r;
                r["resume_id"] = s.resume_id;
                r["total"] = s.total;
                r["word_component"] = s.word_component;
                r["phrase_component"] = s.phrase_component;
                r["words"] = json::array();
                for (const auto& w : s.word_details) {
                    r["words"].push_back({{"term", w.term},
                                          {"count", w.count},
                                          {"denominator", w.denominator},
                                          {"ac", w.ac},
                                          {"score", w.score},
                                          {"contribution", w.contribution}});
                }
                r["phrases"] = json::array();
                for (const auto& p : s.phrase_details) {
                    r["phrases"].push_back({{"phrase", p.phrase},
                                            {"count", p.count},
                                            {"windows", p.windows},
                                            {"ac", p.ac},
                                            {"score", p.score},
                                            {"contribution", p.contribution}});
                }
                doc["resumes"].push_back(std::move(r));
            }
            return doc.dump(2) + "\n";
        }
    }
    return {};
}

std::string render_ranking(const RankingReport& report, Format format, std::optional<std::size_t> top_k,
                           std::string_view header) {
    const std::size_t applicable = report.applicable_count();
    const std::size_t rejected = report.entries.size() - applicable;

    std::vector<const RankingEntry*> shown;
    for (const auto& e : report.entries) {
        if (e.applicable()) {
            if (!top_k || static_cast<std::size_t>(*e.rank) <= *top_k) shown.push_back(&e);
        } else if (!top_k) {
            shown.push_back(&e);
        }
    }
    auto rank_text = [](const RankingEntry& e) { return e.rank ? std::to_string(*e.rank) : std::string("N/A"); };

    switch (format) {
        case Format::table: {
            std::vector<std::vector<std::string>> rows{{"resume", "score", "rank"}};
            for (const auto* e : shown) rows.push_back({e->resume_id, format_display(e->score), rank_text(*e)});
            std::string summary;
            if (top_k) {
                summary = "# top " + std::to_string(std::min(*top_k, applicable)) + " of " +
                          std::to_string(applicable) + " applicable shown; " + std::to_string(rejected) +
                          " not applicable\n";
            } else {
                summary = "# " + std::to_string(applicable) + " applicable, " + std::to_string(rejected) +
                          " not applicable\n";
            }
            return header_line(header) + render_table(rows) + summary;
        }
        case Format::csv: {
            std::string out = "resume_id,score,rank,applicable\n";
            for (const auto* e : shown) {
                out += csv_field(e->resume_id) + ',' + format_exact(e->score) + ',' + rank_text(*e) + ',' +
                       (e->applicable() ? "true" : "false") + '\n';
            }
            return out;
        }
        case Format::json: {
            json doc;
            doc["job_id"] = report.job_id;
            doc["threshold"] = report.threshold;
            doc["applicable"] = applicable;
            doc["not_applicable"] = rejected;
            if (top_k) doc["top"] = *top_k;
            doc["entries"] = json::array();
            for (const auto* e : shown) {
                json row{{"resume_id", e->resume_id}, {"score", e->score}};
                if (e->rank) {
                    row["rank"] = *e->rank;
                } else {
                    row["rank"] = "N/A";
                }
                row["applicable"] = e->applicable();
                doc["entries"].push_back(std::move(row));
            }
            return doc.dump(2) + "\n";
        }
    }
    return {};
}

std::string render_stream(const LemmaStream& stream) {
    std::string out = "resume_id: " + stream.resume_id + "\n";
    out += "token_count: " + std::to_string(stream.token_count()) + "\n";
    out += "lemmas:";
    for (const auto& l : stream.lemmas) out += " " + l;
    out += "\n";
    return out;
}

}  // namespace cvrank
