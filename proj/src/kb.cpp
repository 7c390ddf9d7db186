#include "cvrank/kb.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "cvrank/embedded_data.hpp"
#include "cvrank/error.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace cvrank {

namespace {

using json = nlohmann::ordered_json;

std::string join(const Lemmas& lemmas) {
    std::string out;
    for (const auto& l : lemmas) {
        if (!out.empty()) out.push_back(' ');
        out += l;
    }
    return out;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

bool valid_job_id(std::string_view id) {
    if (id.empty() || id.size() > 200) return false;
    auto ok_first = [](char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); };
    if (!ok_first(id.front())) return false;
    return std::all_of(id.begin(), id.end(), [&](char c) { return ok_first(c) || c == '-' || c == '_' || c == '.'; });
}

bool valid_score(double s) { return std::isfinite(s) && s >= 0.0; }

std::string describe_score(double s) {
    std::ostringstream os;
    os << s;
    return os.str();
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace

std::string slugify(std::string_view name) {
    std::string slug = strip_text(name);
    std::replace(slug.begin(), slug.end(), ' ', '-');
    return slug;
}

ValidationReport validate_profile(JobProfile profile, const TextPipeline& pipeline, std::size_t max_phrase_len) {
    std::vector<std::string> problems;
    std::vector<std::string> warnings;

    if (blank(profile.name)) problems.emplace_back("name is empty");
    if (profile.job_id.empty()) profile.job_id = slugify(profile.name);
    if (!valid_job_id(profile.job_id)) {
        problems.push_back("job id '" + profile.job_id + "' must match [a-z0-9][a-z0-9._-]*");
    }

    std::map<Lemmas, std::size_t> seen_words;
    for (std::size_t i = 0; i < profile.words.size(); ++i) {
        auto& entry = profile.words[i];
        const std::string where = "words[" + std::to_string(i) + "] '" + entry.term + "'";
        if (!valid_score(entry.score)) {
            problems.push_back(where + ": score " + describe_score(entry.score) +
                               " must be a non-negative finite number");
        }
        if (blank(entry.term)) {
            problems.push_back(where + ": empty term");
            continue;
        }
        entry.normalized = normalize_term(entry.term, pipeline);
        if (entry.normalized.empty()) {
            problems.push_back(where + ": empty normalization");
            continue;
        }
        if (entry.normalized.size() > 1) {
            warnings.push_back(where + ": normalizes to " + std::to_string(entry.normalized.size()) +
                               " tokens (" + join(entry.normalized) + "), matched as a contiguous sequence");
        }
        auto [it, inserted] = seen_words.emplace(entry.normalized, i);
        if (!inserted) {
            problems.push_back(where + ": duplicate of words[" + std::to_string(it->second) + "] after normalization (" +
                               join(entry.normalized) + ")");
        }
    }

    std::map<Lemmas, std::size_t> seen_phrases;
    for (std::size_t i = 0; i < profile.phrases.size(); ++i) {
        auto& entry = profile.phrases[i];
        const std::string where = "phrases[" + std::to_string(i) + "] '" + entry.phrase + "'";
        if (!valid_score(entry.score)) {
            problems.push_back(where + ": score " + describe_score(entry.score) +
                               " must be a non-negative finite number");
        }
        if (blank(entry.phrase)) {
            problems.push_back(where + ": empty phrase");
            continue;
        }
        entry.normalized = normalize_term(entry.phrase, pipeline);
        if (entry.normalized.empty()) {
            problems.push_back(where + ": empty normalization");
            continue;
        }
        if (entry.normalized.size() > max_phrase_len) {
            problems.push_back(where + ": " + std::to_string(entry.normalized.size()) + " lemmas exceeds the limit of " +
                               std::to_string(max_phrase_len));
            continue;
        }
        auto [it, inserted] = seen_phrases.emplace(entry.normalized, i);
        if (!inserted) {
            problems.push_back(where + ": duplicate of phrases[" + std::to_string(it->second) +
                               "] after normalization (" + join(entry.normalized) + ")");
        }
    }

    if (!problems.empty()) throw ValidationError(std::move(problems));
    return ValidationReport{std::move(profile), std::move(warnings)};
}

JobProfile parse_job_document(std::string_view json_text, std::string job_id) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("malformed job document: ") + e.what());
    }
    if (!doc.is_object()) throw DataError("job document must be a JSON object");

    std::vector<std::string> problems;
    for (const auto& [key, value] : doc.items()) {
        if (key != "name" && key != "words" && key != "phrases") problems.push_back("unknown field '" + key + "'");
    }

    JobProfile profile;
    profile.job_id = std::move(job_id);
    if (!doc.contains("name") || !doc["name"].is_string()) {
        problems.emplace_back("\"name\" must be a string");
    } else {
        profile.name = doc["name"].get<std::string>();
    }

    auto read_entries = [&](const char* field, const char* key, auto& out) {
        if (!doc.contains(field)) return;
        const auto& arr = doc[field];
        if (!arr.is_array()) {
            problems.push_back(std::string("\"") + field + "\" must be an array");
            return;
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& item = arr[i];
            const std::string where = std::string(field) + "[" + std::to_string(i) + "]";
            if (!item.is_object() || !item.contains(key) || !item[key].is_string() || !item.contains("score") ||
                !item["score"].is_number()) {
                problems.push_back(where + " must be {\"" + key + "\": string, \"score\": number}");
                continue;
            }
            for (const auto& [k, v] : item.items()) {
                if (k != key && k != "score") problems.push_back(where + ": unknown field '" + k + "'");
            }
            out.push_back({item[key].get<std::string>(), item["score"].get<double>(), {}});
        }
    };
    read_entries("words", "word", profile.words);
    read_entries("phrases", "phrase", profile.phrases);

    if (!problems.empty()) throw ValidationError(std::move(problems));
    return profile;
}

std::string render_job_document(const JobProfile& profile) {
    json doc;
    doc["name"] = profile.name;
    doc["words"] = json::array();
    for (const auto& w : profile.words) doc["words"].push_back({{"word", w.term}, {"score", w.score}});
    doc["phrases"] = json::array();
    for (const auto& p : profile.phrases) doc["phrases"].push_back({{"phrase", p.phrase}, {"score", p.score}});
    return doc.dump(2) + "\n";
}

JobStore::JobStore(fs::path dir, TextPipeline pipeline) : JobStore(std::move(dir), std::move(pipeline), Options{}) {}

JobStore::JobStore(fs::path dir, TextPipeline pipeline, Options options)
    : dir_(std::move(dir)), pipeline_(std::move(pipeline)), options_(options) {}

fs::path JobStore::path_for(std::string_view job_id) const {
    if (!valid_job_id(job_id)) throw NotFoundError("no job '" + std::string(job_id) + "'");
    return dir_ / (std::string(job_id) + ".json");
}

bool JobStore::contains(std::string_view job_id) const {
    if (!valid_job_id(job_id)) return false;
    std::error_code ec;
    return fs::is_regular_file(path_for(job_id), ec);
}

void JobStore::write_atomically(const fs::path& target, std::string_view bytes) const {
    static std::atomic<unsigned> counter{0};
    const fs::path temp = target.parent_path() / ("." + target.filename().string() + ".tmp-" +
                                                  std::to_string(::getpid()) + "-" + std::to_string(counter++));
    const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
    if (fd < 0) throw IoError("cannot create " + temp.string() + ": " + std::strerror(errno));

    auto fail = [&](const std::string& what) {
        ::close(fd);
        ::unlink(temp.c_str());
        throw IoError(what);
    };

    std::size_t limit = bytes.size();
    if (options_.fail_write_after) limit = std::min(limit, *options_.fail_write_after);
    std::size_t written = 0;
    while (written < limit) {
        const ssize_t n = ::write(fd, bytes.data() + written, limit - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            fail("write to " + temp.string() + " failed: " + std::strerror(errno));
        }
        written += static_cast<std::size_t>(n);
    }
    if (options_.fail_write_after) fail("injected write failure after " + std::to_string(written) + " bytes");
    if (::fsync(fd) != 0) fail("fsync of " + temp.string() + " failed: " + std::strerror(errno));
    if (::close(fd) != 0) {
        ::unlink(temp.c_str());
        throw IoError("close of " + temp.string() + " failed");
    }
    if (::rename(temp.c_str(), target.c_str()) != 0) {
        const int err = errno;
        ::unlink(temp.c_str());
        throw IoError("rename onto " + target.string() + " failed: " + std::strerror(err));
    }
}

std::string JobStore::put(JobProfile profile, bool replace) {
    auto report = validate_profile(std::move(profile), pipeline_, options_.max_phrase_len);
    const auto& validated = report.profile;

    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create store directory " + dir_.string() + ": " + ec.message());

    const fs::path target = path_for(validated.job_id);
    if (!replace && fs::exists(target, ec)) {
        throw ConflictError("job '" + validated.job_id + "' already exists (use replace to overwrite)");
    }
    write_atomically(target, render_job_document(validated));
    return validated.job_id;
}

JobProfile JobStore::get(std::string_view job_id) const {
    const fs::path path = path_for(job_id);
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) throw NotFoundError("no job '" + std::string(job_id) + "'");
    auto profile = parse_job_document(read_bytes(path), std::string(job_id));
    return validate_profile(std::move(profile), pipeline_, options_.max_phrase_len).profile;
}

std::vector<JobSummary> JobStore::list() const {
    std::vector<JobSummary> out;
    std::error_code ec;
    if (!fs::is_directory(dir_, ec)) return out;
    for (const auto& entry : fs::directory_iterator(dir_, ec)) {
        const auto& path = entry.path();
        if (path.extension() != ".json" || !entry.is_regular_file(ec)) continue;
        const std::string id = path.stem().string();
        if (!valid_job_id(id)) continue;
        const auto profile = parse_job_document(read_bytes(path), id);
        out.push_back({id, profile.name, profile.words.size(), profile.phrases.size()});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.job_id < b.job_id; });
    return out;
}

void JobStore::remove(std::string_view job_id) {
    const fs::path path = path_for(job_id);
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) throw NotFoundError("no job '" + std::string(job_id) + "'");
    if (!fs::remove(path, ec) || ec) throw IoError("cannot remove " + path.string() + ": " + ec.message());
}

std::vector<JobProfile> sample_jobs(const TextPipeline& pipeline) {
    std::vector<JobProfile> jobs;
    for (const auto& [stem, doc] : embedded::sample_jobs()) {
        jobs.push_back(validate_profile(parse_job_document(doc, std::string(stem)), pipeline).profile);
    }
    return jobs;
}

}  // namespace cvrank
