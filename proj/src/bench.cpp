#include "cvrank/bench.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "cvrank/embedded_data.hpp"
#include "cvrank/error.hpp"
#include "cvrank/pipeline.hpp"
#include "cvrank/rank.hpp"
#include "cvrank/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace cvrank {

namespace {

// Keeps the generator independent of the standard library's distribution
// implementations so corpora are identical across toolchains.
class CorpusRng {
  public:
    explicit CorpusRng(std::uint64_t seed) : engine_(seed) {}

    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  private:
    std::mt19937_64 engine_;
};

std::vector<std::string> keyword_pool(std::span<const JobProfile> profiles) {
    std::set<std::string> pool;
    for (const auto& p : profiles) {
        for (const auto& w : p.words) pool.insert(w.normalized.begin(), w.normalized.end());
        for (const auto& ph : p.phrases) pool.insert(ph.normalized.begin(), ph.normalized.end());
    }
    return {pool.begin(), pool.end()};
}

struct TempDir {
    fs::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        path = fs::temp_directory_path() /
               ("cvrank-bench-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return std::sqrt(sq / static_cast<double>(xs.size() - 1));
}

}  // namespace

void SyntheticCorpusSpec::validate() const {
    if (resume_count < 1) throw UsageError("resume count must be at least 1");
    if (tokens_per_resume < 1) throw UsageError("tokens per resume must be at least 1");
    if (!(keyword_density >= 0.0 && keyword_density <= 1.0)) throw UsageError("keyword density must be in [0, 1]");
}

const std::vector<std::string>& filler_vocabulary() {
    static const std::vector<std::string> words = [] {
        std::vector<std::string> out;
        std::istringstream in{std::string(embedded::filler_words())};
        for (std::string line; std::getline(in, line);) {
            if (line.empty() || line.front() == '#') continue;
            out.push_back(line);
        }
        return out;
    }();
    return words;
}

std::vector<std::string> filler_pool(std::span<const JobProfile> profiles, const TextPipeline& pipeline) {
    const auto keywords = keyword_pool(profiles);
    const std::set<std::string> taken(keywords.begin(), keywords.end());
    std::vector<std::string> out;
    for (const auto& word : filler_vocabulary()) {
        const Lemmas lemmas = normalize_term(word, pipeline);
        if (lemmas.size() == 1 && lemmas.front() == word && taken.count(word) == 0) out.push_back(word);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> generate_resume_texts(const SyntheticCorpusSpec& spec,
                                                                       std::span<const JobProfile> profiles,
                                                                       const TextPipeline& pipeline) {
    spec.validate();
    const auto keywords = keyword_pool(profiles);
    const auto filler = filler_pool(profiles, pipeline);
    if (keywords.empty() && spec.keyword_density > 0.0) throw DataError("profiles contain no keywords to sample");
    if (filler.empty() && spec.keyword_density < 1.0) throw DataError("no filler words are usable with these profiles");

    constexpr std::size_t kSentence = 12;
    CorpusRng rng(spec.seed);
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(spec.resume_count);
    for (std::size_t r = 1; r <= spec.resume_count; ++r) {
        std::string text;
        for (std::size_t t = 0; t < spec.tokens_per_resume; ++t) {
            const bool keyword = rng.unit() < spec.keyword_density;
            std::string token = keyword ? keywords[rng.index(keywords.size())] : filler[rng.index(filler.size())];
            // Sentence dressing that strip_text removes again.
            if (t % kSentence == 0 && token[0] >= 'a' && token[0] <= 'z') token[0] = static_cast<char>(token[0] - 32);
            if (t > 0) text.push_back(' ');
            text += token;
            if (t % kSentence == kSentence - 1 || t + 1 == spec.tokens_per_resume) text.push_back('.');
        }
        text.push_back('\n');
        out.emplace_back("resume" + std::to_string(r), std::move(text));
    }
    return out;
}

std::vector<fs::path> generate_corpus(const SyntheticCorpusSpec& spec, std::span<const JobProfile> profiles,
                                      const TextPipeline& pipeline, const fs::path& dir) {
    const auto texts = generate_resume_texts(spec, profiles, pipeline);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
    std::vector<fs::path> paths;
    for (const auto& [id, text] : texts) {
        const fs::path path = dir / (id + ".txt");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw IoError("cannot write " + path.string());
        paths.push_back(path);
    }
    return paths;
}

void BenchConfig::validate() const {
    if (sizes.empty()) throw UsageError("at least one corpus size is required");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw UsageError("corpus sizes must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw UsageError("corpus sizes must be strictly increasing");
    }
    if (reps < 3) throw UsageError("repetitions must be at least 3");
    if (tokens_per_resume < 1) throw UsageError("tokens per resume must be at least 1");
    if (!(keyword_density >= 0.0 && keyword_density <= 1.0)) throw UsageError("keyword density must be in [0, 1]");
}

bool BenchResult::nondecreasing_within_noise() const {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double noise = std::max(rows[i - 1].stddev_ms, rows[i].stddev_ms);
        if (rows[i].mean_ms + noise < rows[i - 1].mean_ms) return false;
    }
    return true;
}

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
    LinearFit fit;
    const std::size_t n = std::min(xs.size(), ys.size());
    if (n == 0) return fit;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.slope = sxx == 0.0 ? 0.0 : sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < n; ++i) {
        const double predicted = fit.slope * xs[i] + fit.intercept;
        if (predicted != 0.0) {
            fit.max_deviation_ratio = std::max(fit.max_deviation_ratio, std::abs(ys[i] - predicted) / std::abs(predicted));
        }
    }
    return fit;
}

BenchResult run_bench(const BenchConfig& config, std::span<const JobProfile> jobs, const TextPipeline& pipeline) {
    config.validate();
    if (jobs.empty()) throw DataError("benchmark needs at least one job");
    using clock = std::chrono::steady_clock;

    TempDir root;
    const fs::path kb_dir = root.path / "kb";
    {
        JobStore store(kb_dir, pipeline);
        for (const auto& job : jobs) store.put(job, true);
    }

    BenchResult result;
    result.config = config;
    result.job_count = jobs.size();

    double sink = 0.0;
    // Returns (total ms, scoring-only ms).
    auto run_once = [&](const fs::path& corpus_dir) {
        const auto start = clock::now();
        const JobStore store(kb_dir, pipeline);
        std::vector<JobProfile> profiles;
        for (const auto& summary : store.list()) profiles.push_back(store.get(summary.job_id));
        const auto streams = normalize_corpus(ingest_corpus(corpus_dir, pipeline.policy), pipeline, config.workers);
        const auto scoring_start = clock::now();
        for (const auto& profile : profiles) {
            const auto report = rank_resumes(totals(score_streams(streams, profile, config.workers)), 0.0);
            sink += static_cast<double>(report.applicable_count());
        }
        const auto end = clock::now();
        const std::chrono::duration<double, std::milli> total = end - start;
        const std::chrono::duration<double, std::milli> scoring = end - scoring_start;
        return std::pair{total.count(), scoring.count()};
    };

    for (const std::size_t size : config.sizes) {
        const fs::path corpus_dir = root.path / ("corpus-" + std::to_string(size));
        SyntheticCorpusSpec spec{config.seed, size, config.tokens_per_resume, config.keyword_density};
        generate_corpus(spec, jobs, pipeline, corpus_dir);

        run_once(corpus_dir);  // warm-up
        std::vector<double> total_ms, scoring_ms;
        for (std::size_t rep = 0; rep < config.reps; ++rep) {
            const auto [t, s] = run_once(corpus_dir);
            total_ms.push_back(t);
            scoring_ms.push_back(s);
        }
        BenchRow row;
        row.corpus_size = size;
        row.repetitions = config.reps;
        row.mean_ms = mean_of(total_ms);
        row.stddev_ms = stddev_of(total_ms, row.mean_ms);
        row.scoring_mean_ms = mean_of(scoring_ms);
        row.scoring_stddev_ms = stddev_of(scoring_ms, row.scoring_mean_ms);
        result.rows.push_back(row);
        fs::remove_all(corpus_dir);
    }
    if (sink < 0.0) throw std::logic_error("unreachable");

    std::vector<double> xs, ys;
    double lo = INFINITY, hi = 0.0;
    for (const auto& row : result.rows) {
        xs.push_back(static_cast<double>(row.corpus_size));
        ys.push_back(row.mean_ms);
        const double per = row.mean_ms / static_cast<double>(row.corpus_size);
        lo = std::min(lo, per);
        hi = std::max(hi, per);
    }
    result.fit = fit_linear(xs, ys);
    result.per_resume_spread = lo > 0.0 ? hi / lo : INFINITY;
    return result;
}

std::string render_bench_table(const BenchResult& result) {
    std::ostringstream os;
    os << "# seed=" << result.config.seed << " tokens_per_resume=" << result.config.tokens_per_resume
       << " keyword_density=" << result.config.keyword_density << " jobs=" << result.job_count
       << " workers=" << result.config.workers << '\n';
    os << "size  reps     mean_ms   stddev_ms  scoring_ms  ms_per_resume\n";
    for (const auto& row : result.rows) {
        char line[160];
        std::snprintf(line, sizeof line, "%4zu  %4zu  %10.3f  %10.3f  %10.3f  %13.4f\n", row.corpus_size,
                      row.repetitions, row.mean_ms, row.stddev_ms, row.scoring_mean_ms,
                      row.mean_ms / static_cast<double>(row.corpus_size));
        os << line;
    }
    char fit[200];
    std::snprintf(fit, sizeof fit, "# fit: mean_ms = %.5f * size + %.5f; max deviation %.4f; per-resume spread %.4f\n",
                  result.fit.slope, result.fit.intercept, result.fit.max_deviation_ratio, result.per_resume_spread);
    os << fit;
    os << "# nondecreasing within noise: " << (result.nondecreasing_within_noise() ? "yes" : "no") << '\n';
    return os.str();
}

std::string render_bench_json(const BenchResult& result) {
    using json = nlohmann::ordered_json;
    json doc;
    doc["config"] = {{"seed", result.config.seed},
                     {"sizes", result.config.sizes},
                     {"reps", result.config.reps},
                     {"tokens_per_resume", result.config.tokens_per_resume},
                     {"keyword_density", result.config.keyword_density},
                     {"workers", result.config.workers},
                     {"job_count", result.job_count}};
    doc["rows"] = json::array();
    for (const auto& row : result.rows) {
        doc["rows"].push_back({{"corpus_size", row.corpus_size},
                               {"repetitions", row.repetitions},
                               {"mean_ms", row.mean_ms},
                               {"stddev_ms", row.stddev_ms},
                               {"scoring_mean_ms", row.scoring_mean_ms},
                               {"scoring_stddev_ms", row.scoring_stddev_ms}});
    }
    doc["linearity"] = {{"slope_ms_per_resume", result.fit.slope},
                        {"intercept_ms", result.fit.intercept},
                        {"max_deviation_ratio", result.fit.max_deviation_ratio},
                        {"per_resume_spread", result.per_resume_spread},
                        {"nondecreasing_within_noise", result.nondecreasing_within_noise()}};
    return doc.dump(2) + "\n";
}

}  // namespace cvrank
