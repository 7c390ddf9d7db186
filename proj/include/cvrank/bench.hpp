#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvrank/kb.hpp"
#include "cvrank/lexnorm.hpp"

namespace cvrank {

struct SyntheticCorpusSpec {
    std::uint64_t seed = 42;
    std::size_t resume_count = 10;
    std::size_t tokens_per_resume = 1000;
    /// Fraction of tokens drawn from the profiles' lemmas instead of filler.
    double keyword_density = 0.05;

    void validate() const;
};

/// Shipped filler list (data/filler_words.txt).
const std::vector<std::string>& filler_vocabulary();

/// Filler words usable against `profiles`: words that survive normalization
/// unchanged and share no lemma with any profile entry.
std::vector<std::string> filler_pool(std::span<const JobProfile> profiles, const TextPipeline& pipeline);

/// Deterministic for a given spec: ("resume1", text) ... ("resumeN", text).
std::vector<std::pair<std::string, std::string>> generate_resume_texts(const SyntheticCorpusSpec& spec,
                                                                       std::span<const JobProfile> profiles,
                                                                       const TextPipeline& pipeline);

/// Writes resume1.txt .. resumeN.txt into `dir` (created if missing).
std::vector<std::filesystem::path> generate_corpus(const SyntheticCorpusSpec& spec,
                                                   std::span<const JobProfile> profiles,
                                                   const TextPipeline& pipeline,
                                                   const std::filesystem::path& dir);

struct BenchConfig {
    std::vector<std::size_t> sizes{10, 20, 30, 40, 50};
    std::size_t reps = 10;
    std::uint64_t seed = 42;
    std::size_t tokens_per_resume = 1000;
    double keyword_density = 0.05;
    std::size_t workers = 1;

    /// Throws UsageError: sizes empty / not strictly increasing / zero, reps < 3.
    void validate() const;
};

struct BenchRow {
    std::size_t corpus_size = 0;
    std::size_t repetitions = 0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    double scoring_mean_ms = 0.0;
    double scoring_stddev_ms = 0.0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// max |mean - fit| / fit over the rows.
    double max_deviation_ratio = 0.0;
};

struct BenchResult {
    BenchConfig config;
    std::size_t job_count = 0;
    std::vector<BenchRow> rows;
    LinearFit fit;
    /// max(mean_ms / size) / min(mean_ms / size).
    double per_resume_spread = 0.0;

    /// Each mean is at least the previous mean minus the larger of the two stddevs.
    bool nondecreasing_within_noise() const;
};

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys);

/// Times the whole pipeline (open store, load jobs, ingest, normalize, score
/// every job, rank) `reps` times per corpus size, plus scoring alone.
BenchResult run_bench(const BenchConfig& config, std::span<const JobProfile> jobs, const TextPipeline& pipeline);

std::string render_bench_table(const BenchResult& result);
std::string render_bench_json(const BenchResult& result);

}  // namespace cvrank
