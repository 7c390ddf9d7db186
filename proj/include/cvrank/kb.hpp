#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvrank/lexnorm.hpp"

namespace cvrank {

inline constexpr std::size_t kDefaultMaxPhraseLen = 6;

struct WordEntry {
    std::string term;
    double score = 0.0;
    Lemmas normalized;

    bool operator==(const WordEntry&) const = default;
};

struct PhraseEntry {
    std::string phrase;
    double score = 0.0;
    Lemmas normalized;

    bool operator==(const PhraseEntry&) const = default;
};

struct JobProfile {
    std::string job_id;
    std::string name;
    std::vector<WordEntry> words;
    std::vector<PhraseEntry> phrases;

    bool operator==(const JobProfile&) const = default;
};

struct ValidationReport {
    JobProfile profile;
    std::vector<std::string> warnings;
};

/// Lowercased strip_text of the name with spaces turned into hyphens.
std::string slugify(std::string_view name);

/// Fills the `normalized` caches and the job id (slug of name when empty).
/// Collects every violation and throws a single ValidationError.
ValidationReport validate_profile(JobProfile profile, const TextPipeline& pipeline,
                                  std::size_t max_phrase_len = kDefaultMaxPhraseLen);

/// Document form: {"name", "words": [{"word","score"}], "phrases": [{"phrase","score"}]}.
/// Parsing does not validate; the returned profile has empty caches.
JobProfile parse_job_document(std::string_view json_text, std::string job_id = {});
std::string render_job_document(const JobProfile& profile);

struct JobSummary {
    std::string job_id;
    std::string name;
    std::size_t word_count = 0;
    std::size_t phrase_count = 0;

    bool operator==(const JobSummary&) const = default;
};

/// A directory of `<job_id>.json` documents. Writes go to a temporary file
/// in the same directory which is then renamed over the target, so readers
/// never observe a partial document.
class JobStore {
  public:
    struct Options {
        std::size_t max_phrase_len = kDefaultMaxPhraseLen;
        /// Test hook: abort the temp-file write with an IoError after this many bytes.
        std::optional<std::size_t> fail_write_after;
    };

    JobStore(std::filesystem::path dir, TextPipeline pipeline);
    JobStore(std::filesystem::path dir, TextPipeline pipeline, Options options);

    /// Validates, then stores. Returns the job id.
    std::string put(JobProfile profile, bool replace = false);
    JobProfile get(std::string_view job_id) const;
    std::vector<JobSummary> list() const;
    void remove(std::string_view job_id);
    bool contains(std::string_view job_id) const;

    const std::filesystem::path& dir() const noexcept { return dir_; }
    const TextPipeline& pipeline() const noexcept { return pipeline_; }
    Options& options() noexcept { return options_; }

  private:
    std::filesystem::path path_for(std::string_view job_id) const;
    void write_atomically(const std::filesystem::path& target, std::string_view bytes) const;

    std::filesystem::path dir_;
    TextPipeline pipeline_;
    Options options_;
};

/// Built-in sample KB: the Java Programmer record and three companion jobs.
std::vector<JobProfile> sample_jobs(const TextPipeline& pipeline);

}  // namespace cvrank
