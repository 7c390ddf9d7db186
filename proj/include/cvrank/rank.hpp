#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cvrank {

enum class Applicability { applicable, not_applicable };

/// Strict: applicable iff score > threshold. Throws DataError on NaN/inf.
Applicability classify(double score, double threshold = 0.0);

struct RankingEntry {
    std::string resume_id;
    double score = 0.0;
    std::optional<int> rank;  // empty means N/A

    bool applicable() const noexcept { return rank.has_value(); }
};

struct RankingReport {
    std::string job_id;
    double threshold = 0.0;
    /// Applicable entries by descending score (ties by id), then the N/A block by id.
    std::vector<RankingEntry> entries;

    std::size_t applicable_count() const;
};

RankingReport rank_resumes(const std::map<std::string, double>& scores, double threshold = 0.0,
                           std::string job_id = {});

/// resume id -> rank, nullopt for N/A.
using ReferenceRanking = std::map<std::string, std::optional<int>>;

struct Agreement {
    bool top_k = false;  // same set of resumes ranked 1..k
    bool exact = false;  // identical rank for every resume
    bool not_applicable = false;
};

/// Throws DataError when the id sets differ.
Agreement agreement(const RankingReport& report, const ReferenceRanking& reference, std::size_t k);

ReferenceRanking to_reference(const RankingReport& report);

}  // namespace cvrank
