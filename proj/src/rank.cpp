#include "cvrank/rank.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cvrank/error.hpp"

namespace cvrank {

Applicability classify(double score, double threshold) {
    if (!std::isfinite(score)) throw DataError("score is not finite");
    return score > threshold ? Applicability::applicable : Applicability::not_applicable;
}

std::size_t RankingReport::applicable_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [](const RankingEntry& e) { return e.applicable(); }));
}

RankingReport rank_resumes(const std::map<std::string, double>& scores, double threshold, std::string job_id) {
    if (std::isnan(threshold)) throw DataError("threshold is NaN");
    RankingReport report{std::move(job_id), threshold, {}};
    std::vector<RankingEntry> applicable;
    std::vector<RankingEntry> rejected;
    // std::map iterates by id, which gives the N/A block its order for free.
    for (const auto& [id, score] : scores) {
        if (!std::isfinite(score)) throw DataError("score of '" + id + "' is not finite");
        auto& bucket = classify(score, threshold) == Applicability::applicable ? applicable : rejected;
        bucket.push_back({id, score, std::nullopt});
    }
    std::stable_sort(applicable.begin(), applicable.end(),
                     [](const RankingEntry& a, const RankingEntry& b) { return a.score > b.score; });
    int rank = 0;
    for (auto& e : applicable) e.rank = ++rank;

    report.entries = std::move(applicable);
    report.entries.insert(report.entries.end(), rejected.begin(), rejected.end());
    return report;
}

ReferenceRanking to_reference(const RankingReport& report) {
    ReferenceRanking out;
    for (const auto& e : report.entries) out.emplace(e.resume_id, e.rank);
    return out;
}

Agreement agreement(const RankingReport& report, const ReferenceRanking& reference, std::size_t k) {
    const ReferenceRanking mine = to_reference(report);
    if (mine.size() != reference.size() ||
        !std::equal(mine.begin(), mine.end(), reference.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; })) {
        throw DataError("report and reference cover different resumes");
    }

    auto top = [k](const ReferenceRanking& r) {
        std::set<std::string> ids;
        for (const auto& [id, rank] : r) {
            if (rank && *rank >= 1 && static_cast<std::size_t>(*rank) <= k) ids.insert(id);
        }
        return ids;
    };
    auto na = [](const ReferenceRanking& r) {
        std::set<std::string> ids;
        for (const auto& [id, rank] : r) {
            if (!rank) ids.insert(id);
        }
        return ids;
    };

    return Agreement{top(mine) == top(reference), mine == reference, na(mine) == na(reference)};
}

}  // namespace cvrank
