#include "cvrank/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace cvrank {

namespace {

// Runs fn(i) for i in [0, n). Each index writes only its own output slot,
// so results land in input order regardless of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn&& fn) {
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<LemmaStream> normalize_corpus(const Corpus& corpus, const TextPipeline& pipeline, std::size_t workers) {
    std::vector<const Corpus::value_type*> items;
    items.reserve(corpus.size());
    for (const auto& item : corpus) items.push_back(&item);

    std::vector<LemmaStream> streams(items.size());
    parallel_for(items.size(), workers, [&](std::size_t i) {
        streams[i] = normalize_stream(items[i]->first, items[i]->second, pipeline);
    });
    return streams;
}

std::vector<ScoreBreakdown> score_streams(const std::vector<LemmaStream>& streams, const JobProfile& profile,
                                          std::size_t workers) {
    std::vector<ScoreBreakdown> out(streams.size());
    parallel_for(streams.size(), workers, [&](std::size_t i) { out[i] = resume_score(streams[i], profile); });
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.resume_id < b.resume_id; });
    return out;
}

std::vector<ScoreBreakdown> score_directory(const std::filesystem::path& dir, const JobProfile& profile,
                                            const TextPipeline& pipeline, std::size_t workers) {
    const Corpus corpus = ingest_corpus(dir, pipeline.policy);
    return score_streams(normalize_corpus(corpus, pipeline, workers), profile, workers);
}

std::map<std::string, double> totals(const std::vector<ScoreBreakdown>& scores) {
    std::map<std::string, double> out;
    for (const auto& s : scores) out.emplace(s.resume_id, s.total);
    return out;
}

}  // namespace cvrank
