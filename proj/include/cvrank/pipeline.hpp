#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cvrank/ingest.hpp"
#include "cvrank/kb.hpp"
#include "cvrank/lexnorm.hpp"
#include "cvrank/scoring.hpp"

namespace cvrank {

/// Per-resume work may fan out over `workers` threads (0 or 1 runs inline).
/// Results always come back in resume id order.
std::vector<LemmaStream> normalize_corpus(const Corpus& corpus, const TextPipeline& pipeline,
                                          std::size_t workers = 1);

std::vector<ScoreBreakdown> score_streams(const std::vector<LemmaStream>& streams, const JobProfile& profile,
                                          std::size_t workers = 1);

/// ingest -> normalize -> score for every file in `dir`.
std::vector<ScoreBreakdown> score_directory(const std::filesystem::path& dir, const JobProfile& profile,
                                            const TextPipeline& pipeline, std::size_t workers = 1);

std::map<std::string, double> totals(const std::vector<ScoreBreakdown>& scores);

}  // namespace cvrank
