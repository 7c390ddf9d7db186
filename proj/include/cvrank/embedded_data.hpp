#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace cvrank::embedded {

std::string_view stopwords();
std::string_view lemma_exceptions();
std::string_view filler_words();
/// (file stem, document) for each data/jobs/*.json.
const std::vector<std::pair<std::string_view, std::string_view>>& sample_jobs();

}  // namespace cvrank::embedded
