#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvrank/lexnorm.hpp"
#include "cvrank/rank.hpp"
#include "cvrank/scoring.hpp"

namespace cvrank {

enum class Format { table, json, csv };

Format parse_format(std::string_view name);

/// Five decimals, as used for human-facing tables.
std::string format_display(double value);
/// Shortest text that parses back to the same double.
std::string format_exact(double value);

/// `header` goes on a leading '#' line in table output only.
std::string render_scores(const std::vector<ScoreBreakdown>& scores, std::string_view job_id, Format format,
                          std::string_view header = {});

/// `top_k` limits the applicable rows; N/A rows are then omitted and a
/// summary line is appended (table) or a "shown" count is added (json).
std::string render_ranking(const RankingReport& report, Format format, std::optional<std::size_t> top_k = {},
                           std::string_view header = {});

std::string render_stream(const LemmaStream& stream);

}  // namespace cvrank
