#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cvrank/ingest.hpp"

namespace cvrank {

using Lemmas = std::vector<std::string>;

struct LemmaStream {
    std::string resume_id;
    Lemmas lemmas;

    /// Denominator of the word appearance coefficient.
    std::size_t token_count() const noexcept { return lemmas.size(); }
};

class StopwordSet {
  public:
    StopwordSet() = default;
    explicit StopwordSet(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// One token per line, '#' starts a comment, blank lines ignored.
    static StopwordSet parse(std::string_view text);
    static StopwordSet load(const std::filesystem::path& path);
    /// The shipped list (data/stopwords.txt).
    static const StopwordSet& english();

    bool contains(std::string_view token) const { return words_.count(std::string(token)) != 0; }
    std::size_t size() const noexcept { return words_.size(); }
    const std::unordered_set<std::string>& words() const noexcept { return words_; }

  private:
    std::unordered_set<std::string> words_;
};

/// One suffix-stripping rule. A rule fires when the token ends with `suffix`
/// and the remaining stem is at least `min_stem` bytes long (and contains a
/// vowel if `needs_vowel`). With `repair_stem` the stem gets the usual
/// English cleanup after "-ed"/"-ing" removal: "at"/"bl"/"iz" gain an "e",
/// doubled consonants other than l/s/z are undoubled, and short
/// consonant-vowel-consonant stems gain an "e".
struct SuffixRule {
    std::string suffix;
    std::string replacement;
    std::size_t min_stem = 0;
    bool needs_vowel = false;
    bool repair_stem = false;
};

/// Exceptions table plus an ordered first-match suffix rule list.
///
/// Lemmatization is iterated to a fixed point, so the result of
/// lemmatize() is always stable under another application. Tables whose
/// exceptions cycle are rejected at construction.
class LemmaRules {
  public:
    LemmaRules(std::unordered_map<std::string, std::string> exceptions, std::vector<SuffixRule> suffix_rules);

    /// `form<TAB>lemma` per line, '#' comments allowed.
    static std::unordered_map<std::string, std::string> parse_exceptions(std::string_view text);
    static LemmaRules with_exceptions_file(const std::filesystem::path& path);
    /// Shipped exceptions (data/lemma_exceptions.txt) with default_suffix_rules().
    static const LemmaRules& english();
    static std::vector<SuffixRule> default_suffix_rules();

    std::string lemmatize(std::string_view token) const;

    const std::unordered_map<std::string, std::string>& exceptions() const noexcept { return exceptions_; }
    const std::vector<SuffixRule>& suffix_rules() const noexcept { return suffix_rules_; }

  private:
    /// One rewrite step; returns the input unchanged when nothing applies.
    std::string step(const std::string& token) const;

    std::unordered_map<std::string, std::string> exceptions_;
    std::vector<SuffixRule> suffix_rules_;
};

/// Everything needed to turn text into lemmas. Shared by the resume side and
/// the knowledge-base side so both normalize identically.
struct TextPipeline {
    NormalizationPolicy policy;
    LemmaRules rules = LemmaRules::english();
    StopwordSet stops = StopwordSet::english();
};

std::vector<std::string> tokenize(std::string_view stripped);

std::string lemmatize_token(std::string_view token, const LemmaRules& rules);

/// tokenize -> drop stopwords -> lemmatize -> drop stopwords.
LemmaStream normalize_stream(std::string resume_id, std::string_view stripped, const LemmaRules& rules,
                             const StopwordSet& stops);

/// strip_text followed by the normalize_stream pipeline, for KB terms.
Lemmas normalize_term(std::string_view term, const LemmaRules& rules, const StopwordSet& stops,
                      const NormalizationPolicy& policy = {});

inline LemmaStream normalize_stream(std::string resume_id, std::string_view stripped, const TextPipeline& p) {
    return normalize_stream(std::move(resume_id), stripped, p.rules, p.stops);
}

inline Lemmas normalize_term(std::string_view term, const TextPipeline& p) {
    return normalize_term(term, p.rules, p.stops, p.policy);
}

}  // namespace cvrank
