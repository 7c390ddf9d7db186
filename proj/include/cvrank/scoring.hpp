#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cvrank/kb.hpp"
#include "cvrank/lexnorm.hpp"

namespace cvrank {

using LemmaView = std::span<const std::string>;

struct WordDetail {
    std::string term;
    std::size_t count = 0;        // matching positions (k-gram windows for multi-lemma terms)
    std::size_t denominator = 0;  // token count, or k-window count
    double ac = 0.0;
    double score = 0.0;
    double contribution = 0.0;
};

struct PhraseDetail {
    std::string phrase;
    std::size_t count = 0;    // windows that are a permutation of the phrase
    std::size_t windows = 0;  // n-windows in the stream
    double ac = 0.0;
    double score = 0.0;
    double contribution = 0.0;
};

struct ScoreBreakdown {
    std::string resume_id;
    std::string job_id;
    double word_component = 0.0;
    double phrase_component = 0.0;
    double total = 0.0;
    std::vector<WordDetail> word_details;
    std::vector<PhraseDetail> phrase_details;
};

std::size_t word_count(LemmaView stream, const std::string& target);

/// count / token count; 0 for an empty stream.
double word_ac(LemmaView stream, const std::string& target);

/// Number of length-k windows equal to the pattern (overlaps included).
std::size_t kgram_count(LemmaView stream, LemmaView pattern);

/// kgram_count / (T - k + 1); 0 when the stream is shorter than the pattern.
double kgram_ac(LemmaView stream, LemmaView pattern);

/// Distinct orderings of the phrase lemmas, lexicographically sorted.
/// Throws LimitError when the phrase is empty or longer than max_len.
std::vector<Lemmas> permutation_set(LemmaView phrase, std::size_t max_len = kDefaultMaxPhraseLen);

/// Number of n-windows whose lemma multiset equals the phrase's multiset,
/// i.e. windows that are some permutation of the phrase.
std::size_t phrase_count(LemmaView stream, LemmaView phrase);

/// phrase_count / (T - n + 1); 0 when there are no n-windows.
double phrase_ac(LemmaView stream, LemmaView phrase);

/// Weighted sum of word and phrase appearance coefficients. The profile
/// must be validated. Details follow profile entry order and components
/// accumulate left to right in that order.
ScoreBreakdown resume_score(const LemmaStream& stream, const JobProfile& profile);

}  // namespace cvrank
