#pragma once

// Brute-force reference evaluator. Deliberately shares no code with the
// library: permutations are enumerated explicitly over index orderings and
// every count is a plain nested loop.

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace cvrank::oracle {

using Seq = std::vector<std::string>;

inline void enumerate(const Seq& items, std::vector<bool>& used, Seq& current, std::set<Seq>& out,
                      std::size_t& raw_count) {
    if (current.size() == items.size()) {
        ++raw_count;
        out.insert(current);
        return;
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        current.push_back(items[i]);
        enumerate(items, used, current, out, raw_count);
        current.pop_back();
        used[i] = false;
    }
}

/// All n! orderings, deduplicated. `raw_count` receives n!.
inline std::set<Seq> permutations(const Seq& phrase, std::size_t* raw_count = nullptr) {
    std::set<Seq> out;
    std::vector<bool> used(phrase.size(), false);
    Seq current;
    std::size_t raw = 0;
    enumerate(phrase, used, current, out, raw);
    if (raw_count) *raw_count = raw;
    return out;
}

inline Seq window(const Seq& stream, std::size_t start, std::size_t n) {
    Seq out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(stream[start + j]);
    return out;
}

inline double word_ac(const Seq& stream, const std::string& word) {
    if (stream.empty()) return 0.0;
    std::size_t hits = 0;
    for (const auto& s : stream) {
        if (s == word) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(stream.size());
}

inline double kgram_ac(const Seq& stream, const Seq& pattern) {
    if (pattern.empty() || stream.size() < pattern.size()) return 0.0;
    const std::size_t windows = stream.size() - pattern.size() + 1;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < windows; ++i) {
        if (window(stream, i, pattern.size()) == pattern) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(windows);
}

/// Windows that equal one of the phrase's permutations / all n-windows.
inline double phrase_ac(const Seq& stream, const Seq& phrase) {
    if (phrase.empty() || stream.size() < phrase.size()) return 0.0;
    const auto perms = permutations(phrase);
    const std::size_t windows = stream.size() - phrase.size() + 1;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < windows; ++i) {
        if (perms.count(window(stream, i, phrase.size())) != 0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(windows);
}

struct Entry {
    Seq lemmas;
    double score;
};

/// Sum of ac * s over word entries (single lemma -> word count, longer ->
/// ordered k-gram) plus phrase entries (permutation windows).
inline double resume_score(const Seq& stream, const std::vector<Entry>& words, const std::vector<Entry>& phrases) {
    double word_part = 0.0;
    for (const auto& w : words) {
        const double ac = w.lemmas.size() == 1 ? word_ac(stream, w.lemmas[0]) : kgram_ac(stream, w.lemmas);
        word_part += ac * w.score;
    }
    double phrase_part = 0.0;
    for (const auto& p : phrases) phrase_part += phrase_ac(stream, p.lemmas) * p.score;
    return word_part + phrase_part;
}

}  // namespace cvrank::oracle
