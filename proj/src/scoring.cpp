#include "cvrank/scoring.hpp"

#include <algorithm>

#include "cvrank/error.hpp"

namespace cvrank {

namespace {

double ratio(std::size_t count, std::size_t denominator) {
    return denominator == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(denominator);
}

std::size_t window_count(std::size_t stream_len, std::size_t n) {
    return stream_len < n ? 0 : stream_len - n + 1;
}

}  // namespace

std::size_t word_count(LemmaView stream, const std::string& target) {
    return static_cast<std::size_t>(std::count(stream.begin(), stream.end(), target));
}

double word_ac(LemmaView stream, const std::string& target) {
    return ratio(word_count(stream, target), stream.size());
}

std::size_t kgram_count(LemmaView stream, LemmaView pattern) {
    const std::size_t k = pattern.size();
    if (k == 0) return 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i + k <= stream.size(); ++i) {
        if (std::equal(pattern.begin(), pattern.end(), stream.begin() + static_cast<std::ptrdiff_t>(i))) ++hits;
    }
    return hits;
}

double kgram_ac(LemmaView stream, LemmaView pattern) {
    if (pattern.empty()) return 0.0;
    return ratio(kgram_count(stream, pattern), window_count(stream.size(), pattern.size()));
}

std::vector<Lemmas> permutation_set(LemmaView phrase, std::size_t max_len) {
    if (phrase.empty()) throw LimitError("phrase must contain at least one lemma");
    if (phrase.size() > max_len) {
        throw LimitError("phrase of " + std::to_string(phrase.size()) + " lemmas exceeds the limit of " +
                         std::to_string(max_len));
    }
    Lemmas current(phrase.begin(), phrase.end());
    std::sort(current.begin(), current.end());
    std::vector<Lemmas> out;
    do {
        out.push_back(current);
    } while (std::next_permutation(current.begin(), current.end()));
    return out;
}

std::size_t phrase_count(LemmaView stream, LemmaView phrase) {
    const std::size_t n = phrase.size();
    if (n == 0 || stream.size() < n) return 0;

    // Distinct phrase lemmas with required multiplicities. Phrases are short,
    // so a linear scan beats hashing.
    struct Slot {
        const std::string* lemma;
        int need;
        int have;
    };
    std::vector<Slot> slots;
    for (const auto& lemma : phrase) {
        auto it = std::find_if(slots.begin(), slots.end(), [&](const Slot& s) { return *s.lemma == lemma; });
        if (it == slots.end()) {
            slots.push_back({&lemma, 1, 0});
        } else {
            ++it->need;
        }
    }
    auto slot_of = [&](const std::string& lemma) -> Slot* {
        for (auto& s : slots) {
            if (*s.lemma == lemma) return &s;
        }
        return nullptr;
    };

    // The window matches when it holds no foreign lemma and every slot has
    // exactly its required count.
    std::size_t foreign = 0;
    std::size_t unsatisfied = slots.size();
    auto add = [&](const std::string& lemma, int delta) {
        Slot* s = slot_of(lemma);
        if (s == nullptr) {
            foreign = delta > 0 ? foreign + 1 : foreign - 1;
            return;
        }
        const bool was_ok = s->have == s->need;
        s->have += delta;
        const bool is_ok = s->have == s->need;
        if (was_ok && !is_ok) ++unsatisfied;
        if (!was_ok && is_ok) --unsatisfied;
    };

    std::size_t hits = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        add(stream[i], +1);
        if (i >= n) add(stream[i - n], -1);
        if (i + 1 >= n && foreign == 0 && unsatisfied == 0) ++hits;
    }
    return hits;
}

double phrase_ac(LemmaView stream, LemmaView phrase) {
    if (phrase.empty()) return 0.0;
    return ratio(phrase_count(stream, phrase), window_count(stream.size(), phrase.size()));
}

ScoreBreakdown resume_score(const LemmaStream& stream, const JobProfile& profile) {
    ScoreBreakdown out;
    out.resume_id = stream.resume_id;
    out.job_id = profile.job_id;
    const LemmaView lemmas(stream.lemmas);

    out.word_details.reserve(profile.words.size());
    for (const auto& entry : profile.words) {
        WordDetail d;
        d.term = entry.term;
        d.score = entry.score;
        if (entry.normalized.size() == 1) {
            d.count = word_count(lemmas, entry.normalized.front());
            d.denominator = lemmas.size();
        } else if (!entry.normalized.empty()) {
            d.count = kgram_count(lemmas, entry.normalized);
            d.denominator = window_count(lemmas.size(), entry.normalized.size());
        }
        d.ac = ratio(d.count, d.denominator);
        d.contribution = d.ac * d.score;
        out.word_component += d.contribution;
        out.word_details.push_back(std::move(d));
    }

    out.phrase_details.reserve(profile.phrases.size());
    for (const auto& entry : profile.phrases) {
        PhraseDetail d;
        d.phrase = entry.phrase;
        d.score = entry.score;
        d.count = phrase_count(lemmas, entry.normalized);
        d.windows = entry.normalized.empty() ? 0 : window_count(lemmas.size(), entry.normalized.size());
        d.ac = ratio(d.count, d.windows);
        d.contribution = d.ac * d.score;
        out.phrase_component += d.contribution;
        out.phrase_details.push_back(std::move(d));
    }

    out.total = out.word_component + out.phrase_component;
    return out;
}

}  // namespace cvrank
