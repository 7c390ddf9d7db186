#include <cmath>

#include "cvrank/error.hpp"
#include "cvrank/scoring.hpp"
#include "doctest.h"
#include "support/oracle.hpp"
#include "support/test_support.hpp"

using namespace cvrank;
using cvrank::testing::Gen;

namespace {

JobProfile profile_of(std::vector<std::pair<Lemmas, double>> words, std::vector<std::pair<Lemmas, double>> phrases) {
    JobProfile p;
    p.job_id = "job";
    p.name = "Job";
    for (auto& [lemmas, s] : words) p.words.push_back({lemmas.front(), s, lemmas});
    for (auto& [lemmas, s] : phrases) p.phrases.push_back({lemmas.front(), s, lemmas});
    return p;
}

LemmaStream stream_of(Lemmas lemmas) { return LemmaStream{"r", std::move(lemmas)}; }

}  // namespace

TEST_CASE("word_count and word_ac") {
    const Lemmas s{"java", "sql", "java"};
    CHECK(word_count(s, "java") == 2);
    CHECK(word_count(Lemmas{}, "java") == 0);
    CHECK(word_count(Lemmas{"c", "c"}, "c") == 2);
    CHECK(word_ac(s, "java") == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(word_ac(Lemmas{}, "java") == 0.0);
    CHECK(word_ac(Lemmas{"java"}, "java") == 1.0);
}

TEST_CASE("kgram_ac") {
    CHECK(kgram_ac(Lemmas{"c", "c", "c"}, Lemmas{"c", "c"}) == 1.0);
    CHECK(kgram_count(Lemmas{"c", "c", "c"}, Lemmas{"c", "c"}) == 2);
    CHECK(kgram_ac(Lemmas{"a", "b"}, Lemmas{"b", "a"}) == 0.0);
    CHECK(kgram_ac(Lemmas{"a"}, Lemmas{"a", "b"}) == 0.0);
}

TEST_CASE("permutation_set") {
    CHECK(permutation_set(Lemmas{"oracle", "database"}) ==
          std::vector<Lemmas>{{"database", "oracle"}, {"oracle", "database"}});
    CHECK(permutation_set(Lemmas{"a", "a"}) == std::vector<Lemmas>{{"a", "a"}});
    CHECK(permutation_set(Lemmas{"p", "j", "p2"}).size() == 6);
    CHECK(permutation_set(Lemmas{"a", "b", "c", "d", "e", "f"}).size() == 720);
    CHECK(permutation_set(Lemmas{"a", "a", "b", "b", "c"}).size() == 30);
    CHECK_THROWS_AS(permutation_set(Lemmas{"a", "b", "c", "d", "e", "f", "g"}), LimitError);
    CHECK_THROWS_AS(permutation_set(Lemmas{}), LimitError);
    CHECK(permutation_set(Lemmas{"a", "b", "c", "d", "e", "f", "g"}, 7).size() == 5040);
}

TEST_CASE("phrase_ac examples") {
    const Lemmas phrase{"oracle", "database"};
    CHECK(phrase_ac(Lemmas{"java", "oracle", "database", "java"}, phrase) == doctest::Approx(1.0 / 3.0));
    CHECK(phrase_ac(Lemmas{"database", "oracle"}, phrase) == 1.0);
    CHECK(phrase_ac(Lemmas{"oracle"}, phrase) == 0.0);
    // A repeated lemma inside the phrase counts each matching window once.
    CHECK(phrase_count(Lemmas{"a", "a", "a"}, Lemmas{"a", "a"}) == 2);
    CHECK(phrase_count(Lemmas{"a", "b", "a", "b"}, Lemmas{"a", "a"}) == 0);
}

TEST_CASE("resume_score example matches the brute-force evaluator") {
    const Lemmas lemmas{"java", "oracle", "database", "java"};
    const auto profile = profile_of({{{"java"}, 10.0}}, {{{"oracle", "database"}, 7.5}});
    const double expected = oracle::resume_score(lemmas, {{{"java"}, 10.0}}, {{{"oracle", "database"}, 7.5}});
    REQUIRE(expected == doctest::Approx(7.5).epsilon(1e-15));

    const auto b = resume_score(stream_of(lemmas), profile);
    CHECK(b.word_component == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(b.phrase_component == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(std::abs(b.total - expected) <= 1e-12);
    REQUIRE(b.word_details.size() == 1);
    CHECK(b.word_details[0].count == 2);
    CHECK(b.word_details[0].denominator == 4);
    REQUIRE(b.phrase_details.size() == 1);
    CHECK(b.phrase_details[0].count == 1);
    CHECK(b.phrase_details[0].windows == 3);
    CHECK(b.phrase_details[0].contribution == doctest::Approx(2.5));
}

TEST_CASE("resume_score degenerate cases") {
    const auto profile = profile_of({{{"java"}, 10.0}, {{"c", "c"}, 5.0}}, {{{"oracle", "database"}, 7.5}});
    const auto empty = resume_score(stream_of({}), profile);
    CHECK(empty.total == 0.0);
    const auto none = resume_score(stream_of({"python", "go", "rust"}), profile);
    CHECK(none.total == 0.0);
    for (const auto& d : none.word_details) CHECK(d.contribution == 0.0);
    for (const auto& d : none.phrase_details) CHECK(d.contribution == 0.0);
    const auto kgram = resume_score(stream_of({"c", "c", "java"}), profile);
    CHECK(kgram.word_details[1].count == 1);
    CHECK(kgram.word_details[1].denominator == 2);
}

TEST_CASE("multiset window counting equals explicit permutation enumeration") {
    Gen gen(2024);
    const auto vocab = cvrank::testing::vocabulary(6);
    for (int i = 0; i < 1000; ++i) {
        const auto stream = gen.stream(vocab, 30);
        Lemmas phrase(gen.between(1, 4));
        for (auto& l : phrase) l = gen.pick(vocab);
        const double expected = oracle::phrase_ac(stream, phrase);

        double via_set = 0.0;
        if (stream.size() >= phrase.size()) {
            const auto perms = permutation_set(phrase);
            std::size_t hits = 0;
            for (std::size_t w = 0; w + phrase.size() <= stream.size(); ++w) {
                const Lemmas window(stream.begin() + static_cast<std::ptrdiff_t>(w),
                                    stream.begin() + static_cast<std::ptrdiff_t>(w + phrase.size()));
                if (std::binary_search(perms.begin(), perms.end(), window)) ++hits;
            }
            via_set = static_cast<double>(hits) / static_cast<double>(stream.size() - phrase.size() + 1);
        }
        REQUIRE(phrase_ac(stream, phrase) == expected);
        REQUIRE(via_set == expected);
    }
}

TEST_CASE("score properties") {
    Gen gen(17);
    const auto vocab = cvrank::testing::vocabulary(10);
    for (int i = 0; i < 300; ++i) {
        JobProfile p;
        p.job_id = "j";
        double score_sum = 0.0;
        std::vector<oracle::Entry> ow, op;
        for (std::size_t k = gen.below(5); k > 0; --k) {
            Lemmas l(gen.coin() ? 1 : 2);
            for (auto& x : l) x = gen.pick(vocab);
            const double s = gen.unit() * 10;
            p.words.push_back({l[0], s, l});
            ow.push_back({l, s});
            score_sum += s;
        }
        for (std::size_t k = gen.below(4); k > 0; --k) {
            Lemmas l(gen.between(1, 3));
            for (auto& x : l) x = gen.pick(vocab);
            const double s = gen.unit() * 10;
            p.phrases.push_back({l[0], s, l});
            op.push_back({l, s});
            score_sum += s;
        }
        const auto stream = stream_of(gen.stream(vocab, 30));
        const auto b = resume_score(stream, p);

        CHECK(b.total == b.word_component + b.phrase_component);
        CHECK(b.total >= 0.0);
        CHECK(b.total <= score_sum + 1e-12);
        CHECK(std::abs(b.total - oracle::resume_score(stream.lemmas, ow, op)) <= 1e-12);
        for (const auto& d : b.word_details) {
            CHECK(d.ac >= 0.0);
            CHECK(d.ac <= 1.0);
            CHECK(d.contribution == d.ac * d.score);
        }
        for (const auto& d : b.phrase_details) {
            CHECK(d.ac >= 0.0);
            CHECK(d.ac <= 1.0);
            CHECK(d.count <= d.windows);
        }
    }
}

TEST_CASE("appending a keyword raises the score when it is not already everything") {
    Gen gen(23);
    const auto vocab = cvrank::testing::vocabulary(8);
    int checked = 0;
    while (checked < 200) {
        Lemmas lemmas = gen.stream(vocab, 30);
        const std::string w = gen.pick(vocab);
        const auto profile = profile_of({{{w}, 1.0 + gen.unit() * 9}}, {});
        const std::size_t k = word_count(lemmas, w);
        if (lemmas.empty() || k == lemmas.size()) continue;
        const double before = resume_score(stream_of(lemmas), profile).total;
        lemmas.insert(lemmas.begin() + static_cast<std::ptrdiff_t>(gen.below(lemmas.size() + 1)), w);
        REQUIRE(resume_score(stream_of(lemmas), profile).total > before);
        ++checked;
    }
}
