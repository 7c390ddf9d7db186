#include <cmath>

#include "cvrank/bench.hpp"
#include "cvrank/error.hpp"
#include "cvrank/pipeline.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace cvrank;
using cvrank::testing::TempDir;
using cvrank::testing::write_file;

namespace {

const TextPipeline& pipeline() {
    static const TextPipeline p;
    return p;
}

JobProfile single_word_job(const std::string& word) {
    JobProfile p;
    p.name = "Single";
    p.words = {{word, 4.0, {}}};
    return validate_profile(p, pipeline()).profile;
}

}  // namespace

TEST_CASE("score_directory runs the whole pipeline") {
    TempDir dir;
    write_file(dir / "resume1.txt", "java");
    write_file(dir / "resume2.txt", "");
    write_file(dir / "resume3.txt", "The Java programmers!");
    const auto jobs = sample_jobs(pipeline());
    const auto& java = jobs[1];
    REQUIRE(java.job_id == "java-programmer");

    const auto scores = score_directory(dir.path(), java, pipeline());
    REQUIRE(scores.size() == 3);
    CHECK(scores[0].resume_id == "resume1");
    CHECK(scores[0].total == 10.0);
    CHECK(scores[1].total == 0.0);
    // [java, programmer]: java 1/2 * 10, no phrase of length 2 matches.
    CHECK(scores[2].total == doctest::Approx(5.0));
}

TEST_CASE("worker count does not change results") {
    const auto jobs = sample_jobs(pipeline());
    SyntheticCorpusSpec spec{7, 40, 300, 0.2};
    const auto texts = generate_resume_texts(spec, jobs, pipeline());
    Corpus corpus;
    for (const auto& [id, text] : texts) corpus[id] = strip_text(text);

    const auto serial = normalize_corpus(corpus, pipeline(), 1);
    const auto parallel = normalize_corpus(corpus, pipeline(), 8);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].lemmas == parallel[i].lemmas);

    for (const auto& job : jobs) {
        const auto a = totals(score_streams(serial, job, 1));
        const auto b = totals(score_streams(parallel, job, 5));
        CHECK(a == b);
    }
}

TEST_CASE("filler vocabulary") {
    const auto& filler = filler_vocabulary();
    CHECK(filler.size() == 1000);
    const auto jobs = sample_jobs(pipeline());
    const auto pool = filler_pool(jobs, pipeline());
    CHECK(pool.size() == filler.size());
}

TEST_CASE("generate_corpus") {
    const auto jobs = sample_jobs(pipeline());
    SyntheticCorpusSpec spec{42, 5, 200, 0.1};

    SUBCASE("same seed gives byte-identical corpora") {
        TempDir a, b;
        const auto pa = generate_corpus(spec, jobs, pipeline(), a.path());
        const auto pb = generate_corpus(spec, jobs, pipeline(), b.path());
        REQUIRE(pa.size() == 5);
        CHECK(pa.front().filename() == "resume1.txt");
        for (std::size_t i = 0; i < pa.size(); ++i) {
            CHECK(cvrank::testing::read_file(pa[i]) == cvrank::testing::read_file(pb[i]));
        }
        spec.seed = 43;
        CHECK(generate_resume_texts(spec, jobs, pipeline())[0].second != cvrank::testing::read_file(pa[0]));
    }
    SUBCASE("token count survives normalization") {
        for (const auto& [id, text] : generate_resume_texts(spec, jobs, pipeline())) {
            CHECK(normalize_stream(id, strip_text(text), pipeline()).token_count() == 200);
        }
    }
    SUBCASE("density 0 scores nothing") {
        spec.keyword_density = 0.0;
        TempDir dir;
        generate_corpus(spec, jobs, pipeline(), dir.path());
        for (const auto& job : jobs) {
            for (const auto& s : score_directory(dir.path(), job, pipeline())) CHECK(s.total == 0.0);
        }
    }
    SUBCASE("density 1 with a single-word profile gives ac = 1") {
        spec.keyword_density = 1.0;
        const std::vector<JobProfile> single{single_word_job("Kotlin")};
        TempDir dir;
        generate_corpus(spec, single, pipeline(), dir.path());
        for (const auto& s : score_directory(dir.path(), single[0], pipeline())) {
            CHECK(s.word_details[0].ac == 1.0);
            CHECK(s.total == 4.0);
        }
    }
    SUBCASE("invalid specs") {
        spec.keyword_density = 1.5;
        CHECK_THROWS_AS(generate_resume_texts(spec, jobs, pipeline()), UsageError);
        spec.keyword_density = 0.1;
        spec.resume_count = 0;
        CHECK_THROWS_AS(generate_resume_texts(spec, jobs, pipeline()), UsageError);
    }
}

TEST_CASE("bench config validation") {
    BenchConfig c;
    CHECK_NOTHROW(c.validate());
    c.reps = 2;
    CHECK_THROWS_AS(c.validate(), UsageError);
    c.reps = 3;
    c.sizes = {10, 10};
    CHECK_THROWS_AS(c.validate(), UsageError);
    c.sizes = {};
    CHECK_THROWS_AS(c.validate(), UsageError);
}

TEST_CASE("fit_linear") {
    const std::vector<double> xs{10, 20, 30};
    const std::vector<double> ys{25, 45, 65};
    const auto fit = fit_linear(xs, ys);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(5.0));
    CHECK(fit.max_deviation_ratio == doctest::Approx(0.0));
}

TEST_CASE("run_bench produces a well-formed result") {
    BenchConfig c;
    c.sizes = {2, 4};
    c.reps = 3;
    c.tokens_per_resume = 100;
    const auto jobs = sample_jobs(pipeline());
    const auto r = run_bench(c, jobs, pipeline());
    REQUIRE(r.rows.size() == 2);
    CHECK(r.job_count == 4);
    for (const auto& row : r.rows) {
        CHECK(row.repetitions == 3);
        CHECK(row.mean_ms > 0.0);
        CHECK(row.scoring_mean_ms <= row.mean_ms);
    }
    CHECK(render_bench_table(r).find("size") != std::string::npos);
    CHECK(render_bench_json(r).find("\"per_resume_spread\"") != std::string::npos);
}
