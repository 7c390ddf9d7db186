#include <algorithm>
#include <limits>

#include "cvrank/embedded_data.hpp"
#include "cvrank/error.hpp"
#include "cvrank/kb.hpp"
#include "doctest.h"
#include "support/test_support.hpp"

using namespace cvrank;
using cvrank::testing::Gen;
using cvrank::testing::TempDir;

namespace {

const char* const kJavaProgrammer = R"({
  "name": "Java Programmer",
  "words": [
    {"word": "Java ", "score": 10},
    {"word": "JSF ", "score": 10},
    {"word": "J2EE ", "score": 10},
    {"word": "C/C++ ", "score": 5},
    {"word": "SQL ", "score": 8}
  ],
  "phrases": [
    {"phrase": "Oracle Database", "score": 7.5},
    {"phrase": "professional java programmer", "score": 9}
  ]
})";

const TextPipeline& pipeline() {
    static const TextPipeline p;
    return p;
}

bool has_problem(const ValidationError& e, std::string_view needle) {
    return std::any_of(e.problems().begin(), e.problems().end(),
                       [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

JobProfile random_profile(Gen& gen) {
    static const std::vector<std::string> words{"Java", "SQL", "Linux", "C/C++", "Docker", "AWS", "Go", "Rust",
                                                "Kafka", "Spark", "React", "node.js", "Hyper-V", "PMP"};
    static const std::vector<std::string> tails{"design", "testing", "management", "database", "cloud",
                                                "security", "networks", "teams", "delivery", "architecture"};
    JobProfile p;
    p.name = "Job " + std::to_string(gen.below(100000));
    std::vector<std::string> shuffled = words;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[gen.below(i)]);
    for (std::size_t i = 0, n = gen.below(6); i < n; ++i) {
        // Scores with awkward binary expansions to exercise number round-trips.
        p.words.push_back({shuffled[i], static_cast<double>(gen.below(1000)) / 7.0, {}});
    }
    std::vector<std::string> used;
    for (std::size_t i = 0, n = gen.below(4); i < n; ++i) {
        std::string phrase = gen.pick(words) + " " + gen.pick(tails);
        if (gen.coin()) phrase += " " + gen.pick(tails);
        if (std::find(used.begin(), used.end(), phrase) != used.end()) continue;
        used.push_back(phrase);
        p.phrases.push_back({phrase, gen.unit() * 10.0, {}});
    }
    return p;
}

}  // namespace

TEST_CASE("slugify") {
    CHECK(slugify("Java Programmer") == "java-programmer");
    CHECK(slugify("  IT  Project / Manager ") == "it-project-manager");
    CHECK(slugify("++").empty());
}

TEST_CASE("validate_profile accepts the Java Programmer record") {
    const auto report = validate_profile(parse_job_document(kJavaProgrammer), pipeline());
    const auto& p = report.profile;
    CHECK(p.job_id == "java-programmer");
    REQUIRE(p.words.size() == 5);
    CHECK(p.words[0].term == "Java ");
    CHECK(p.words[0].normalized == Lemmas{"java"});
    CHECK(p.words[3].normalized == Lemmas{"c", "c"});
    CHECK(p.words[4].score == 8.0);
    REQUIRE(p.phrases.size() == 2);
    CHECK(p.phrases[0].score == 7.5);
    CHECK(p.phrases[1].normalized == Lemmas{"professional", "java", "programmer"});
    // The multi-token word entry is accepted with a warning.
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].find("C/C++") != std::string::npos);
}

TEST_CASE("validate_profile reports every problem at once") {
    JobProfile p;
    p.name = "Broken";
    p.words = {{"++", 3, {}}, {"Java", -1, {}}, {"java", 2, {}}, {"", 1, {}}};
    p.phrases = {{"alpha beta gamma delta epsilon zeta eta", 1, {}}, {"oracle databases", 1, {}}, {"Oracle Database", 2, {}}};
    try {
        validate_profile(p, pipeline());
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(has_problem(e, "words[0] '++': empty normalization"));
        CHECK(has_problem(e, "words[1] 'Java': score -1"));
        CHECK(has_problem(e, "words[2] 'java': duplicate of words[1]"));
        CHECK(has_problem(e, "words[3] '': empty term"));
        CHECK(has_problem(e, "phrases[0]"));
        CHECK(has_problem(e, "phrases[2] 'Oracle Database': duplicate of phrases[1]"));
        CHECK(e.problems().size() == 6);
    }
}

TEST_CASE("validate_profile checks scores and names") {
    JobProfile p;
    p.words = {{"Java", std::numeric_limits<double>::infinity(), {}}};
    try {
        validate_profile(p, pipeline());
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(has_problem(e, "name is empty"));
        CHECK(has_problem(e, "non-negative finite"));
    }
    JobProfile named;
    named.name = "Tester";
    named.job_id = "Bad Id";
    CHECK_THROWS_AS(validate_profile(named, pipeline()), ValidationError);
}

TEST_CASE("phrase length limit is configurable") {
    JobProfile p;
    p.name = "Long";
    p.phrases = {{"alpha beta gamma delta", 1, {}}};
    CHECK_NOTHROW(validate_profile(p, pipeline()));
    CHECK_THROWS_AS(validate_profile(p, pipeline(), 3), ValidationError);
}

TEST_CASE("parse_job_document schema errors") {
    CHECK_THROWS_AS(parse_job_document("not json"), DataError);
    CHECK_THROWS_AS(parse_job_document("[]"), DataError);
    CHECK_THROWS_AS(parse_job_document(R"({"name": "x", "words": [{"word": "a"}]})"), ValidationError);
    CHECK_THROWS_AS(parse_job_document(R"({"name": "x", "words": [{"word": "a", "score": "7"}]})"), ValidationError);
    CHECK_THROWS_AS(parse_job_document(R"({"name": "x", "extra": 1})"), ValidationError);
    CHECK_NOTHROW(parse_job_document(R"({"name": "x"})"));
}

TEST_CASE("stored document uses exactly the name/words/phrases fields") {
    const auto p = validate_profile(parse_job_document(kJavaProgrammer), pipeline()).profile;
    const std::string doc = render_job_document(p);
    CHECK(doc.find("\"name\"") != std::string::npos);
    CHECK(doc.find("\"word\": \"Java \"") != std::string::npos);
    CHECK(doc.find("\"phrase\": \"Oracle Database\"") != std::string::npos);
    CHECK(doc.find("normalized") == std::string::npos);
    CHECK(parse_job_document(doc, p.job_id).words.size() == 5);
}

TEST_CASE("JobStore put/get/list/remove") {
    TempDir dir;
    JobStore store(dir / "kb", pipeline());
    CHECK(store.list().empty());
    CHECK_THROWS_AS(store.get("nope"), NotFoundError);

    const auto expected = validate_profile(parse_job_document(kJavaProgrammer), pipeline()).profile;
    CHECK(store.put(parse_job_document(kJavaProgrammer)) == "java-programmer");
    CHECK(store.get("java-programmer") == expected);
    CHECK(store.list() == std::vector<JobSummary>{{"java-programmer", "Java Programmer", 5, 2}});

    SUBCASE("conflict without replace") {
        CHECK_THROWS_AS(store.put(parse_job_document(kJavaProgrammer)), ConflictError);
        auto changed = parse_job_document(kJavaProgrammer);
        changed.words.pop_back();
        CHECK(store.put(changed, true) == "java-programmer");
        CHECK(store.get("java-programmer").words.size() == 4);
    }
    SUBCASE("explicit id") {
        auto p = parse_job_document(kJavaProgrammer);
        p.job_id = "java2";
        CHECK(store.put(p) == "java2");
        CHECK(store.list().size() == 2);
        CHECK(store.list()[1].job_id == "java2");
    }
    SUBCASE("invalid profiles never reach the store") {
        JobProfile bad;
        bad.name = "Bad";
        bad.words = {{"++", 1, {}}};
        CHECK_THROWS_AS(store.put(bad), ValidationError);
        CHECK(store.list().size() == 1);
    }
    SUBCASE("remove") {
        store.remove("java-programmer");
        CHECK(store.list().empty());
        CHECK_THROWS_AS(store.remove("java-programmer"), NotFoundError);
    }
    SUBCASE("ids that are not filenames are treated as missing") {
        CHECK_THROWS_AS(store.get("../etc/passwd"), NotFoundError);
        CHECK_FALSE(store.contains("../x"));
    }
}

TEST_CASE("an aborted write leaves the previous document intact") {
    TempDir dir;
    JobStore store(dir.path(), pipeline());
    store.put(parse_job_document(kJavaProgrammer));
    const std::string before = cvrank::testing::read_file(dir / "java-programmer.json");

    auto changed = parse_job_document(kJavaProgrammer);
    changed.words.resize(1);
    for (std::size_t cut : {std::size_t{0}, std::size_t{1}, std::size_t{40}, before.size() - 1}) {
        store.options().fail_write_after = cut;
        CHECK_THROWS_AS(store.put(changed, true), IoError);
        CHECK(cvrank::testing::read_file(dir / "java-programmer.json") == before);
    }
    store.options().fail_write_after.reset();

    // Only the job document remains; no temp files are left behind.
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir.path())) ++files;
    CHECK(files == 1);

    // A failed first write leaves nothing at all.
    auto other = parse_job_document(kJavaProgrammer);
    other.job_id = "fresh";
    store.options().fail_write_after = 10;
    CHECK_THROWS_AS(store.put(other), IoError);
    CHECK_FALSE(store.contains("fresh"));
}

TEST_CASE("round-trip holds for generated profiles") {
    TempDir dir;
    JobStore store(dir.path(), pipeline());
    Gen gen(99);
    for (int i = 0; i < 200; ++i) {
        JobProfile p = random_profile(gen);
        p.job_id = "job-" + std::to_string(i);
        ValidationReport report;
        try {
            report = validate_profile(p, pipeline());
        } catch (const ValidationError&) {
            continue;  // e.g. "Go" and "go" style duplicates
        }
        store.put(p);
        REQUIRE(store.get(p.job_id) == report.profile);
    }
    CHECK(store.list().size() > 150);
}

TEST_CASE("sample KB validates") {
    const auto jobs = sample_jobs(pipeline());
    REQUIRE(jobs.size() == 4);
    CHECK(jobs[0].job_id == "it-project-manager");
    CHECK(jobs[1].job_id == "java-programmer");
    for (const auto& j : jobs) CHECK(slugify(j.name) == j.job_id);
}
