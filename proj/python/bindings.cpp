#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cvrank/bench.hpp"
#include "cvrank/error.hpp"
#include "cvrank/ingest.hpp"
#include "cvrank/kb.hpp"
#include "cvrank/lexnorm.hpp"
#include "cvrank/pipeline.hpp"
#include "cvrank/rank.hpp"
#include "cvrank/scoring.hpp"

namespace py = pybind11;
using namespace cvrank;

namespace {

using Strings = std::vector<std::string>;

CharClass parse_class(const std::string& name) {
    if (name == "ascii") return CharClass::ascii;
    if (name == "unicode") return CharClass::unicode;
    throw UsageError("char_class must be 'ascii' or 'unicode'");
}

TextPipeline make_pipeline(const std::string& char_class, bool case_fold, std::optional<std::filesystem::path> stopwords,
                           std::optional<std::filesystem::path> lemma_exceptions,
                           std::optional<std::string> converter) {
    TextPipeline p;
    p.policy.alphanumeric_class = parse_class(char_class);
    p.policy.case_fold = case_fold;
    p.policy.converter_command = std::move(converter);
    p.policy.validate();
    if (stopwords) p.stops = StopwordSet::load(*stopwords);
    if (lemma_exceptions) p.rules = LemmaRules::with_exceptions_file(*lemma_exceptions);
    return p;
}

template <typename T>
py::exception<T>& bind_error(py::module_& m, const char* name, PyObject* base) {
    // Leaked on purpose: must outlive the interpreter's module teardown.
    static auto* exc = new py::exception<T>(m, name, base);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const T& e) {
            py::set_error(*exc, e.what());
        }
    });
    return *exc;
}

}  // namespace

PYBIND11_MODULE(_cvrank, m) {
    m.doc() = "Resume scoring against weighted job profiles";

    // Bases first: later translators are tried first, so subclasses win.
    auto& error = bind_error<Error>(m, "Error", PyExc_RuntimeError);
    bind_error<UsageError>(m, "UsageError", error.ptr());
    auto& data = bind_error<DataError>(m, "DataError", error.ptr());
    auto& io = bind_error<IoError>(m, "IoError", error.ptr());
    bind_error<ConversionError>(m, "ConversionError", io.ptr());
    bind_error<EncodingError>(m, "EncodingError", data.ptr());
    bind_error<AmbiguityError>(m, "AmbiguityError", data.ptr());
    bind_error<NotFoundError>(m, "NotFoundError", data.ptr());
    bind_error<ConflictError>(m, "ConflictError", data.ptr());
    bind_error<LimitError>(m, "LimitError", data.ptr());
    {
        static auto* exc = new py::exception<ValidationError>(m, "ValidationError", data.ptr());
        py::register_exception_translator([](std::exception_ptr p) {
            try {
                if (p) std::rethrow_exception(p);
            } catch (const ValidationError& e) {
                py::object value = py::reinterpret_borrow<py::object>(exc->ptr())(e.what());
                value.attr("problems") = py::cast(e.problems());
                PyErr_SetObject(exc->ptr(), value.ptr());
            }
        });
    }

    py::class_<TextPipeline>(m, "TextPipeline")
        .def(py::init(&make_pipeline), py::arg("char_class") = "ascii", py::arg("case_fold") = true,
             py::arg("stopwords") = py::none(), py::arg("lemma_exceptions") = py::none(),
             py::arg("converter") = py::none())
        .def_property_readonly("char_class",
                               [](const TextPipeline& p) {
                                   return p.policy.alphanumeric_class == CharClass::unicode ? "unicode" : "ascii";
                               })
        .def_property_readonly("case_fold", [](const TextPipeline& p) { return p.policy.case_fold; });

    m.def(
        "strip_text",
        [](const std::string& text, const std::string& char_class, bool case_fold) {
            NormalizationPolicy policy;
            policy.alphanumeric_class = parse_class(char_class);
            policy.case_fold = case_fold;
            return strip_text(text, policy);
        },
        py::arg("text"), py::arg("char_class") = "ascii", py::arg("case_fold") = true);
    m.def("tokenize", &tokenize, py::arg("stripped"));
    m.def(
        "lemmatize_token",
        [](const std::string& token, const TextPipeline& p) { return lemmatize_token(token, p.rules); },
        py::arg("token"), py::arg("pipeline") = TextPipeline{});

    py::class_<LemmaStream>(m, "LemmaStream")
        .def_readonly("resume_id", &LemmaStream::resume_id)
        .def_readonly("lemmas", &LemmaStream::lemmas)
        .def_property_readonly("token_count", &LemmaStream::token_count);
    m.def(
        "normalize_stream",
        [](const std::string& resume_id, const std::string& raw_text, const TextPipeline& p) {
            return normalize_stream(resume_id, strip_text(raw_text, p.policy), p);
        },
        py::arg("resume_id"), py::arg("raw_text"), py::arg("pipeline") = TextPipeline{},
        "Strips, tokenizes and lemmatizes raw text.");
    m.def(
        "normalize_term", [](const std::string& term, const TextPipeline& p) { return normalize_term(term, p); },
        py::arg("term"), py::arg("pipeline") = TextPipeline{});

    m.def(
        "word_ac", [](const Strings& stream, const std::string& w) { return word_ac(stream, w); }, py::arg("stream"),
        py::arg("word"));
    m.def(
        "kgram_ac", [](const Strings& stream, const Strings& pattern) { return kgram_ac(stream, pattern); },
        py::arg("stream"), py::arg("pattern"));
    m.def(
        "phrase_ac", [](const Strings& stream, const Strings& phrase) { return phrase_ac(stream, phrase); },
        py::arg("stream"), py::arg("phrase"));
    m.def(
        "permutation_set",
        [](const Strings& phrase, std::size_t max_len) { return permutation_set(phrase, max_len); },
        py::arg("phrase"), py::arg("max_len") = kDefaultMaxPhraseLen);

    py::class_<WordEntry>(m, "WordEntry")
        .def(py::init([](std::string term, double score) { return WordEntry{std::move(term), score, {}}; }),
             py::arg("word"), py::arg("score"))
        .def_readwrite("word", &WordEntry::term)
        .def_readwrite("score", &WordEntry::score)
        .def_readonly("normalized", &WordEntry::normalized);
    py::class_<PhraseEntry>(m, "PhraseEntry")
        .def(py::init([](std::string phrase, double score) { return PhraseEntry{std::move(phrase), score, {}}; }),
             py::arg("phrase"), py::arg("score"))
        .def_readwrite("phrase", &PhraseEntry::phrase)
        .def_readwrite("score", &PhraseEntry::score)
        .def_readonly("normalized", &PhraseEntry::normalized);
    py::class_<JobProfile>(m, "JobProfile")
        .def(py::init([](std::string name, std::vector<WordEntry> words, std::vector<PhraseEntry> phrases,
                         std::string job_id) {
                 return JobProfile{std::move(job_id), std::move(name), std::move(words), std::move(phrases)};
             }),
             py::arg("name"), py::arg("words") = std::vector<WordEntry>{},
             py::arg("phrases") = std::vector<PhraseEntry>{}, py::arg("job_id") = "")
        .def_readwrite("job_id", &JobProfile::job_id)
        .def_readwrite("name", &JobProfile::name)
        .def_readwrite("words", &JobProfile::words)
        .def_readwrite("phrases", &JobProfile::phrases)
        .def(py::self == py::self)
        .def("__repr__", [](const JobProfile& p) { return "<JobProfile " + p.job_id + " '" + p.name + "'>"; });

    m.def("slugify", &slugify, py::arg("name"));
    m.def("parse_job_document", &parse_job_document, py::arg("text"), py::arg("job_id") = "");
    m.def("render_job_document", &render_job_document, py::arg("profile"));
    m.def(
        "validate_profile",
        [](const JobProfile& profile, const TextPipeline& p, std::size_t max_phrase_len) {
            auto report = validate_profile(profile, p, max_phrase_len);
            return py::make_tuple(report.profile, report.warnings);
        },
        py::arg("profile"), py::arg("pipeline") = TextPipeline{}, py::arg("max_phrase_len") = kDefaultMaxPhraseLen,
        "Returns (validated profile, warnings); raises ValidationError listing every problem.");
    m.def("sample_jobs", &sample_jobs, py::arg("pipeline") = TextPipeline{});

    py::class_<JobStore>(m, "JobStore")
        .def(py::init([](std::filesystem::path dir, TextPipeline p, std::size_t max_phrase_len) {
                 return JobStore(std::move(dir), std::move(p), JobStore::Options{max_phrase_len, std::nullopt});
             }),
             py::arg("directory"), py::arg("pipeline") = TextPipeline{},
             py::arg("max_phrase_len") = kDefaultMaxPhraseLen)
        .def("put", &JobStore::put, py::arg("profile"), py::arg("replace") = false)
        .def("get", &JobStore::get, py::arg("job_id"))
        .def("list",
             [](const JobStore& s) {
                 std::vector<std::string> ids;
                 for (const auto& j : s.list()) ids.push_back(j.job_id);
                 return ids;
             })
        .def("remove", &JobStore::remove, py::arg("job_id"))
        .def("__contains__", &JobStore::contains);

    py::class_<ScoreBreakdown>(m, "ScoreBreakdown")
        .def_readonly("resume_id", &ScoreBreakdown::resume_id)
        .def_readonly("job_id", &ScoreBreakdown::job_id)
        .def_readonly("total", &ScoreBreakdown::total)
        .def_readonly("word_component", &ScoreBreakdown::word_component)
        .def_readonly("phrase_component", &ScoreBreakdown::phrase_component);
    m.def(
        "resume_score",
        [](const LemmaStream& stream, const JobProfile& profile) { return resume_score(stream, profile); },
        py::arg("stream"), py::arg("profile"), "The profile must be validated (normalized caches filled).");
    m.def(
        "score_directory",
        [](const std::filesystem::path& dir, const JobProfile& profile, const TextPipeline& p, std::size_t workers) {
            py::gil_scoped_release release;
            return score_directory(dir, profile, p, workers);
        },
        py::arg("directory"), py::arg("profile"), py::arg("pipeline") = TextPipeline{}, py::arg("workers") = 1);

    py::class_<RankingEntry>(m, "RankingEntry")
        .def_readonly("resume_id", &RankingEntry::resume_id)
        .def_readonly("score", &RankingEntry::score)
        .def_readonly("rank", &RankingEntry::rank)
        .def_property_readonly("applicable", &RankingEntry::applicable);
    py::class_<RankingReport>(m, "RankingReport")
        .def_readonly("job_id", &RankingReport::job_id)
        .def_readonly("threshold", &RankingReport::threshold)
        .def_readonly("entries", &RankingReport::entries)
        .def_property_readonly("applicable_count", &RankingReport::applicable_count)
        .def("ranks", &to_reference);
    m.def("rank_resumes", &rank_resumes, py::arg("scores"), py::arg("threshold") = 0.0, py::arg("job_id") = "");
    m.def(
        "classify",
        [](double score, double threshold) { return classify(score, threshold) == Applicability::applicable; },
        py::arg("score"), py::arg("threshold") = 0.0, "True when the resume is applicable.");

    py::class_<Agreement>(m, "Agreement")
        .def_readonly("top_k", &Agreement::top_k)
        .def_readonly("exact", &Agreement::exact)
        .def_readonly("not_applicable", &Agreement::not_applicable);
    m.def("agreement", &agreement, py::arg("report"), py::arg("reference"), py::arg("k"));

    m.def(
        "generate_corpus",
        [](const std::filesystem::path& dir, std::uint64_t seed, std::size_t resume_count, std::size_t tokens,
           double density, std::optional<std::vector<JobProfile>> profiles, const TextPipeline& p) {
            SyntheticCorpusSpec spec{seed, resume_count, tokens, density};
            const auto jobs = profiles ? *profiles : sample_jobs(p);
            return generate_corpus(spec, jobs, p, dir);
        },
        py::arg("directory"), py::arg("seed") = 42, py::arg("resume_count") = 10, py::arg("tokens_per_resume") = 1000,
        py::arg("keyword_density") = 0.05, py::arg("profiles") = py::none(), py::arg("pipeline") = TextPipeline{});
}
