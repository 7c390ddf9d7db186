#include "cvrank/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "cvrank/bench.hpp"
#include "cvrank/error.hpp"
#include "cvrank/ingest.hpp"
#include "cvrank/kb.hpp"
#include "cvrank/lexnorm.hpp"
#include "cvrank/pipeline.hpp"
#include "cvrank/rank.hpp"
#include "cvrank/report.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace cvrank {

namespace {

struct GlobalOptions {
    std::string kb_dir;
    std::string stopwords_file;
    std::string exceptions_file;
    std::string converter;
    bool unicode = false;
    bool no_case_fold = false;
    std::size_t max_phrase_len = kDefaultMaxPhraseLen;
    bool deterministic = false;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

TextPipeline make_pipeline(const GlobalOptions& g) {
    TextPipeline p;
    p.policy.alphanumeric_class = g.unicode ? CharClass::unicode : CharClass::ascii;
    p.policy.case_fold = !g.no_case_fold;
    if (!g.converter.empty()) p.policy.converter_command = g.converter;
    p.policy.validate();
    if (!g.stopwords_file.empty()) p.stops = StopwordSet::load(g.stopwords_file);
    if (!g.exceptions_file.empty()) p.rules = LemmaRules::with_exceptions_file(g.exceptions_file);
    return p;
}

JobStore open_store(const GlobalOptions& g) {
    std::string dir = g.kb_dir;
    if (dir.empty()) {
        if (const char* env = std::getenv("CVRANK_KB_DIR"); env != nullptr) dir = env;
    }
    if (dir.empty()) throw UsageError("no knowledge base given (use --kb or set CVRANK_KB_DIR)");
    JobStore::Options options;
    options.max_phrase_len = g.max_phrase_len;
    return JobStore(dir, make_pipeline(g), options);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string header(const GlobalOptions& g, const std::string& what) {
    return g.deterministic ? what : what + " generated " + utc_timestamp();
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        if (item.empty()) throw UsageError("empty entry in --sizes");
        std::size_t pos = 0;
        unsigned long long value = 0;
        try {
            value = std::stoull(item, &pos);
        } catch (const std::exception&) {
            throw UsageError("invalid size '" + item + "'");
        }
        if (pos != item.size()) throw UsageError("invalid size '" + item + "'");
        sizes.push_back(static_cast<std::size_t>(value));
    }
    return sizes;
}

// JSON object {"id": score} when the file ends in .json, otherwise CSV rows
// "id,score" with an optional header.
std::map<std::string, double> read_scores_file(const fs::path& path) {
    const std::string text = read_file(path);
    std::map<std::string, double> scores;
    if (path.extension() == ".json") {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError("malformed scores file: " + std::string(e.what()));
        }
        if (!doc.is_object()) throw DataError("scores file must be a JSON object of id -> score");
        for (const auto& [id, value] : doc.items()) {
            if (!value.is_number()) throw DataError("score of '" + id + "' is not a number");
            scores[id] = value.get<double>();
        }
        return scores;
    }
    std::istringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError("scores file line " + std::to_string(line_no) + ": expected id,score");
        const std::string id = line.substr(0, comma);
        const std::string value = line.substr(comma + 1);
        if (line_no == 1 && id == "resume_id") continue;
        std::size_t pos = 0;
        double score = 0.0;
        try {
            score = std::stod(value, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != value.size()) {
            throw DataError("scores file line " + std::to_string(line_no) + ": invalid score '" + value + "'");
        }
        if (!scores.emplace(id, score).second) throw DataError("duplicate resume id '" + id + "' in scores file");
    }
    return scores;
}

int dispatch(CLI::App& app, std::vector<const char*>& argv, std::ostream& out, std::ostream& err) {
    GlobalOptions g;
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--kb", g.kb_dir, "Knowledge base directory (default: $CVRANK_KB_DIR)");
    app.add_option("--stopwords", g.stopwords_file, "Stopword file, one token per line");
    app.add_option("--lemma-exceptions", g.exceptions_file, "Irregular forms file, form<TAB>lemma per line");
    app.add_option("--converter", g.converter, "Command template for non-text resumes, with {in} and {out}");
    app.add_flag("--unicode", g.unicode, "Keep Latin/Greek/Cyrillic letters, not only [A-Za-z0-9]");
    app.add_flag("--no-case-fold", g.no_case_fold, "Do not lowercase text");
    app.add_option("--max-phrase-len", g.max_phrase_len, "Longest phrase accepted in a job profile")
        ->check(CLI::Range(1, 10));
    app.add_flag("--deterministic", g.deterministic, "Omit the timestamp from report headers");

    // kb
    auto* kb = app.add_subcommand("kb", "Manage job profiles");
    kb->require_subcommand(1);
    std::string add_file, add_id, job_arg;
    bool replace = false;
    auto* kb_add = kb->add_subcommand("add", "Validate and store a job document");
    kb_add->add_option("file", add_file, "Job document (JSON)")->required();
    kb_add->add_option("--id", add_id, "Job id (default: slug of the name)");
    kb_add->add_flag("--replace", replace, "Overwrite an existing job");
    auto* kb_get = kb->add_subcommand("get", "Print a stored job document");
    kb_get->add_option("job_id", job_arg)->required();
    auto* kb_ls = kb->add_subcommand("ls", "List stored jobs");
    auto* kb_rm = kb->add_subcommand("rm", "Delete a stored job");
    kb_rm->add_option("job_id", job_arg)->required();

    // score / rank
    std::string job, resumes, format = "table", scores_file;
    std::size_t workers = 1;
    double threshold = 0.0;
    std::optional<std::size_t> top;
    auto* score = app.add_subcommand("score", "Score every resume in a directory against a job");
    score->add_option("--job", job, "Job id")->required();
    score->add_option("--resumes", resumes, "Resume directory")->required();
    score->add_option("--format", format, "table, json or csv");
    score->add_option("--workers", workers, "Scoring threads")->check(CLI::Range(1, 256));

    auto* rank = app.add_subcommand("rank", "Rank resumes for a job, tagging non-matches N/A");
    rank->add_option("--job", job, "Job id");
    rank->add_option("--resumes", resumes, "Resume directory");
    rank->add_option("--threshold", threshold, "Resumes scoring at or below this are N/A");
    rank->add_option("--top", top, "Show only the k best applicable resumes")->check(CLI::PositiveNumber);
    rank->add_option("--scores-file", scores_file, "Rank precomputed scores (JSON object or id,score CSV)");
    rank->add_option("--format", format, "table, json or csv");
    rank->add_option("--workers", workers, "Scoring threads")->check(CLI::Range(1, 256));

    // bench
    std::string sizes_text = "10,20,30,40,50", bench_out, bench_format = "table";
    BenchConfig bench_config;
    auto* bench = app.add_subcommand("bench", "Time the scoring pipeline on synthetic corpora");
    bench->add_option("--sizes", sizes_text, "Comma-separated corpus sizes");
    bench->add_option("--reps", bench_config.reps, "Repetitions per size");
    bench->add_option("--seed", bench_config.seed, "Corpus generator seed");
    bench->add_option("--workers", bench_config.workers, "Scoring threads")->check(CLI::Range(1, 256));
    bench->add_option("--tokens", bench_config.tokens_per_resume, "Tokens per synthetic resume");
    bench->add_option("--density", bench_config.keyword_density, "Fraction of keyword tokens");
    bench->add_option("--out", bench_out, "Also write the result as JSON to this file");
    bench->add_option("--format", bench_format, "table or json");

    // normalize
    std::string normalize_file;
    auto* normalize = app.add_subcommand("normalize", "Print the lemma stream of one document");
    normalize->add_option("file", normalize_file)->required();

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::usage);
    }

    if (kb_add->parsed()) {
        JobStore store = open_store(g);
        auto profile = parse_job_document(read_file(add_file), add_id);
        const auto report = validate_profile(profile, store.pipeline(), g.max_phrase_len);
        for (const auto& w : report.warnings) err << "warning: " << w << '\n';
        out << store.put(std::move(profile), replace) << '\n';
    } else if (kb_get->parsed()) {
        const JobStore store = open_store(g);
        out << render_job_document(store.get(job_arg));
    } else if (kb_ls->parsed()) {
        const JobStore store = open_store(g);
        for (const auto& s : store.list()) {
            out << s.job_id << '\t' << s.name << '\t' << s.word_count << " words\t" << s.phrase_count << " phrases\n";
        }
    } else if (kb_rm->parsed()) {
        JobStore store = open_store(g);
        store.remove(job_arg);
    } else if (score->parsed()) {
        const Format fmt = parse_format(format);
        const JobStore store = open_store(g);
        const JobProfile profile = store.get(job);
        const auto scores = score_directory(resumes, profile, store.pipeline(), workers);
        out << render_scores(scores, profile.job_id, fmt, header(g, "cvrank score job=" + profile.job_id));
    } else if (rank->parsed()) {
        const Format fmt = parse_format(format);
        std::map<std::string, double> scores;
        std::string job_id = job;
        if (!scores_file.empty()) {
            scores = read_scores_file(scores_file);
        } else {
            if (job.empty() || resumes.empty()) throw UsageError("rank needs --job and --resumes, or --scores-file");
            const JobStore store = open_store(g);
            const JobProfile profile = store.get(job);
            scores = totals(score_directory(resumes, profile, store.pipeline(), workers));
            job_id = profile.job_id;
        }
        const auto report = rank_resumes(scores, threshold, job_id);
        out << render_ranking(report, fmt, top, header(g, "cvrank rank job=" + job_id));
    } else if (bench->parsed()) {
        bench_config.sizes = parse_sizes(sizes_text);
        bench_config.validate();
        if (bench_format != "table" && bench_format != "json") throw UsageError("bench format must be table or json");
        const TextPipeline pipeline = make_pipeline(g);
        const auto jobs = sample_jobs(pipeline);
        const auto result = run_bench(bench_config, jobs, pipeline);
        out << (bench_format == "json" ? render_bench_json(result) : render_bench_table(result));
        if (!bench_out.empty()) {
            std::ofstream file(bench_out, std::ios::binary | std::ios::trunc);
            file << render_bench_json(result);
            if (!file) throw IoError("cannot write " + bench_out);
        }
    } else if (normalize->parsed()) {
        const TextPipeline pipeline = make_pipeline(g);
        const RawDocument doc = load_document(normalize_file, pipeline.policy);
        out << render_stream(normalize_stream(doc.resume_id, strip_text(doc.raw_text, pipeline.policy), pipeline));
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<const char*> args(argv, argv + argc);
    if (args.empty()) args.push_back("cvrank");
    CLI::App app{"cvrank: score and rank resumes against weighted job profiles", "cvrank"};
    try {
        return dispatch(app, args, out, err);
    } catch (const ValidationError& e) {
        err << "cvrank: " << e.what() << '\n';
        return e.exit_code();
    } catch (const Error& e) {
        err << "cvrank: error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const fs::filesystem_error& e) {
        err << "cvrank: error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::io);
    } catch (const std::exception& e) {
        err << "cvrank: error: " << e.what() << '\n';
        return static_cast<int>(ErrorKind::data);
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"cvrank"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace cvrank
