#include "cvrank/lexnorm.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "cvrank/embedded_data.hpp"
#include "cvrank/error.hpp"

namespace cvrank {

namespace {

// Bounds the fixed-point iteration. Every suffix step shortens the token, so
// only exception chains can need more than a handful of steps.
constexpr int kMaxSteps = 64;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        fn(line, line_no);
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Consonant test in the Porter sense: 'y' is a consonant at the start or
// after a vowel.
bool is_consonant(std::string_view w, std::size_t i) {
    switch (w[i]) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return false;
        case 'y':
            return i == 0 || !is_consonant(w, i - 1);
        default:
            return true;
    }
}

bool has_vowel(std::string_view w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!is_consonant(w, i)) return true;
    }
    return false;
}

// Number of vowel-consonant sequences.
int measure(std::string_view w) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const bool vowel = !is_consonant(w, i);
        if (!vowel && prev_vowel) ++m;
        prev_vowel = vowel;
    }
    return m;
}

bool ends_double_consonant(std::string_view w) {
    const auto n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

bool ends_cvc(std::string_view w) {
    const auto n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
    const char last = w[n - 1];
    return last != 'w' && last != 'x' && last != 'y';
}

std::string repair(std::string stem) {
    if (ends_with(stem, "at") || ends_with(stem, "bl") || ends_with(stem, "iz")) return stem + 'e';
    if (ends_double_consonant(stem)) {
        const char last = stem.back();
        if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
        return stem;
    }
    if (measure(stem) == 1 && ends_cvc(stem)) return stem + 'e';
    return stem;
}

}  // namespace

StopwordSet StopwordSet::parse(std::string_view text) {
    std::unordered_set<std::string> words;
    for_each_line(text, [&](std::string_view line, std::size_t) {
        const auto word = trim(line);
        if (!word.empty()) words.emplace(word);
    });
    return StopwordSet(std::move(words));
}

StopwordSet StopwordSet::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

const StopwordSet& StopwordSet::english() {
    static const StopwordSet set = parse(embedded::stopwords());
    return set;
}

LemmaRules::LemmaRules(std::unordered_map<std::string, std::string> exceptions, std::vector<SuffixRule> suffix_rules)
    : exceptions_(std::move(exceptions)), suffix_rules_(std::move(suffix_rules)) {
    for (const auto& rule : suffix_rules_) {
        if (rule.suffix.empty()) throw DataError("suffix rule with empty suffix");
        if (rule.replacement.size() > rule.suffix.size()) {
            throw DataError("suffix rule '" + rule.suffix + "' must not lengthen tokens");
        }
        if (rule.min_stem == 0 && rule.replacement.empty()) {
            throw DataError("suffix rule '" + rule.suffix + "' could produce an empty lemma");
        }
    }
    for (const auto& [form, lemma] : exceptions_) {
        if (form.empty() || lemma.empty()) throw DataError("empty entry in lemma exceptions");
        std::string current = form;
        int steps = 0;
        for (std::string next = step(current); next != current; next = step(current)) {
            current = std::move(next);
            if (++steps > kMaxSteps) throw DataError("lemma exceptions do not converge starting at '" + form + "'");
        }
    }
}

std::unordered_map<std::string, std::string> LemmaRules::parse_exceptions(std::string_view text) {
    std::unordered_map<std::string, std::string> table;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        if (trim(line).empty()) return;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw DataError("lemma exceptions line " + std::to_string(line_no) + ": expected form<TAB>lemma");
        }
        const auto form = trim(line.substr(0, tab));
        const auto lemma = trim(line.substr(tab + 1));
        if (form.empty() || lemma.empty()) {
            throw DataError("lemma exceptions line " + std::to_string(line_no) + ": empty field");
        }
        table[std::string(form)] = std::string(lemma);
    });
    return table;
}

std::vector<SuffixRule> LemmaRules::default_suffix_rules() {
    // First match wins. Identity rules ("ss", "us", "is", "eed") shield
    // words the plural and "-ed" rules would otherwise mangle.
    return {
        {"sses", "ss", 0, false, false},
        {"ies", "y", 2, false, false},
        {"xes", "x", 1, false, false},
        {"ches", "ch", 1, false, false},
        {"shes", "sh", 1, false, false},
        {"zzes", "zz", 1, false, false},
        {"ss", "ss", 0, false, false},
        {"us", "us", 0, false, false},
        {"is", "is", 0, false, false},
        {"s", "", 3, false, false},
        {"eed", "eed", 0, false, false},
        {"ed", "", 3, true, true},
        {"ing", "", 3, true, true},
    };
}

LemmaRules LemmaRules::with_exceptions_file(const std::filesystem::path& path) {
    return LemmaRules(parse_exceptions(read_text_file(path)), default_suffix_rules());
}

const LemmaRules& LemmaRules::english() {
    static const LemmaRules rules(parse_exceptions(embedded::lemma_exceptions()), default_suffix_rules());
    return rules;
}

std::string LemmaRules::step(const std::string& token) const {
    if (auto it = exceptions_.find(token); it != exceptions_.end()) return it->second;
    for (const auto& rule : suffix_rules_) {
        if (!ends_with(token, rule.suffix)) continue;
        const std::string_view stem(token.data(), token.size() - rule.suffix.size());
        if (stem.size() < rule.min_stem) continue;
        if (rule.needs_vowel && !has_vowel(stem)) continue;
        std::string out(stem);
        out += rule.replacement;
        return rule.repair_stem ? repair(std::move(out)) : out;
    }
    return token;
}

std::string LemmaRules::lemmatize(std::string_view token) const {
    std::string current(token);
    if (current.empty()) return current;
    for (int i = 0; i < kMaxSteps; ++i) {
        std::string next = step(current);
        if (next == current) break;
        current = std::move(next);
    }
    return current.empty() ? std::string(token) : current;
}

std::vector<std::string> tokenize(std::string_view stripped) {
    std::vector<std::string> tokens;
    while (!stripped.empty()) {
        const auto sp = stripped.find(' ');
        auto token = stripped.substr(0, sp);
        if (!token.empty()) tokens.emplace_back(token);
        if (sp == std::string_view::npos) break;
        stripped.remove_prefix(sp + 1);
    }
    return tokens;
}

std::string lemmatize_token(std::string_view token, const LemmaRules& rules) { return rules.lemmatize(token); }

LemmaStream normalize_stream(std::string resume_id, std::string_view stripped, const LemmaRules& rules,
                             const StopwordSet& stops) {
    LemmaStream stream{std::move(resume_id), {}};
    for (auto& token : tokenize(stripped)) {
        if (stops.contains(token)) continue;
        std::string lemma = rules.lemmatize(token);
        if (stops.contains(lemma)) continue;
        stream.lemmas.push_back(std::move(lemma));
    }
    return stream;
}

Lemmas normalize_term(std::string_view term, const LemmaRules& rules, const StopwordSet& stops,
                      const NormalizationPolicy& policy) {
    return normalize_stream({}, strip_text(term, policy), rules, stops).lemmas;
}

}  // namespace cvrank
