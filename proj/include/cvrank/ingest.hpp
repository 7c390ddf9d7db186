#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace cvrank {

enum class CharClass {
    ascii,    // [A-Za-z0-9]
    unicode,  // ASCII alphanumerics plus Latin, Greek and Cyrillic letters
};

struct NormalizationPolicy {
    CharClass alphanumeric_class = CharClass::ascii;
    bool case_fold = true;
    /// Shell command template for non-text inputs, e.g. "abiword -t {out} {in}".
    /// Must contain both "{in}" and "{out}".
    std::optional<std::string> converter_command;

    /// Throws UsageError when the converter template lacks a placeholder.
    void validate() const;
};

struct RawDocument {
    std::string resume_id;
    std::string raw_text;
};

/// Ordered by resume id.
using Corpus = std::map<std::string, std::string>;

/// True for extensions read directly as UTF-8 text (".txt", ".text", ".md", none).
bool is_plain_text_path(const std::filesystem::path& path);

RawDocument load_document(const std::filesystem::path& path, const NormalizationPolicy& policy);

/// Replaces each maximal run of characters outside the policy's class with one
/// space, trims, and lowercases when case folding is on. Input must be UTF-8.
std::string strip_text(std::string_view raw_text, const NormalizationPolicy& policy = {});

/// Flat directory scan: load_document + strip_text for every regular file.
Corpus ingest_corpus(const std::filesystem::path& dir, const NormalizationPolicy& policy = {});

namespace utf8 {

/// Throws EncodingError on malformed input. A leading BOM is dropped.
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view text);
bool valid(std::string_view bytes);

}  // namespace utf8

}  // namespace cvrank
