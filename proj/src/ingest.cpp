#include "cvrank/ingest.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "cvrank/error.hpp"

namespace fs = std::filesystem;

namespace cvrank {

namespace utf8 {

namespace {

// Returns the sequence length for a lead byte, 0 if invalid.
int sequence_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if (lead >= 0xC2 && lead <= 0xDF) return 2;
    if (lead >= 0xE0 && lead <= 0xEF) return 3;
    if (lead >= 0xF0 && lead <= 0xF4) return 4;
    return 0;
}

bool decode_one(std::string_view bytes, std::size_t& pos, char32_t& cp) {
    const auto lead = static_cast<unsigned char>(bytes[pos]);
    const int len = sequence_length(lead);
    if (len == 0 || pos + len > bytes.size()) return false;
    if (len == 1) {
        cp = lead;
        ++pos;
        return true;
    }
    char32_t value = lead & (0xFF >> (len + 1));
    for (int i = 1; i < len; ++i) {
        const auto c = static_cast<unsigned char>(bytes[pos + i]);
        if ((c & 0xC0) != 0x80) return false;
        value = (value << 6) | (c & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range values.
    if ((len == 3 && value < 0x800) || (len == 4 && (value < 0x10000 || value > 0x10FFFF))) return false;
    if (value >= 0xD800 && value <= 0xDFFF) return false;
    cp = value;
    pos += len;
    return true;
}

}  // namespace

std::u32string decode(std::string_view bytes) {
    if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        char32_t cp = 0;
        if (!decode_one(bytes, pos, cp)) {
            throw EncodingError("invalid UTF-8 at byte offset " + std::to_string(pos));
        }
        out.push_back(cp);
    }
    return out;
}

bool valid(std::string_view bytes) {
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        char32_t cp = 0;
        if (!decode_one(bytes, pos, cp)) return false;
    }
    return true;
}

std::string encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

}  // namespace utf8

namespace {

bool is_ascii_alnum(char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
}

// Letters of the Latin, Greek and Cyrillic blocks. This is enough for the
// European languages resumes are usually written in; it is a fixed table so
// results do not depend on the host locale.
bool is_unicode_letter(char32_t c) {
    if (c == 0xAA || c == 0xB5 || c == 0xBA) return true;
    if (c >= 0xC0 && c <= 0xFF) return c != 0xD7 && c != 0xF7;
    if (c >= 0x100 && c <= 0x24F) return true;
    if (c == 0x386 || (c >= 0x388 && c <= 0x38A) || c == 0x38C) return true;
    if ((c >= 0x38E && c <= 0x3A1) || (c >= 0x3A3 && c <= 0x3FF)) return c != 0x3F6;
    if ((c >= 0x400 && c <= 0x481) || (c >= 0x48A && c <= 0x52F)) return true;
    if (c >= 0x1E00 && c <= 0x1EFF) return true;
    return false;
}

bool even_in(char32_t c, char32_t lo, char32_t hi) { return c >= lo && c <= hi && (c - lo) % 2 == 0; }

char32_t to_lower(char32_t c) {
    if (c < 0x80) return (c >= U'A' && c <= U'Z') ? c + 0x20 : c;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
    if (c == 0x130) return U'i';
    if (c == 0x178) return 0xFF;
    if (even_in(c, 0x100, 0x136) || even_in(c, 0x139, 0x147) || even_in(c, 0x14A, 0x176) ||
        even_in(c, 0x179, 0x17D) || even_in(c, 0x1CD, 0x1DB) || even_in(c, 0x1DE, 0x1EE) ||
        even_in(c, 0x1F8, 0x21E) || even_in(c, 0x222, 0x232) || even_in(c, 0x246, 0x24E)) {
        return c + 1;
    }
    if (c == 0x386) return 0x3AC;
    if (c >= 0x388 && c <= 0x38A) return c + 0x25;
    if (c == 0x38C) return 0x3CC;
    if (c == 0x38E || c == 0x38F) return c + 0x3F;
    if ((c >= 0x391 && c <= 0x3A1) || (c >= 0x3A3 && c <= 0x3AB)) return c + 0x20;
    if (c >= 0x400 && c <= 0x40F) return c + 0x50;
    if (c >= 0x410 && c <= 0x42F) return c + 0x20;
    if (c == 0x4C0) return 0x4CF;
    if (even_in(c, 0x460, 0x480) || even_in(c, 0x48A, 0x4BE) || even_in(c, 0x4C1, 0x4CD) ||
        even_in(c, 0x4D0, 0x52E) || even_in(c, 0x1E00, 0x1E94) || even_in(c, 0x1EA0, 0x1EFE)) {
        return c + 1;
    }
    return c;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error while reading " + path.string());
    return bytes;
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('\'');
    return out;
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
}

std::string run_converter(const fs::path& input, const std::string& command_template) {
    static std::atomic<unsigned> counter{0};
    const fs::path output = fs::temp_directory_path() / ("cvrank-convert-" + std::to_string(::getpid()) + "-" +
                                                         std::to_string(counter++) + ".txt");
    std::string command = command_template;
    replace_all(command, "{in}", shell_quote(input.string()));
    replace_all(command, "{out}", shell_quote(output.string()));

    const int status = std::system(command.c_str());
    const bool ok = status != -1 && WIFEXITED(status) && WEXITSTATUS(status) == 0;
    std::error_code ec;
    if (!ok) {
        fs::remove(output, ec);
        throw ConversionError("converter failed for " + input.string() + " (status " + std::to_string(status) + ")");
    }
    if (!fs::exists(output, ec)) {
        throw ConversionError("converter produced no output for " + input.string());
    }
    std::string text;
    try {
        text = read_file(output);
    } catch (...) {
        fs::remove(output, ec);
        throw;
    }
    fs::remove(output, ec);
    return text;
}

}  // namespace

void NormalizationPolicy::validate() const {
    if (!converter_command) return;
    if (converter_command->find("{in}") == std::string::npos ||
        converter_command->find("{out}") == std::string::npos) {
        throw UsageError("converter command must contain {in} and {out} placeholders: " + *converter_command);
    }
}

bool is_plain_text_path(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext.empty() || ext == ".txt" || ext == ".text" || ext == ".md";
}

RawDocument load_document(const fs::path& path, const NormalizationPolicy& policy) {
    policy.validate();
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) throw IoError("not a readable file: " + path.string());

    std::string bytes;
    if (is_plain_text_path(path)) {
        bytes = read_file(path);
    } else if (policy.converter_command) {
        bytes = run_converter(path, *policy.converter_command);
    } else {
        throw ConversionError("no converter configured for non-text file " + path.string());
    }

    if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.erase(0, 3);
    if (!utf8::valid(bytes)) throw EncodingError("invalid UTF-8 in " + path.string());
    return RawDocument{path.stem().string(), std::move(bytes)};
}

std::string strip_text(std::string_view raw_text, const NormalizationPolicy& policy) {
    const std::u32string text = utf8::decode(raw_text);
    const bool unicode = policy.alphanumeric_class == CharClass::unicode;

    std::u32string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char32_t c : text) {
        const bool keep = is_ascii_alnum(c) || (unicode && is_unicode_letter(c));
        if (!keep) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(U' ');
            pending_space = false;
        }
        out.push_back(policy.case_fold ? to_lower(c) : c);
    }
    return utf8::encode(out);
}

Corpus ingest_corpus(const fs::path& dir, const NormalizationPolicy& policy) {
    policy.validate();
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());

    std::map<std::string, fs::path> files;
    fs::directory_iterator it(dir, ec);
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    for (const auto& entry : it) {
        if (!entry.is_regular_file(ec)) continue;
        const std::string id = entry.path().stem().string();
        auto [pos, inserted] = files.emplace(id, entry.path());
        if (!inserted) {
            std::string first = pos->second.string();
            std::string second = entry.path().string();
            if (second < first) std::swap(first, second);
            throw AmbiguityError("resume id '" + id + "' is ambiguous: " + first + ", " + second);
        }
    }

    Corpus corpus;
    for (const auto& [id, path] : files) {
        corpus.emplace(id, strip_text(load_document(path, policy).raw_text, policy));
    }
    return corpus;
}

}  // namespace cvrank
