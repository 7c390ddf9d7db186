#include "cvrank/error.hpp"

namespace cvrank {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "validation failed";
    for (const auto& p : problems) {
        out += "\n  - ";
        out += p;
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : DataError(join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace cvrank
