#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cvrank {

/// Broad failure classes. Each maps to one CLI exit status.
enum class ErrorKind {
    usage = 1,
    data = 2,
    io = 3,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

  private:
    ErrorKind kind_;
};

class UsageError : public Error {
  public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::usage, what) {}
};

class DataError : public Error {
  public:
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

/// External converter failed or no converter is configured for a format.
class ConversionError : public IoError {
  public:
    using IoError::IoError;
};

/// Input bytes are not valid UTF-8.
class EncodingError : public DataError {
  public:
    using DataError::DataError;
};

/// Two corpus files map onto the same resume id.
class AmbiguityError : public DataError {
  public:
    using DataError::DataError;
};

class NotFoundError : public DataError {
  public:
    using DataError::DataError;
};

class ConflictError : public DataError {
  public:
    using DataError::DataError;
};

/// A phrase is longer than the permutation limit allows.
class LimitError : public DataError {
  public:
    using DataError::DataError;
};

/// Carries every violation found in one validation pass.
class ValidationError : public DataError {
  public:
    explicit ValidationError(std::vector<std::string> problems);

    const std::vector<std::string>& problems() const noexcept { return problems_; }

  private:
    std::vector<std::string> problems_;
};

}  // namespace cvrank
