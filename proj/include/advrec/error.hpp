#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace advrec {

enum class ErrorKind {
    Parse,
    Validation,
    Sequencing,
    Degenerate,
    InsufficientData,
    Dimension,
    Missing,
    Io,
};

const char* to_string(ErrorKind kind);

/// Data error raised by every loader and stage. `line` is 1-based, 0 when not tied to a line.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::size_t line = 0, const std::string& file = {});

    /// Same error, located in `file`.
    Error in_file(const std::string& file) const { return Error(kind_, detail_, line_, file); }

    ErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    const std::string& detail() const noexcept { return detail_; }
    const std::string& file() const noexcept { return file_; }

private:
    ErrorKind kind_;
    std::size_t line_;
    std::string detail_;
    std::string file_;
};

} // namespace advrec
