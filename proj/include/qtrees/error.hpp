#pragma once

#include <stdexcept>
#include <string>

namespace qtrees {

/** Error with a stable machine-readable code and a human message. */
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/** Parse failure carrying the 1-based line number of the offending line. */
class ParseError : public Error {
public:
    ParseError(int line, const std::string& message)
        : Error("Parse", "line " + std::to_string(line) + ": " + message), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

} // namespace qtrees
