#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nesyv {

// Base class for failures raised by the library (I/O, formats, guards).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed textual input. `line`/`column` are 1-based when known,
// `offset` is a 0-based byte offset for token-stream formats.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line(line),
          column(column) {}
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (byte " + std::to_string(offset) + ")"), offset(offset) {}

    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t offset = 0;
};

} // namespace nesyv
