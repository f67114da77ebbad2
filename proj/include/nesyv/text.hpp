#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "nesyv/error.hpp"

namespace nesyv {

// Shortest decimal form that parses back to the exact same double.
std::string format_double(double v);

// Strict double parser; the whole token must be consumed.
double parse_double(std::string_view token);

// Whitespace-separated token stream over an in-memory document.
// Every error carries the byte offset where the problem starts, which is
// the contract for the weight-file and IDX-adjacent formats.
class Tokenizer {
public:
    explicit Tokenizer(std::string_view text, std::string_view what = "input");

    bool done();
    // Byte offset of the next token (or end of input).
    std::size_t offset();
    std::string_view peek();
    std::string_view next(const char* expected);
    std::int64_t next_int(const char* expected);
    double next_double(const char* expected);
    void expect(std::string_view literal);

private:
    void skip_ws();

    std::string_view text_;
    std::string what_;
    std::size_t pos_ = 0;
};

} // namespace nesyv
