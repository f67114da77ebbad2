#include "nesyv/text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace nesyv {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view token) {
    double v = 0;
    auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc() || res.ptr != token.data() + token.size())
        throw Error("invalid number '" + std::string(token) + "'");
    return v;
}

Tokenizer::Tokenizer(std::string_view text, std::string_view what) : text_(text), what_(what) {}

void Tokenizer::skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
}

bool Tokenizer::done() {
    skip_ws();
    return pos_ >= text_.size();
}

std::size_t Tokenizer::offset() {
    skip_ws();
    return pos_;
}

std::string_view Tokenizer::peek() {
    skip_ws();
    std::size_t end = pos_;
    while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])))
        ++end;
    return text_.substr(pos_, end - pos_);
}

std::string_view Tokenizer::next(const char* expected) {
    skip_ws();
    if (pos_ >= text_.size())
        throw ParseError(what_ + ": expected " + expected + ", got end of input", pos_);
    std::string_view tok = peek();
    pos_ += tok.size();
    return tok;
}

std::int64_t Tokenizer::next_int(const char* expected) {
    std::size_t at = offset();
    std::string_view tok = next(expected);
    std::int64_t v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        throw ParseError(what_ + ": expected " + expected + ", got '" + std::string(tok) + "'", at);
    return v;
}

double Tokenizer::next_double(const char* expected) {
    std::size_t at = offset();
    std::string_view tok = next(expected);
    double v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw ParseError(what_ + ": expected " + expected + ", got '" + std::string(tok) + "'", at);
    return v;
}

void Tokenizer::expect(std::string_view literal) {
    std::size_t at = offset();
    std::string_view tok = next(std::string(literal).c_str());
    if (tok != literal)
        throw ParseError(what_ + ": expected '" + std::string(literal) + "', got '" + std::string(tok) + "'", at);
}

} // namespace nesyv
