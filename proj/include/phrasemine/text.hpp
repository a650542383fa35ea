#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phrasemine {

using Symbol = char32_t;
using Text = std::u32string;
using TextView = std::u32string_view;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EncodingError : public Error {
public:
    EncodingError(const std::string& what, std::size_t byte_offset)
        : Error(what), offset_(byte_offset) {}
    std::size_t byte_offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// Strict UTF-8 decoding: overlong forms, surrogates and truncated sequences throw.
Text decode_utf8(std::string_view bytes);
std::string encode_utf8(TextView text);
void append_utf8(std::string& out, Symbol c);

inline std::string to_utf8(TextView text) { return encode_utf8(text); }
inline Text from_utf8(std::string_view bytes) { return decode_utf8(bytes); }

// Post-hoc symbol classes. The mining algorithms never consult these.
bool is_white_space(Symbol c);
bool is_punctuation(Symbol c);

// Tab-separated fields: backslash, tab, newline and carriage return are escaped.
std::string escape_field(std::string_view s);
std::string unescape_field(std::string_view s);

// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(std::string_view bytes);
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace phrasemine
