#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zhconv {

class Utf8Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decodes a UTF-8 byte string into Unicode scalar values.
// Throws Utf8Error on malformed input (truncated sequences, overlong
// encodings, surrogates, values above U+10FFFF).
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view codepoints);
std::string encode_utf8(char32_t cp);

}  // namespace zhconv
