#include "zhconv/utf8.hpp"

namespace zhconv {

std::u32string decode_utf8(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  size_t i = 0;
  while (i < bytes.size()) {
    unsigned char b0 = bytes[i];
    char32_t cp;
    size_t len;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      throw Utf8Error("invalid UTF-8 lead byte at offset " + std::to_string(i));
    }
    if (i + len > bytes.size())
      throw Utf8Error("truncated UTF-8 sequence at offset " + std::to_string(i));
    for (size_t j = 1; j < len; ++j) {
      unsigned char b = bytes[i + j];
      if ((b & 0xC0) != 0x80)
        throw Utf8Error("invalid UTF-8 continuation byte at offset " +
                        std::to_string(i + j));
      cp = (cp << 6) | (b & 0x3F);
    }
    static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMinByLen[len])
      throw Utf8Error("overlong UTF-8 encoding at offset " + std::to_string(i));
    if (cp >= 0xD800 && cp <= 0xDFFF)
      throw Utf8Error("surrogate codepoint at offset " + std::to_string(i));
    if (cp > 0x10FFFF)
      throw Utf8Error("codepoint out of range at offset " + std::to_string(i));
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
  return out;
}

std::string encode_utf8(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size() * 3);
  for (char32_t cp : codepoints) out += encode_utf8(cp);
  return out;
}

}  // namespace zhconv
