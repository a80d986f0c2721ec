#include "kalkan/utf8.hpp"

#include <cstdint>

#include "kalkan/errors.hpp"

namespace kalkan::utf8 {

namespace {

// Decodes one scalar starting at bytes[pos]; returns false on malformed
// input. Rejects overlong forms, surrogates and values beyond U+10FFFF.
bool decode_one(std::string_view bytes, std::size_t& pos, char32_t& out) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  std::size_t n = bytes.size();
  unsigned char b0 = p[pos];
  if (b0 < 0x80) {
    out = b0;
    pos += 1;
    return true;
  }
  auto cont = [&](std::size_t i) { return i < n && (p[i] & 0xc0) == 0x80; };
  if ((b0 & 0xe0) == 0xc0) {
    if (!cont(pos + 1)) return false;
    char32_t v = ((b0 & 0x1fu) << 6) | (p[pos + 1] & 0x3fu);
    if (v < 0x80) return false;
    out = v;
    pos += 2;
    return true;
  }
  if ((b0 & 0xf0) == 0xe0) {
    if (!cont(pos + 1) || !cont(pos + 2)) return false;
    char32_t v = ((b0 & 0x0fu) << 12) | ((p[pos + 1] & 0x3fu) << 6) |
                 (p[pos + 2] & 0x3fu);
    if (v < 0x800 || (v >= 0xd800 && v <= 0xdfff)) return false;
    out = v;
    pos += 3;
    return true;
  }
  if ((b0 & 0xf8) == 0xf0) {
    if (!cont(pos + 1) || !cont(pos + 2) || !cont(pos + 3)) return false;
    char32_t v = ((b0 & 0x07u) << 18) | ((p[pos + 1] & 0x3fu) << 12) |
                 ((p[pos + 2] & 0x3fu) << 6) | (p[pos + 3] & 0x3fu);
    if (v < 0x10000 || v > 0x10ffff) return false;
    out = v;
    pos += 4;
    return true;
  }
  return false;
}

}  // namespace

bool is_valid(std::string_view bytes) {
  std::size_t pos = 0;
  char32_t scalar;
  while (pos < bytes.size()) {
    if (!decode_one(bytes, pos, scalar)) return false;
  }
  return true;
}

std::u32string decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t pos = 0;
  char32_t scalar;
  while (pos < bytes.size()) {
    if (!decode_one(bytes, pos, scalar)) {
      raise(ErrorKind::Encoding,
            "invalid UTF-8 byte sequence at offset " + std::to_string(pos));
    }
    out.push_back(scalar);
  }
  return out;
}

void append(std::string& out, char32_t scalar) {
  std::uint32_t v = scalar;
  if (v < 0x80) {
    out.push_back(static_cast<char>(v));
  } else if (v < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (v >> 6)));
    out.push_back(static_cast<char>(0x80 | (v & 0x3f)));
  } else if (v < 0x10000) {
    out.push_back(static_cast<char>(0xe0 | (v >> 12)));
    out.push_back(static_cast<char>(0x80 | ((v >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (v & 0x3f)));
  } else {
    out.push_back(static_cast<char>(0xf0 | (v >> 18)));
    out.push_back(static_cast<char>(0x80 | ((v >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((v >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (v & 0x3f)));
  }
}

std::string encode(const std::u32string& scalars) {
  std::string out;
  out.reserve(scalars.size());
  for (char32_t c : scalars) append(out, c);
  return out;
}

std::size_t scalar_count(std::string_view bytes) {
  std::size_t pos = 0, count = 0;
  char32_t scalar;
  while (pos < bytes.size()) {
    if (!decode_one(bytes, pos, scalar)) {
      raise(ErrorKind::Encoding,
            "invalid UTF-8 byte sequence at offset " + std::to_string(pos));
    }
    ++count;
  }
  return count;
}

}  // namespace kalkan::utf8
