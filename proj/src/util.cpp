#include "medex/util.hpp"

#include <cstdio>
#include <fstream>
#include <ios>
#include <sstream>

namespace medex {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Range: return "range";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::Reference: return "reference";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    case ErrorKind::Config: return "config";
    case ErrorKind::Completeness: return "completeness";
    case ErrorKind::Taxonomy: return "taxonomy";
    case ErrorKind::Shape: return "shape";
  }
  return "unknown";
}

namespace utf8 {

char32_t decode_at(std::string_view text, std::size_t& pos) {
  if (pos >= text.size()) fail(ErrorKind::Format, "utf8: decode past end");
  unsigned char b0 = static_cast<unsigned char>(text[pos]);
  std::size_t len;
  char32_t cp;
  if (b0 < 0x80) {
    len = 1;
    cp = b0;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    fail(ErrorKind::Format, "utf8: invalid lead byte at offset " + std::to_string(pos));
  }
  if (pos + len > text.size())
    fail(ErrorKind::Format, "utf8: truncated sequence at offset " + std::to_string(pos));
  for (std::size_t i = 1; i < len; ++i) {
    unsigned char b = static_cast<unsigned char>(text[pos + i]);
    if ((b & 0xC0) != 0x80)
      fail(ErrorKind::Format,
           "utf8: invalid continuation byte at offset " + std::to_string(pos + i));
    cp = (cp << 6) | (b & 0x3F);
  }
  pos += len;
  return cp;
}

std::size_t length(std::string_view text) {
  std::size_t pos = 0, n = 0;
  while (pos < text.size()) {
    decode_at(text, pos);
    ++n;
  }
  return n;
}

std::size_t byte_offset(std::string_view text, std::size_t cp_index) {
  std::size_t pos = 0, n = 0;
  while (n < cp_index) {
    if (pos >= text.size())
      fail(ErrorKind::Range,
           "utf8: code point index " + std::to_string(cp_index) + " beyond text length " +
               std::to_string(n));
    decode_at(text, pos);
    ++n;
  }
  return pos;
}

std::string substr(std::string_view text, std::size_t begin, std::size_t end) {
  std::size_t b = byte_offset(text, begin);
  std::size_t e = byte_offset(text, end);
  return std::string(text.substr(b, e - b));
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(const std::u32string& text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append(out, cp);
  return out;
}

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) out.push_back(decode_at(text, pos));
  return out;
}

}  // namespace utf8

bool is_ascii_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v';
}

bool is_ascii_upper(char32_t c) { return c >= U'A' && c <= U'Z'; }

bool is_word_char(char32_t c) {
  if (c >= 128) return true;
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_ascii_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_ascii_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(ErrorKind::Io, "read failed: " + path);
  return buf.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot open for writing: " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) fail(ErrorKind::Io, "write failed: " + path);
}

std::string format_full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace medex
