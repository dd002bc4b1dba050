#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace medex {

// Error taxonomy shared by all modules. Every failure carries a kind so
// callers (and the CLI exit-code mapping) can tell usage mistakes from
// bad data without string matching.
enum class ErrorKind {
  Usage,
  Parse,
  Range,
  Integrity,
  Reference,
  Io,
  Format,
  Config,
  Completeness,
  Taxonomy,
  Shape,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

const char* error_kind_name(ErrorKind kind);

namespace utf8 {

// Decodes one code point starting at byte offset `pos`; advances `pos`.
// Malformed sequences raise a Format error.
char32_t decode_at(std::string_view text, std::size_t& pos);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t length(std::string_view text);

// Byte offset of the code point with index `cp_index`. `cp_index` may equal
// length(text), in which case text.size() is returned.
std::size_t byte_offset(std::string_view text, std::size_t cp_index);

// Substring by code-point interval [begin, end).
std::string substr(std::string_view text, std::size_t begin, std::size_t end);

void append(std::string& out, char32_t cp);
std::string encode(const std::u32string& text);
std::u32string decode(std::string_view text);

}  // namespace utf8

// FNV-1a over bytes; the stable hash used for feature hashing and
// provenance digests. Never replaced by std::hash (not portable).
inline std::uint64_t fnv1a(std::string_view data,
                           std::uint64_t seed = 0xcbf29ce484222325ull) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Deterministic bounded draw from a mt19937 stream. std::uniform_int_distribution
// is implementation-defined, so reproducible code paths must use this.
inline std::uint32_t bounded_rand(std::mt19937& rng, std::uint32_t n) {
  return static_cast<std::uint32_t>(
      (static_cast<std::uint64_t>(rng()) * n) >> 32);
}

// Fisher-Yates with bounded_rand; deterministic across platforms.
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = bounded_rand(rng, static_cast<std::uint32_t>(i));
    std::swap(items[i - 1], items[j]);
  }
}

bool is_ascii_space(char32_t c);
bool is_ascii_upper(char32_t c);
bool is_word_char(char32_t c);  // alphanumeric or any cp >= 128

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Whole-file I/O; failures raise Io errors naming the path.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// Formats a double with enough digits to round-trip exactly.
std::string format_full(double value);

// Order-preserving parallel map over independent items (document-level
// worker pool). Results land by index, so merges downstream stay
// deterministic regardless of jobs. The first worker exception is rethrown.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, std::size_t jobs, Fn fn)
    -> std::vector<decltype(fn(items.front()))> {
  using Out = decltype(fn(items.front()));
  std::vector<Out> results(items.size());
  if (jobs <= 1 || items.size() <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) results[i] = fn(items[i]);
    return results;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  const std::size_t worker_count = std::min(jobs, items.size());
  for (std::size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&, w]() {
      for (std::size_t i = w; i < items.size(); i += worker_count) {
        try {
          results[i] = fn(items[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace medex
