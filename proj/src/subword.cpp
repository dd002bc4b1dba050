#include "medex/subword.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace medex {

std::string to_string(SubwordScheme scheme) {
  return scheme == SubwordScheme::WordPiece ? "wordpiece" : "bpe";
}

SubwordScheme parse_scheme(std::string_view s) {
  if (s == "wordpiece") return SubwordScheme::WordPiece;
  if (s == "bpe") return SubwordScheme::ByteBPE;
  fail(ErrorKind::Usage, "unknown tokenizer scheme \"" + std::string(s) +
                             "\" (expected wordpiece or bpe)");
}

namespace {

// Bytes that keep their own code point in the byte-level alphabet; the rest
// are remapped above 255 so every symbol is printable.
bool is_kept_byte(unsigned int b) {
  return (b >= 0x21 && b <= 0x7E) || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE && b <= 0xFF);
}

struct ByteSymbolTable {
  std::array<char32_t, 256> to_cp{};
  std::map<char32_t, int> to_byte;

  ByteSymbolTable() {
    unsigned int shifted = 0;
    for (unsigned int b = 0; b < 256; ++b) {
      char32_t cp;
      if (is_kept_byte(b)) {
        cp = static_cast<char32_t>(b);
      } else {
        cp = static_cast<char32_t>(256 + shifted);
        ++shifted;
      }
      to_cp[b] = cp;
      to_byte[cp] = static_cast<int>(b);
    }
  }
};

const ByteSymbolTable& byte_table() {
  static const ByteSymbolTable table;
  return table;
}

constexpr char kSpaceMarkerByte = ' ';

}  // namespace

char32_t byte_to_symbol(unsigned char byte) { return byte_table().to_cp[byte]; }

int symbol_to_byte(char32_t cp) {
  auto it = byte_table().to_byte.find(cp);
  return it == byte_table().to_byte.end() ? -1 : it->second;
}

SubwordVocab load_wordpiece_vocab(const std::string& path) {
  SubwordVocab vocab;
  vocab.scheme = SubwordScheme::WordPiece;
  vocab.unknown_token = "[UNK]";
  vocab.continuation_marker = "##";
  for (const std::string& line : split(read_file(path), '\n')) {
    std::string piece = trim(line);
    if (!piece.empty()) vocab.pieces.insert(piece);
  }
  if (vocab.pieces.empty()) fail(ErrorKind::Format, "empty wordpiece vocabulary: " + path);
  if (!vocab.pieces.count(vocab.unknown_token))
    fail(ErrorKind::Format, "wordpiece vocabulary lacks [UNK]: " + path);
  return vocab;
}

SubwordVocab load_bpe_vocab(const std::string& vocab_path, const std::string& merges_path) {
  SubwordVocab vocab;
  vocab.scheme = SubwordScheme::ByteBPE;
  vocab.unknown_token = "<unk>";
  for (const std::string& line : split(read_file(vocab_path), '\n')) {
    std::string token = trim(line);
    if (!token.empty()) vocab.pieces.insert(token);
  }
  if (vocab.pieces.empty()) fail(ErrorKind::Format, "empty BPE vocabulary: " + vocab_path);
  if (!vocab.pieces.count(vocab.unknown_token))
    fail(ErrorKind::Format, "BPE vocabulary lacks <unk>: " + vocab_path);

  std::size_t rank = 0;
  std::size_t line_no = 0;
  for (const std::string& line : split(read_file(merges_path), '\n')) {
    ++line_no;
    std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    std::vector<std::string> parts = split(entry, ' ');
    if (parts.size() != 2)
      fail(ErrorKind::Format, merges_path + " line " + std::to_string(line_no) +
                                  ": merge needs exactly two symbols");
    vocab.merge_ranks[{parts[0], parts[1]}] = rank++;
  }
  return vocab;
}

namespace {

struct WorkPiece {
  std::string text;
  std::size_t byte_begin;  // offsets into marker-prefixed byte stream
  std::size_t byte_end;
};

std::vector<SubwordToken> wordpiece_tokenize(std::string_view word_text, const Span& word_span,
                                             std::size_t word_index, const SubwordVocab& vocab) {
  std::u32string cps = utf8::decode(word_text);
  const std::size_t n = cps.size();
  std::vector<SubwordToken> out;
  std::size_t start = 0;
  while (start < n) {
    std::size_t match_end = 0;
    std::string match;
    for (std::size_t end = n; end > start; --end) {
      std::string candidate = utf8::encode(cps.substr(start, end - start));
      if (start > 0) candidate = vocab.continuation_marker + candidate;
      if (vocab.pieces.count(candidate)) {
        match = std::move(candidate);
        match_end = end;
        break;
      }
    }
    if (match_end == 0) {
      // No piece covers this position: the whole word falls back to [UNK].
      SubwordToken unk;
      unk.text = vocab.unknown_token;
      unk.word_index = word_index;
      unk.span = word_span;
      return {unk};
    }
    SubwordToken token;
    token.text = std::move(match);
    token.word_index = word_index;
    token.span = Span{word_span.start + start, word_span.start + match_end};
    out.push_back(std::move(token));
    start = match_end;
  }
  return out;
}

std::vector<SubwordToken> bpe_tokenize(std::string_view word_text, const Span& word_span,
                                       std::size_t word_index, const SubwordVocab& vocab) {
  // Byte stream: leading-space marker + word bytes.
  std::string bytes;
  bytes.push_back(kSpaceMarkerByte);
  bytes.append(word_text);

  std::vector<WorkPiece> pieces;
  pieces.reserve(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    std::string sym;
    utf8::append(sym, byte_to_symbol(static_cast<unsigned char>(bytes[i])));
    pieces.push_back({std::move(sym), i, i + 1});
  }

  // Repeatedly merge every occurrence of the best-ranked adjacent pair.
  while (pieces.size() > 1) {
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    std::pair<std::string, std::string> target;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      auto it = vocab.merge_ranks.find({pieces[i].text, pieces[i + 1].text});
      if (it != vocab.merge_ranks.end() && it->second < best_rank) {
        best_rank = it->second;
        target = it->first;
      }
    }
    if (best_rank == std::numeric_limits<std::size_t>::max()) break;
    std::vector<WorkPiece> merged;
    merged.reserve(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i + 1 < pieces.size() && pieces[i].text == target.first &&
          pieces[i + 1].text == target.second) {
        merged.push_back(
            {pieces[i].text + pieces[i + 1].text, pieces[i].byte_begin, pieces[i + 1].byte_end});
        ++i;
      } else {
        merged.push_back(std::move(pieces[i]));
      }
    }
    pieces = std::move(merged);
  }

  // Symbols not in the vocabulary fall back to their single-byte symbols;
  // a missing byte symbol becomes the unknown token.
  std::vector<WorkPiece> final_pieces;
  for (const WorkPiece& piece : pieces) {
    if (vocab.pieces.count(piece.text)) {
      final_pieces.push_back(piece);
      continue;
    }
    for (std::size_t b = piece.byte_begin; b < piece.byte_end; ++b) {
      std::string sym;
      utf8::append(sym, byte_to_symbol(static_cast<unsigned char>(bytes[b])));
      if (!vocab.pieces.count(sym)) sym = vocab.unknown_token;
      final_pieces.push_back({std::move(sym), b, b + 1});
    }
  }

  // Character ownership: a character belongs to the piece holding its first
  // byte. The marker byte (stream byte 0) owns no character.
  std::u32string cps = utf8::decode(word_text);
  std::vector<std::size_t> char_first_byte(cps.size());
  {
    std::size_t byte_pos = 1;  // skip marker
    std::string tmp;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      char_first_byte[i] = byte_pos;
      tmp.clear();
      utf8::append(tmp, cps[i]);
      byte_pos += tmp.size();
    }
  }

  std::vector<SubwordToken> out;
  std::size_t char_cursor = 0;
  std::size_t running_end = word_span.start;
  for (const WorkPiece& piece : final_pieces) {
    std::size_t lo = char_cursor;
    std::size_t hi = lo;
    while (hi < cps.size() && char_first_byte[hi] >= piece.byte_begin &&
           char_first_byte[hi] < piece.byte_end) {
      ++hi;
    }
    SubwordToken token;
    token.text = piece.text;
    token.word_index = word_index;
    if (hi > lo) {
      token.span = Span{word_span.start + lo, word_span.start + hi};
      running_end = token.span.end;
      char_cursor = hi;
    } else {
      token.span = Span{running_end, running_end};
    }
    out.push_back(std::move(token));
  }
  return out;
}

}  // namespace

std::vector<SubwordToken> tokenize_word(std::string_view word_text, const Span& word_span,
                                        std::size_t word_index, const SubwordVocab& vocab,
                                        bool lowercase) {
  std::string normalized = lowercase ? to_lower_ascii(word_text) : std::string(word_text);
  if (vocab.scheme == SubwordScheme::WordPiece)
    return wordpiece_tokenize(normalized, word_span, word_index, vocab);
  return bpe_tokenize(normalized, word_span, word_index, vocab);
}

std::string join_subwords(const std::vector<std::string>& pieces, const SubwordVocab& vocab) {
  if (vocab.scheme == SubwordScheme::WordPiece) {
    std::string out;
    for (const std::string& piece : pieces) {
      if (piece.starts_with(vocab.continuation_marker) && piece != vocab.continuation_marker)
        out += piece.substr(vocab.continuation_marker.size());
      else
        out += piece;
    }
    return out;
  }
  std::string bytes;
  for (const std::string& piece : pieces) {
    for (char32_t cp : utf8::decode(piece)) {
      int b = symbol_to_byte(cp);
      if (b < 0)
        fail(ErrorKind::Format, "join_subwords: symbol is not a mapped byte in \"" + piece + "\"");
      bytes.push_back(static_cast<char>(b));
    }
  }
  if (!bytes.empty() && bytes[0] == kSpaceMarkerByte) bytes.erase(bytes.begin());
  return bytes;
}

}  // namespace medex
