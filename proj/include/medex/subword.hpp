#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "medex/corpus.hpp"

namespace medex {

enum class SubwordScheme { WordPiece, ByteBPE };

std::string to_string(SubwordScheme scheme);
SubwordScheme parse_scheme(std::string_view s);

// A subword piece in the scheme's own form ("##pril" for WordPiece, mapped
// byte symbols like "Ġasp" for byte-level BPE). The span covers the note
// characters whose first byte falls inside the piece; byte-level pieces that
// begin mid-character carry an empty span at the running position, so a
// word's subword spans always partition its span in order.
struct SubwordToken {
  std::string text;
  std::size_t word_index = 0;
  Span span;
};

struct SubwordVocab {
  SubwordScheme scheme = SubwordScheme::WordPiece;
  std::string unknown_token;
  std::string continuation_marker;  // WordPiece only

  std::unordered_set<std::string> pieces;
  std::map<std::pair<std::string, std::string>, std::size_t> merge_ranks;  // ByteBPE only
};

// One piece per line; "[UNK]" must be present.
SubwordVocab load_wordpiece_vocab(const std::string& path);

// Vocabulary list (one token per line, "<unk>" required) plus ordered merges
// (one space-separated pair per line, '#'-prefixed lines skipped).
SubwordVocab load_bpe_vocab(const std::string& vocab_path, const std::string& merges_path);

// Tokenizes one word. WordPiece: greedy longest-match from the word start,
// whole word becomes the unknown token when no piece matches. ByteBPE:
// byte-level symbols with ordered merges, leading-space marker prepended to
// every word. `lowercase` folds ASCII case before matching.
std::vector<SubwordToken> tokenize_word(std::string_view word_text, const Span& word_span,
                                        std::size_t word_index, const SubwordVocab& vocab,
                                        bool lowercase);

// Inverse of the scheme's piece form: strips continuation markers
// (WordPiece) or unmaps byte symbols and drops the leading-space marker
// (ByteBPE). Reconstructs the tokenizer's input exactly unless an unknown
// token was emitted.
std::string join_subwords(const std::vector<std::string>& pieces, const SubwordVocab& vocab);

// GPT-2 style byte<->printable-code-point table used by the ByteBPE scheme.
char32_t byte_to_symbol(unsigned char byte);
int symbol_to_byte(char32_t cp);  // -1 when cp is not a mapped byte

}  // namespace medex
