#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace sdf::text {

// A token together with its byte span in the source string. Spans refer to
// the normalized (NFC) string the tokenizer ran on.
struct Token {
    std::string value;
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const Token& other) const { return value == other.value; }
};

// Composes base letter + combining mark sequences for the Latin range
// (acute, grave, diaeresis, circumflex, tilde, ring, cedilla). ASCII and
// already-composed text pass through unchanged; unknown sequences are kept
// as-is. Invalid UTF-8 bytes are preserved verbatim.
std::string normalize_nfc(const std::string& utf8);

// Shared pipeline tokenizer: NFC, lowercase, split on whitespace and
// punctuation with punctuation kept as single-char tokens. Filters and
// metrics both run on these tokens.
std::vector<Token> tokenize_spans(const std::string& s);
std::vector<std::string> tokenize(const std::string& s);

// Word tokens only (punctuation dropped). Used for content comparisons.
std::vector<std::string> word_tokens(const std::string& s);

// Minimal suffix stripper: -ing, -ed, -es, -s (longest applicable, never
// below 3 chars). Matches the METEOR stem stage.
std::string stem(const std::string& token);

bool is_punct_token(const std::string& token);

// Loads one lowercase token per line; '#' lines and blanks skipped.
std::unordered_set<std::string> load_word_list(const std::string& path);

// Built-in English function-word list used when no stopword file is given.
const std::unordered_set<std::string>& default_stopwords();

std::string lowercase(const std::string& s);
std::string trim(const std::string& s);

}  // namespace sdf::text
