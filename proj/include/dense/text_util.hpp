#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dense {

// ---------------------------------------------------------------------------
// Hashing. FNV-1a, fixed constants, endian-free: the same bytes hash to the
// same value on every platform. Non-cryptographic; used for feature hashing,
// chunk ids, prompt digests and manifest checkpoints.
// ---------------------------------------------------------------------------

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// 128-bit FNV-1a rendered as 32 lowercase hex chars.
std::string content_digest(std::string_view data);

std::string to_hex(std::uint64_t value);

// ---------------------------------------------------------------------------
// Case / whitespace helpers (ASCII; bytes >= 0x80 pass through untouched).
// ---------------------------------------------------------------------------

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

/// Runs of whitespace (space, tab, newline, CR) become one space; trimmed.
std::string collapse_whitespace(std::string_view s);

/// Lowercased tokens split on non-alphanumeric runs; empties dropped.
/// "BP 120/80" -> {"bp", "120", "80"}.
std::vector<std::string> word_tokens(std::string_view s);

/// Splits on sentence-final . ! ? followed by whitespace or end of text.
/// Terminators stay attached; pieces are trimmed; empties dropped. A final
/// fragment without terminal punctuation counts as a sentence.
std::vector<std::string> split_sentences(std::string_view text);

// ---------------------------------------------------------------------------
// Unicode cleanup: composes common Latin base+combining-mark pairs (NFC
// direction), maps NBSP to space, CRLF/CR to LF, and drops control characters
// other than \n and \t. Bytes that are not valid UTF-8 pass through verbatim.
// Idempotent.
// ---------------------------------------------------------------------------

std::string normalize_unicode(std::string_view s);

}  // namespace dense
