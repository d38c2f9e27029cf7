#include "dense/text_util.hpp"

#include <array>
#include <cctype>
#include <utility>

namespace dense {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string content_digest(std::string_view data) {
    // FNV-1a 128 via __uint128_t; offset basis and prime per the FNV spec.
    using u128 = unsigned __int128;
    u128 h = (u128(0x6c62272e07bb0142ULL) << 64) | 0x62b821756295c58dULL;
    const u128 prime = (u128(0x0000000001000000ULL) << 64) | 0x000000000000013bULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= prime;
    }
    static const char* hexd = "0123456789abcdef";
    std::string out(32, '0');
    for (int i = 31; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hexd[static_cast<unsigned>(h & 0xf)];
        h >>= 4;
    }
    return out;
}

std::string to_hex(std::uint64_t value) {
    static const char* hexd = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hexd[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        out.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }
    return out;
}

namespace {
bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space_byte(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space_byte(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = true;  // swallow leading whitespace
    for (unsigned char c : s) {
        if (is_space_byte(c)) {
            if (!in_ws) out.push_back(' ');
            in_ws = true;
        } else {
            out.push_back(static_cast<char>(c));
            in_ws = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> word_tokens(std::string_view s) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : s) {
        unsigned char lc = c < 0x80 ? static_cast<unsigned char>(std::tolower(c)) : c;
        bool alnum = (lc >= 'a' && lc <= 'z') || (lc >= '0' && lc <= '9');
        if (alnum) {
            cur.push_back(static_cast<char>(lc));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?') {
            bool at_end = i + 1 == text.size();
            bool before_space = !at_end && is_space_byte(static_cast<unsigned char>(text[i + 1]));
            if (at_end || before_space) {
                std::string piece = trim(text.substr(start, i + 1 - start));
                if (!piece.empty()) sentences.push_back(std::move(piece));
                start = i + 1;
            }
        }
    }
    if (start < text.size()) {
        std::string piece = trim(text.substr(start));
        if (!piece.empty()) sentences.push_back(std::move(piece));
    }
    return sentences;
}

namespace {

// Composition table for the combining marks that show up in Latin clinical
// text. Maps (base letter, combining codepoint) -> composed codepoint.
std::uint32_t compose_pair(std::uint32_t base, std::uint32_t mark) {
    struct Entry { char base; std::uint32_t mark; std::uint32_t composed; };
    static constexpr Entry table[] = {
        {'a', 0x0300, 0x00E0}, {'a', 0x0301, 0x00E1}, {'a', 0x0302, 0x00E2},
        {'a', 0x0303, 0x00E3}, {'a', 0x0308, 0x00E4}, {'a', 0x030A, 0x00E5},
        {'e', 0x0300, 0x00E8}, {'e', 0x0301, 0x00E9}, {'e', 0x0302, 0x00EA},
        {'e', 0x0308, 0x00EB},
        {'i', 0x0300, 0x00EC}, {'i', 0x0301, 0x00ED}, {'i', 0x0302, 0x00EE},
        {'i', 0x0308, 0x00EF},
        {'n', 0x0303, 0x00F1},
        {'o', 0x0300, 0x00F2}, {'o', 0x0301, 0x00F3}, {'o', 0x0302, 0x00F4},
        {'o', 0x0303, 0x00F5}, {'o', 0x0308, 0x00F6},
        {'u', 0x0300, 0x00F9}, {'u', 0x0301, 0x00FA}, {'u', 0x0302, 0x00FB},
        {'u', 0x0308, 0x00FC},
        {'y', 0x0301, 0x00FD}, {'y', 0x0308, 0x00FF},
        {'c', 0x0327, 0x00E7},
        {'A', 0x0300, 0x00C0}, {'A', 0x0301, 0x00C1}, {'A', 0x0302, 0x00C2},
        {'A', 0x0303, 0x00C3}, {'A', 0x0308, 0x00C4}, {'A', 0x030A, 0x00C5},
        {'E', 0x0300, 0x00C8}, {'E', 0x0301, 0x00C9}, {'E', 0x0302, 0x00CA},
        {'E', 0x0308, 0x00CB},
        {'I', 0x0300, 0x00CC}, {'I', 0x0301, 0x00CD}, {'I', 0x0302, 0x00CE},
        {'I', 0x0308, 0x00CF},
        {'N', 0x0303, 0x00D1},
        {'O', 0x0300, 0x00D2}, {'O', 0x0301, 0x00D3}, {'O', 0x0302, 0x00D4},
        {'O', 0x0303, 0x00D5}, {'O', 0x0308, 0x00D6},
        {'U', 0x0300, 0x00D9}, {'U', 0x0301, 0x00DA}, {'U', 0x0302, 0x00DB},
        {'U', 0x0308, 0x00DC},
        {'Y', 0x0301, 0x00DD},
        {'C', 0x0327, 0x00C7},
    };
    if (base > 0x7F) return 0;
    for (const auto& e : table) {
        if (static_cast<std::uint32_t>(e.base) == base && e.mark == mark) return e.composed;
    }
    return 0;
}

void append_utf8(std::string& out, std::uint32_t cp) {
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

// Decodes one codepoint at `i`, advancing it. Returns false on malformed
// input, in which case a single raw byte was consumed into `raw`.
bool decode_utf8(std::string_view s, std::size_t& i, std::uint32_t& cp, char& raw) {
    unsigned char c0 = static_cast<unsigned char>(s[i]);
    raw = static_cast<char>(c0);
    if (c0 < 0x80) {
        cp = c0;
        ++i;
        return true;
    }
    int extra = 0;
    std::uint32_t value = 0;
    if ((c0 & 0xE0) == 0xC0) { extra = 1; value = c0 & 0x1F; }
    else if ((c0 & 0xF0) == 0xE0) { extra = 2; value = c0 & 0x0F; }
    else if ((c0 & 0xF8) == 0xF0) { extra = 3; value = c0 & 0x07; }
    else { ++i; return false; }
    if (i + static_cast<std::size_t>(extra) >= s.size()) { ++i; return false; }
    for (int k = 1; k <= extra; ++k) {
        unsigned char cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((cc & 0xC0) != 0x80) { ++i; return false; }
        value = (value << 6) | (cc & 0x3F);
    }
    i += static_cast<std::size_t>(extra) + 1;
    cp = value;
    return true;
}

}  // namespace

std::string normalize_unicode(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    // Pending ASCII base letter that a combining mark may attach to.
    bool have_pending = false;
    std::uint32_t pending = 0;
    auto flush = [&]() {
        if (have_pending) {
            append_utf8(out, pending);
            have_pending = false;
        }
    };
    while (i < s.size()) {
        std::uint32_t cp = 0;
        char raw = 0;
        std::size_t before = i;
        if (!decode_utf8(s, i, cp, raw)) {
            flush();
            out.push_back(raw);
            continue;
        }
        (void)before;
        if (cp == 0x0D) {  // CR or CRLF -> LF
            flush();
            if (i < s.size() && s[i] == '\n') ++i;
            out.push_back('\n');
            continue;
        }
        if (cp == 0xA0) cp = ' ';              // NBSP
        if (cp == 0xFEFF) continue;            // BOM / ZWNBSP
        if (cp < 0x20 && cp != '\n' && cp != '\t') {
            flush();
            continue;  // other control chars dropped
        }
        if (have_pending) {
            if (std::uint32_t composed = compose_pair(pending, cp)) {
                append_utf8(out, composed);
                have_pending = false;
                continue;
            }
            flush();
        }
        bool ascii_letter = cp < 0x80 && std::isalpha(static_cast<int>(cp));
        if (ascii_letter) {
            pending = cp;
            have_pending = true;
        } else {
            append_utf8(out, cp);
        }
    }
    flush();
    return out;
}

}  // namespace dense
